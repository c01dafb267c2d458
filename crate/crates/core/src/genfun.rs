//! Generating functions of the four families, built two independent ways.
//!
//! The left side is the combinatorial sum of quotients, evaluated in nested
//! (Horner) form so that every term reuses the factors of the previous one.
//! The right side is the product times partial theta function expression.
//! Rank counts are read from a process-wide cache of left-side series.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rug::Integer;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::qseries::{
    div_factor_slice, mul_factor_slice, pochhammer, Factor, LaurentPoly, PochCount,
    PochFactorSpec, QSeries, Sign,
};

/// Truncation used when the cache is first filled.
pub const DEFAULT_TRUNC: usize = 500;
/// Default ceiling on cached truncation orders.
pub const DEFAULT_MAX_TRUNC: usize = 2000;

/// One level `a_k` of a nested sum `1 + a_1(1 + a_2(1 + ⋯))`:
/// `a_k = q^shift · Π num / Π den`.
struct Step {
    shift: usize,
    num: Vec<Factor>,
    den: Vec<Factor>,
}

fn pair_den(q_exp: usize) -> Vec<Factor> {
    vec![
        Factor::new(Sign::Plus, 1, q_exp),
        Factor::new(Sign::Plus, -1, q_exp),
    ]
}

/// Evaluates `prefix · (1 + a_1(1 + a_2(1 + ⋯)))` modulo `q^{trunc+1}`,
/// keeping only as many q-orders at each level as can still reach `trunc`.
fn nested_sum(trunc: usize, prefix: Option<Step>, step: impl Fn(usize) -> Step) -> QSeries {
    let pre_shift = prefix.as_ref().map_or(0, |p| p.shift);
    if pre_shift > trunc {
        return QSeries::zero(trunc);
    }
    let budget = trunc - pre_shift;

    let mut steps = Vec::new();
    let mut val = 0;
    loop {
        let s = step(steps.len() + 1);
        if val + s.shift > budget {
            break;
        }
        val += s.shift;
        steps.push((val, s));
    }

    let mut acc: Vec<LaurentPoly> = vec![LaurentPoly::zero(); budget - val + 1];
    acc[0] = LaurentPoly::one();
    for (k, (v_k, s)) in steps.iter().enumerate().rev() {
        let v_prev = if k == 0 { 0 } else { steps[k - 1].0 };
        let len = budget - v_prev + 1;
        let mut next = vec![LaurentPoly::zero(); len];
        let shift = v_k - v_prev;
        for (dst, src) in next[shift..].iter_mut().zip(acc.drain(..)) {
            *dst = src;
        }
        for f in &s.num {
            mul_factor_slice(&mut next, *f);
        }
        for f in &s.den {
            div_factor_slice(&mut next, *f);
        }
        next[0].add_shifted(&LaurentPoly::one(), 0, false);
        acc = next;
    }

    let mut out = vec![LaurentPoly::zero(); trunc + 1];
    for (dst, src) in out[pre_shift..].iter_mut().zip(acc) {
        *dst = src;
    }
    if let Some(p) = prefix {
        for f in &p.num {
            mul_factor_slice(&mut out, *f);
        }
        for f in &p.den {
            div_factor_slice(&mut out, *f);
        }
    }
    QSeries::from_coeffs(trunc, out).expect("length is trunc + 1")
}

/// Combinatorial side:
/// * U: `Σ q^n / ((ζq)_n (ζ⁻¹q)_n)`
/// * W: `Σ q^{2n} / ((ζq)_n (ζ⁻¹q)_n)`
/// * V: `Σ (q^{n+1})_n q^n / ((ζq)_n (ζ⁻¹q)_n)`
/// * ν: `Σ (−q)_{2n} q^{2n+1} / ((ζq; q²)_{n+1} (ζ⁻¹q; q²)_{n+1})`
pub fn build_lhs(family: Family, trunc: usize) -> QSeries {
    match family {
        Family::U => nested_sum(trunc, None, |k| Step {
            shift: 1,
            num: vec![],
            den: pair_den(k),
        }),
        Family::W => nested_sum(trunc, None, |k| Step {
            shift: 2,
            num: vec![],
            den: pair_den(k),
        }),
        // (q^{k+1})_k / (q^k)_{k−1} = (1 + q^k)(1 − q^{2k−1})
        Family::V => nested_sum(trunc, None, |k| Step {
            shift: 1,
            num: vec![
                Factor::new(Sign::Minus, 0, k),
                Factor::new(Sign::Plus, 0, 2 * k - 1),
            ],
            den: pair_den(k),
        }),
        Family::Nu => nested_sum(
            trunc,
            Some(Step {
                shift: 1,
                num: vec![],
                den: pair_den(1),
            }),
            |k| Step {
                shift: 2,
                num: vec![
                    Factor::new(Sign::Minus, 0, 2 * k - 1),
                    Factor::new(Sign::Minus, 0, 2 * k),
                ],
                den: pair_den(2 * k + 1),
            },
        ),
    }
}

/// `Σ_{n ≥ n0} sign(n) ζ^{ze(n)} q^{qe(n)}` for a partial theta series whose
/// q-exponent `qe` is increasing in `n`.
fn theta_sum(
    trunc: usize,
    n0: i64,
    sign: impl Fn(i64) -> i64,
    ze: impl Fn(i64) -> i64,
    qe: impl Fn(i64) -> i64,
) -> QSeries {
    let terms = (n0..)
        .take_while(|&n| qe(n) <= trunc as i64)
        .map(|n| (ze(n), qe(n) as usize, sign(n)));
    QSeries::from_terms(trunc, terms)
}

fn alt(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

/// `1 / ((ζq)_∞ (ζ⁻¹q)_∞)` by repeated geometric division.
pub fn zeta_product_inverse(trunc: usize) -> QSeries {
    let mut c = QSeries::one(trunc).into_coeffs();
    for j in 1..=trunc {
        for f in pair_den(j) {
            div_factor_slice(&mut c, f);
        }
    }
    QSeries::from_coeffs(trunc, c).expect("length is trunc + 1")
}

/// `(−q)_∞ / ((ζq; q²)_∞ (ζ⁻¹q; q²)_∞)`.
fn nu_product(trunc: usize) -> QSeries {
    let spec = PochFactorSpec {
        sign: Sign::Minus,
        zeta_exp: 0,
        offset: 1,
        step: 1,
        count: PochCount::Infinite,
    };
    let mut c = pochhammer(&spec, trunc)
        .expect("offset and step are positive")
        .into_coeffs();
    for j in (1..=trunc).step_by(2) {
        for f in pair_den(j) {
            div_factor_slice(&mut c, f);
        }
    }
    QSeries::from_coeffs(trunc, c).expect("length is trunc + 1")
}

fn ok<T>(r: Result<T>) -> T {
    r.expect("operands share one truncation order")
}

/// Product and partial theta side of each identity.
pub fn build_rhs(family: Family, trunc: usize) -> Result<QSeries> {
    let t = trunc;
    let one_minus_z = lp(&[(0, 1), (1, -1)]);
    let one_plus_z2 = lp(&[(0, 1), (2, 1)]);
    match family {
        Family::U => {
            let p = zeta_product_inverse(t);
            let theta = theta_sum(t, 0, alt, |n| 2 * n + 1, |n| n * (n + 1) / 2);
            // (1 − ζ²q^{2n+1}) split into its two monomials
            let corr = theta_sum(t, 0, alt, |n| 3 * n, |n| n * (3 * n + 1) / 2).add(&theta_sum(
                t,
                0,
                |n| -alt(n),
                |n| 3 * n + 2,
                |n| n * (3 * n + 1) / 2 + 2 * n + 1,
            ));
            Ok(ok(ok(theta.mul(&p)).add(&ok(corr).mul_laurent(&one_minus_z))))
        }
        Family::W => {
            let p = zeta_product_inverse(t);
            let theta = theta_sum(t, 1, alt, |n| 2 * n, |n| n * (n + 1) / 2)
                .mul_laurent(&one_plus_z2)
                .add(&QSeries::monomial(1, 2, 0, t));
            let corr = ok(theta_sum(t, 1, alt, |n| 3 * n - 2, |n| n * (3 * n - 1) / 2).add(
                &theta_sum(t, 1, alt, |n| 3 * n - 1, |n| n * (3 * n - 1) / 2 + n),
            ))
            .mul_laurent(&one_plus_z2.mul(&one_minus_z));
            let constant = QSeries::from_terms(t, [(0, 0, 1), (2, 0, -1)]);
            Ok(ok(ok(ok(theta).mul(&p)).add(&corr)).add(&constant)?)
        }
        Family::V => {
            let p = zeta_product_inverse(t);
            let theta = ok(theta_sum(t, 0, |_| 1, |n| 3 * n + 1, |n| 3 * n * n + 2 * n).add(
                &theta_sum(
                    t,
                    0,
                    |_| -1,
                    |n| 3 * n + 2,
                    |n| 3 * n * n + 2 * n + 2 * n + 1,
                ),
            ));
            let corr = theta_sum(t, 0, |_| 1, |n| n, |n| n * n + n).mul_laurent(&one_minus_z);
            Ok(ok(ok(theta.mul(&p)).add(&corr)))
        }
        Family::Nu => {
            let q = nu_product(t);
            let theta = theta_sum(t, 0, alt, |n| n + 1, |n| n * (n + 1) / 2);
            let corr = theta_sum(t, 0, alt, |n| n + 1, |n| n * n + n);
            ok(ok(theta.mul(&q)).sub(&corr)).div_one_plus_zeta()
        }
    }
}

/// Outcome of a coefficientwise series comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub label: String,
    pub trunc: usize,
    pub mismatch: Option<Mismatch>,
}

/// First differing coefficient, ordered by q-order then ζ-exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub order: usize,
    pub zeta_exp: i64,
    pub left: Integer,
    pub right: Integer,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl std::fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.mismatch {
            None => write!(f, "{} (trunc {}): pass", self.label, self.trunc),
            Some(m) => write!(
                f,
                "{} (trunc {}): FAIL at q^{} ζ^{}: {} vs {}",
                self.label, self.trunc, m.order, m.zeta_exp, m.left, m.right
            ),
        }
    }
}

/// Compares two series coefficientwise.
pub fn compare_series(label: &str, left: &QSeries, right: &QSeries) -> Result<IdentityReport> {
    if left.trunc() != right.trunc() {
        return Err(Error::TruncationMismatch {
            left: left.trunc(),
            right: right.trunc(),
        });
    }
    let mismatch = left
        .first_difference(right)
        .map(|(order, zeta_exp, left, right)| Mismatch {
            order,
            zeta_exp,
            left,
            right,
        });
    Ok(IdentityReport {
        label: label.to_string(),
        trunc: left.trunc(),
        mismatch,
    })
}

/// Checks `build_lhs(family) == build_rhs(family)` up to `q^trunc`.
pub fn check_identity(family: Family, trunc: usize) -> Result<IdentityReport> {
    let lhs = build_lhs(family, trunc);
    let rhs = build_rhs(family, trunc)?;
    compare_series(&format!("identity {family}"), &lhs, &rhs)
}

/// `prefactor / (q)²_∞ · Σ_{n∈ℤ} (−1)^n q^{n(n+1)/2} / (1 − ζq^n)` with the
/// `n = 0` term taken as 1 (its pole cancels against `1 − ζ`).
pub fn crank_form(trunc: usize, prefactor: &LaurentPoly) -> QSeries {
    let t = trunc as i64;
    let mut lerch = QSeries::zero(trunc);
    for p in 1.. {
        let base = p * (p + 1) / 2;
        if base > t {
            break;
        }
        // n = p: (−1)^p Σ_i ζ^i q^{p(p+1)/2 + pi}
        // n = −p: (−1)^{p+1} ζ^{-1} Σ_i ζ^{-i} q^{p(p+1)/2 + pi}
        for i in 0.. {
            let e = base + p * i;
            if e > t {
                break;
            }
            let c = lerch.coeff_poly_mut(e as usize).expect("e <= trunc");
            c.add_shifted(&LaurentPoly::monomial(alt(p), i), 0, false);
            c.add_shifted(&LaurentPoly::monomial(-alt(p), -1 - i), 0, false);
        }
    }
    let mut c = lerch.mul_laurent(prefactor).into_coeffs();
    c[0].add_shifted(&LaurentPoly::one(), 0, false);
    for _ in 0..2 {
        for j in 1..=trunc {
            div_factor_slice(&mut c, Factor::new(Sign::Plus, 0, j));
        }
    }
    QSeries::from_coeffs(trunc, c).expect("length is trunc + 1")
}

/// Checks the crank-generating-function form of `1/((ζq)_∞(ζ⁻¹q)_∞)`.
pub fn check_crank_identity(trunc: usize) -> Result<IdentityReport> {
    check_crank_identity_with(trunc, &lp(&[(0, 1), (1, -1)]))
}

/// As [`check_crank_identity`] with an arbitrary prefactor in place of `1 − ζ`.
pub fn check_crank_identity_with(trunc: usize, prefactor: &LaurentPoly) -> Result<IdentityReport> {
    compare_series(
        &format!("crank identity, prefactor {prefactor}"),
        &zeta_product_inverse(trunc),
        &crank_form(trunc, prefactor),
    )
}

struct RankCache {
    tables: [RwLock<Option<Arc<QSeries>>>; 4],
    builders: [Mutex<()>; 4],
    max_trunc: AtomicUsize,
}

fn cache() -> &'static RankCache {
    static CACHE: OnceLock<RankCache> = OnceLock::new();
    CACHE.get_or_init(|| RankCache {
        tables: Default::default(),
        builders: Default::default(),
        max_trunc: AtomicUsize::new(DEFAULT_MAX_TRUNC),
    })
}

/// Raises or lowers the ceiling on cached truncation orders.
pub fn set_max_trunc(max: usize) {
    cache().max_trunc.store(max, Ordering::Relaxed);
}

pub fn max_trunc() -> usize {
    cache().max_trunc.load(Ordering::Relaxed)
}

/// The cached left-side series for `family`, covering at least `q^trunc`.
///
/// A cache miss rebuilds at `max(trunc, DEFAULT_TRUNC, 2·current)`, capped at
/// the configured ceiling, so that scans over increasing `n` rebuild only
/// logarithmically often.
pub fn series(family: Family, trunc: usize) -> Result<Arc<QSeries>> {
    let c = cache();
    let slot = &c.tables[family.index()];
    let cached = |slot: &RwLock<Option<Arc<QSeries>>>| {
        slot.read()
            .expect("cache lock poisoned")
            .as_ref()
            .filter(|s| s.trunc() >= trunc)
            .cloned()
    };
    if let Some(s) = cached(slot) {
        return Ok(s);
    }
    let max = max_trunc();
    if trunc > max {
        return Err(Error::Usage(format!(
            "n = {trunc} exceeds the configured maximum truncation {max}"
        )));
    }
    let _guard = c.builders[family.index()]
        .lock()
        .expect("builder lock poisoned");
    if let Some(s) = cached(slot) {
        return Ok(s);
    }
    let current = slot
        .read()
        .expect("cache lock poisoned")
        .as_ref()
        .map_or(0, |s| s.trunc());
    let target = trunc.max(DEFAULT_TRUNC).max(2 * current).min(max);
    let built = Arc::new(build_lhs(family, target));
    *slot.write().expect("cache lock poisoned") = Some(built.clone());
    Ok(built)
}

/// `#{sequences of weight n and rank m}` for `family`.
pub fn rank_count(family: Family, m: i64, n: usize) -> Result<Integer> {
    series(family, n)?.coeff(m, n)
}
