//! Truncated power series in `q` whose coefficients are Laurent polynomials
//! in `ζ` with big-integer coefficients.
//!
//! A [`QSeries`] of truncation order `N` stores the coefficients of
//! `q^0, …, q^N`; everything at `q^{N+1}` and above is unknown and never
//! touched. Binary operations require equal truncation orders.
//!
//! Laurent coefficients are stored as a dense window `[low, low + len)` of
//! exponents, trimmed so that both ends are nonzero. The ζ-support at order
//! `q^n` of every generating function used here is an interval of width
//! `O(n)` with almost no interior zeros, so the dense window is both smaller
//! and much faster than a map for the shift-and-add loops below.

use std::cmp::{max, min};
use std::fmt;

use rayon::prelude::*;
use rug::Integer;

use crate::error::{Error, Result};

/// A finite Laurent polynomial `Σ c_e ζ^e` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Integer>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c ζ^e`.
    pub fn monomial(c: impl Into<Integer>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: e,
            coeffs: vec![c],
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<Integer>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_shifted(&Self::monomial(c, 0), e, false);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.high())
    }

    fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `ζ^e`, zero when absent.
    pub fn coeff(&self, e: i64) -> Integer {
        self.get(e).cloned().unwrap_or_default()
    }

    pub fn get(&self, e: i64) -> Option<&Integer> {
        if self.is_zero() || e < self.low || e > self.high() {
            return None;
        }
        let c = &self.coeffs[(e - self.low) as usize];
        (!c.is_zero()).then_some(c)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Integer)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Value at `ζ = 1`.
    pub fn sum_coeffs(&self) -> Integer {
        Integer::sum(self.coeffs.iter()).into()
    }

    /// `self += ± ζ^shift · other`.
    pub fn add_shifted(&mut self, other: &LaurentPoly, shift: i64, negate: bool) {
        if other.is_zero() {
            return;
        }
        let olow = other.low + shift;
        if self.is_zero() {
            self.low = olow;
            self.coeffs = if negate {
                other.coeffs.iter().map(|c| Integer::from(-c)).collect()
            } else {
                other.coeffs.clone()
            };
            return;
        }
        self.ensure_range(olow, olow + other.coeffs.len() as i64 - 1);
        let start = (olow - self.low) as usize;
        let dst = &mut self.coeffs[start..start + other.coeffs.len()];
        if negate {
            for (d, s) in dst.iter_mut().zip(&other.coeffs) {
                *d -= s;
            }
        } else {
            for (d, s) in dst.iter_mut().zip(&other.coeffs) {
                *d += s;
            }
        }
        self.trim();
    }

    /// `self += a · b`.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let lo = a.low + b.low;
        let hi = a.high() + b.high();
        if self.is_zero() {
            self.low = lo;
            self.coeffs.clear();
        }
        self.ensure_range(lo, hi);
        let base = (lo - self.low) as usize;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    self.coeffs[base + i + j] += x * y;
                }
            }
        }
        self.trim();
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_product(self, other);
        out
    }

    /// Multiplies by `ζ^e`.
    pub fn shifted(mut self, e: i64) -> LaurentPoly {
        if !self.is_zero() {
            self.low += e;
        }
        self
    }

    pub fn scaled(&self, k: &Integer) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| Integer::from(c * k)).collect(),
        }
    }

    /// Exact quotient by `1 − σζ`, or `None` when the division leaves a
    /// remainder.
    pub fn div_linear(&self, sign: Sign) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // (1 + sζ)·Σ q_i ζ^{low+i}: coefficient i is q_i + s·q_{i-1}.
        let s_is_plus = matches!(sign, Sign::Minus);
        let len = self.coeffs.len();
        if len < 2 {
            return None;
        }
        let mut quot: Vec<Integer> = Vec::with_capacity(len - 1);
        quot.push(self.coeffs[0].clone());
        for i in 1..len - 1 {
            let prev = &quot[i - 1];
            let next = if s_is_plus {
                Integer::from(&self.coeffs[i] - prev)
            } else {
                Integer::from(&self.coeffs[i] + prev)
            };
            quot.push(next);
        }
        let last = &quot[len - 2];
        let remainder_ok = if s_is_plus {
            self.coeffs[len - 1] == *last
        } else {
            Integer::from(-last) == self.coeffs[len - 1]
        };
        if !remainder_ok {
            return None;
        }
        let mut q = LaurentPoly {
            low: self.low,
            coeffs: quot,
        };
        q.trim();
        Some(q)
    }

    fn ensure_range(&mut self, lo: i64, hi: i64) {
        let cur_hi = self.high();
        if lo < self.low {
            let extra = (self.low - lo) as usize;
            let tail = max(0, hi - cur_hi) as usize;
            let mut v = Vec::with_capacity(extra + self.coeffs.len() + tail);
            v.resize_with(extra, Integer::new);
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = lo;
        }
        if hi > cur_hi {
            let len = self.coeffs.len() + (hi - cur_hi) as usize;
            self.coeffs.resize_with(len, Integer::new);
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            let a = Integer::from(c.abs_ref());
            match e {
                0 => write!(f, "{a}")?,
                _ if a == 1 => write!(f, "z^{e}")?,
                _ => write!(f, "{a}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Sign `σ` of a factor `1 − σ ζ^e q^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `1 − ζ^e q^j`
    Plus,
    /// `1 + ζ^e q^j`
    Minus,
}

/// One factor `1 − σ ζ^e q^j` with `j ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub sign: Sign,
    pub zeta_exp: i64,
    pub q_exp: usize,
}

impl Factor {
    pub fn new(sign: Sign, zeta_exp: i64, q_exp: usize) -> Self {
        Self {
            sign,
            zeta_exp,
            q_exp,
        }
    }
}

/// Number of factors in a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochCount {
    Finite(usize),
    Infinite,
}

/// `Π_{k=0}^{n−1} (1 − σ ζ^e q^{c + k·s})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PochFactorSpec {
    pub sign: Sign,
    pub zeta_exp: i64,
    pub offset: usize,
    pub step: usize,
    pub count: PochCount,
}

impl PochFactorSpec {
    /// Factors of the product that are not identically 1 modulo `q^{trunc+1}`.
    pub fn factors(&self, trunc: usize) -> impl Iterator<Item = Factor> + '_ {
        let n = match self.count {
            PochCount::Finite(n) => n,
            PochCount::Infinite => usize::MAX,
        };
        (0..n)
            .map(move |k| self.offset + k * self.step)
            .take_while(move |&j| j <= trunc)
            .map(move |j| Factor::new(self.sign, self.zeta_exp, j))
    }
}

/// A power series in `q` known modulo `q^{trunc+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    trunc: usize,
    coeffs: Vec<LaurentPoly>,
}

impl QSeries {
    pub fn zero(trunc: usize) -> Self {
        Self {
            trunc,
            coeffs: vec![LaurentPoly::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::monomial(1, 0, 0, trunc)
    }

    /// `c ζ^e q^n`; vanishes when `n > trunc`.
    pub fn monomial(c: impl Into<Integer>, zeta_exp: i64, q_exp: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if q_exp <= trunc {
            s.coeffs[q_exp] = LaurentPoly::monomial(c, zeta_exp);
        }
        s
    }

    pub fn from_coeffs(trunc: usize, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != trunc + 1 {
            return Err(Error::Usage(format!(
                "expected {} coefficients for truncation {trunc}, got {}",
                trunc + 1,
                coeffs.len()
            )));
        }
        Ok(Self { trunc, coeffs })
    }

    /// Sum of `c ζ^e q^n` terms, dropping those with `n > trunc`.
    pub fn from_terms<I, C>(trunc: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, usize, C)>,
        C: Into<Integer>,
    {
        let mut s = Self::zero(trunc);
        for (e, n, c) in terms {
            if n <= trunc {
                s.coeffs[n].add_shifted(&LaurentPoly::monomial(c, e), 0, false);
            }
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<LaurentPoly> {
        self.coeffs
    }

    /// The Laurent polynomial multiplying `q^n`.
    pub fn coeff_poly(&self, n: usize) -> Result<&LaurentPoly> {
        self.coeffs.get(n).ok_or(Error::OrderOutOfRange {
            order: n,
            trunc: self.trunc,
        })
    }

    /// Coefficient of `ζ^m q^n`.
    pub fn coeff(&self, m: i64, n: usize) -> Result<Integer> {
        Ok(self.coeff_poly(n)?.coeff(m))
    }

    /// Mutable access for callers that assemble series by hand.
    pub fn coeff_poly_mut(&mut self, n: usize) -> Result<&mut LaurentPoly> {
        let trunc = self.trunc;
        self.coeffs
            .get_mut(n)
            .ok_or(Error::OrderOutOfRange { order: n, trunc })
    }

    fn check_trunc(&self, other: &QSeries) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_trunc(other)?;
        let mut out = self.clone();
        for (d, s) in out.coeffs.iter_mut().zip(&other.coeffs) {
            d.add_shifted(s, 0, false);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.check_trunc(other)?;
        let mut out = self.clone();
        for (d, s) in out.coeffs.iter_mut().zip(&other.coeffs) {
            d.add_shifted(s, 0, true);
        }
        Ok(out)
    }

    pub fn neg(&self) -> QSeries {
        let mut out = QSeries::zero(self.trunc);
        for (d, s) in out.coeffs.iter_mut().zip(&self.coeffs) {
            d.add_shifted(s, 0, true);
        }
        out
    }

    /// Product modulo `q^{trunc+1}`; q-orders are computed in parallel.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_trunc(other)?;
        let a = &self.coeffs;
        let b = &other.coeffs;
        let nz_a: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
        let coeffs = (0..=self.trunc)
            .into_par_iter()
            .map(|n| {
                let mut acc = LaurentPoly::zero();
                for &i in nz_a.iter().take_while(|&&i| i <= n) {
                    acc.add_product(&a[i], &b[n - i]);
                }
                acc
            })
            .collect();
        Ok(QSeries {
            trunc: self.trunc,
            coeffs,
        })
    }

    /// Multiplies every q-coefficient by a Laurent polynomial in `ζ`.
    pub fn mul_laurent(&self, p: &LaurentPoly) -> QSeries {
        QSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_q(&self, k: usize) -> QSeries {
        let mut out = QSeries::zero(self.trunc);
        for n in k..=self.trunc {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// Multiplies by `1 − σ ζ^e q^j`.
    pub fn mul_factor(&self, sign: Sign, e: i64, j: usize) -> Result<QSeries> {
        if j == 0 {
            return Err(Error::ZeroStep);
        }
        let mut out = self.clone();
        mul_factor_slice(&mut out.coeffs, Factor::new(sign, e, j));
        Ok(out)
    }

    /// Divides by `1 − σ ζ^e q^j` via the geometric series `Σ_i σ^i ζ^{ie} q^{ij}`.
    pub fn div_factor(&self, sign: Sign, e: i64, j: usize) -> Result<QSeries> {
        if j == 0 {
            return Err(Error::ZeroStep);
        }
        let mut out = self.clone();
        div_factor_slice(&mut out.coeffs, Factor::new(sign, e, j));
        Ok(out)
    }

    /// Exact quotient by `1 + ζ`, order by order.
    pub fn div_one_plus_zeta(&self) -> Result<QSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                c.div_linear(Sign::Minus).ok_or(Error::NotDivisible {
                    order: n,
                    divisor: "1 + ζ",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QSeries {
            trunc: self.trunc,
            coeffs,
        })
    }

    /// Coefficient sums at `ζ = 1`, one per q-order.
    pub fn at_zeta_one(&self) -> Vec<Integer> {
        self.coeffs.iter().map(LaurentPoly::sum_coeffs).collect()
    }

    /// First `(order, ζ-exponent, self, other)` where the two series differ.
    pub fn first_difference(&self, other: &QSeries) -> Option<(usize, i64, Integer, Integer)> {
        let top = min(self.trunc, other.trunc);
        for n in 0..=top {
            let (a, b) = (&self.coeffs[n], &other.coeffs[n]);
            if a == b {
                continue;
            }
            let lo = min(a.min_exponent().unwrap_or(0), b.min_exponent().unwrap_or(0));
            let hi = max(a.max_exponent().unwrap_or(0), b.max_exponent().unwrap_or(0));
            for e in lo..=hi {
                let (x, y) = (a.coeff(e), b.coeff(e));
                if x != y {
                    return Some((n, e, x, y));
                }
            }
        }
        None
    }
}

/// `(a; q)_n`-style product described by `spec`, modulo `q^{trunc+1}`.
pub fn pochhammer(spec: &PochFactorSpec, trunc: usize) -> Result<QSeries> {
    if spec.offset == 0 || spec.step == 0 {
        return Err(Error::Usage(format!(
            "Pochhammer offset and step must be positive (got offset {}, step {})",
            spec.offset, spec.step
        )));
    }
    let mut out = QSeries::one(trunc);
    for f in spec.factors(trunc) {
        mul_factor_slice(&mut out.coeffs, f);
    }
    Ok(out)
}

/// In-place multiplication of a coefficient window by `1 − σ ζ^e q^j`.
pub(crate) fn mul_factor_slice(c: &mut [LaurentPoly], f: Factor) {
    let j = f.q_exp;
    if j == 0 || j >= c.len() {
        return;
    }
    let negate = matches!(f.sign, Sign::Plus);
    for n in (j..c.len()).rev() {
        let (lo, hi) = c.split_at_mut(n);
        hi[0].add_shifted(&lo[n - j], f.zeta_exp, negate);
    }
}

/// In-place division of a coefficient window by `1 − σ ζ^e q^j`.
pub(crate) fn div_factor_slice(c: &mut [LaurentPoly], f: Factor) {
    let j = f.q_exp;
    if j == 0 || j >= c.len() {
        return;
    }
    let negate = matches!(f.sign, Sign::Minus);
    for n in j..c.len() {
        let (lo, hi) = c.split_at_mut(n);
        hi[0].add_shifted(&lo[n - j], f.zeta_exp, negate);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn laurent_invariants_after_cancellation() {
        let mut p = lp(&[(-2, 3), (0, 1), (4, 5)]);
        p.add_shifted(&lp(&[(-2, 3), (4, 5)]), 0, true);
        assert_eq!(p, LaurentPoly::one());
        p.add_shifted(&LaurentPoly::one(), 0, true);
        assert!(p.is_zero());
        assert_eq!(p, LaurentPoly::zero());
    }

    #[test]
    fn mul_small_product() {
        // (1 + ζq)(1 − ζ^{-1}q) = 1 + (ζ − ζ^{-1})q − q²
        let t = 4;
        let a = QSeries::from_terms(t, [(0, 0, 1), (1, 1, 1)]);
        let b = QSeries::from_terms(t, [(0, 0, 1), (-1, 1, -1)]);
        let expected = QSeries::from_terms(t, [(0, 0, 1), (1, 1, 1), (-1, 1, -1), (0, 2, -1)]);
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn mul_identity_and_telescoping() {
        let t = 9;
        let a = QSeries::from_terms(t, [(2, 1, 3), (-1, 4, -7), (0, 9, 11)]);
        assert_eq!(a.mul(&QSeries::one(t)).unwrap(), a);

        let geo = QSeries::from_terms(t, (0..=t).map(|n| (0, n, 1)));
        let one_minus_q = QSeries::from_terms(t, [(0, 0, 1), (0, 1, -1)]);
        assert_eq!(geo.mul(&one_minus_q).unwrap(), QSeries::one(t));
    }

    #[test]
    fn mismatched_truncation_is_rejected() {
        let err = QSeries::one(3).mul(&QSeries::one(4)).unwrap_err();
        assert_eq!(err, Error::TruncationMismatch { left: 3, right: 4 });
        assert!(QSeries::one(3).add(&QSeries::one(5)).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        let t = 6;
        // (ζq; q)_2
        let spec = PochFactorSpec {
            sign: Sign::Plus,
            zeta_exp: 1,
            offset: 1,
            step: 1,
            count: PochCount::Finite(2),
        };
        let expected = QSeries::from_terms(t, [(0, 0, 1), (1, 1, -1), (1, 2, -1), (2, 3, 1)]);
        assert_eq!(pochhammer(&spec, t).unwrap(), expected);

        // (−q; q)_2
        let spec = PochFactorSpec {
            sign: Sign::Minus,
            zeta_exp: 0,
            offset: 1,
            step: 1,
            count: PochCount::Finite(2),
        };
        let expected = QSeries::from_terms(t, (0..=3).map(|n| (0, n, 1)));
        assert_eq!(pochhammer(&spec, t).unwrap(), expected);

        let empty = PochFactorSpec {
            count: PochCount::Finite(0),
            ..spec
        };
        assert_eq!(pochhammer(&empty, t).unwrap(), QSeries::one(t));
    }

    #[test]
    fn pochhammer_rejects_zero_offset() {
        let spec = PochFactorSpec {
            sign: Sign::Plus,
            zeta_exp: 0,
            offset: 0,
            step: 1,
            count: PochCount::Infinite,
        };
        assert!(matches!(pochhammer(&spec, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn infinite_pochhammer_is_euler_product() {
        // (q; q)_∞ = Σ (−1)^k q^{k(3k−1)/2} over k ∈ ℤ.
        let t = 40;
        let spec = PochFactorSpec {
            sign: Sign::Plus,
            zeta_exp: 0,
            offset: 1,
            step: 1,
            count: PochCount::Infinite,
        };
        let mut pentagonal = Vec::new();
        for k in -6i64..=6 {
            let e = k * (3 * k - 1) / 2;
            if e as usize <= t {
                pentagonal.push((0, e as usize, if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        assert_eq!(pochhammer(&spec, t).unwrap(), QSeries::from_terms(t, pentagonal));
    }

    #[test]
    fn div_factor_examples() {
        let t = 7;
        let one = QSeries::one(t);
        let geo = QSeries::from_terms(t, (0..=t).map(|n| (0, n, 1)));
        assert_eq!(one.div_factor(Sign::Plus, 0, 1).unwrap(), geo);

        let zgeo = QSeries::from_terms(t, (0..=t).map(|n| (n as i64, n, 1)));
        assert_eq!(one.div_factor(Sign::Plus, 1, 1).unwrap(), zgeo);

        let a = QSeries::from_terms(t, [(0, 0, 1), (0, 2, -1)]);
        let expected = QSeries::from_terms(t, [(0, 0, 1), (0, 1, 1)]);
        assert_eq!(a.div_factor(Sign::Plus, 0, 1).unwrap(), expected);

        assert_eq!(one.div_factor(Sign::Plus, 0, 0), Err(Error::ZeroStep));
    }

    #[test]
    fn div_one_plus_zeta_examples() {
        let t = 3;
        let a = QSeries::from_terms(t, [(0, 0, 1), (1, 0, 1)]);
        assert_eq!(a.div_one_plus_zeta().unwrap(), QSeries::one(t));

        let b = QSeries::from_terms(t, [(-1, 1, 1), (0, 1, 1)]);
        assert_eq!(
            b.div_one_plus_zeta().unwrap(),
            QSeries::monomial(1, -1, 1, t)
        );

        assert_eq!(
            QSeries::one(t).div_one_plus_zeta(),
            Err(Error::NotDivisible {
                order: 0,
                divisor: "1 + ζ"
            })
        );
    }

    #[test]
    fn div_linear_minus_sign() {
        // (1 − ζ)(2ζ^{-1} + 3 − ζ²) divided by (1 − ζ)
        let q = lp(&[(-1, 2), (0, 3), (2, -1)]);
        let f = lp(&[(0, 1), (1, -1)]);
        assert_eq!(f.mul(&q).div_linear(Sign::Plus), Some(q));
        assert_eq!(lp(&[(0, 1), (1, 1)]).div_linear(Sign::Plus), None);
    }

    #[test]
    fn coeff_out_of_range() {
        let s = QSeries::one(2);
        assert_eq!(s.coeff(0, 0).unwrap(), 1);
        assert_eq!(s.coeff(5, 2).unwrap(), 0);
        assert_eq!(
            s.coeff(0, 3),
            Err(Error::OrderOutOfRange { order: 3, trunc: 2 })
        );
    }

    fn arb_series(trunc: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-4i64..=4, 0..=trunc, -1000i64..=1000), 0..12)
            .prop_map(move |terms| QSeries::from_terms(trunc, terms))
    }

    fn arb_factor() -> impl Strategy<Value = (Sign, i64, usize)> {
        (any::<bool>(), -3i64..=3, 1usize..=6)
            .prop_map(|(s, e, j)| (if s { Sign::Plus } else { Sign::Minus }, e, j))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_axioms(
            (a, b, c) in (0usize..=20)
                .prop_flat_map(|t| (arb_series(t), arb_series(t), arb_series(t)))
        ) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn div_factor_inverts_mul_factor(a in arb_series(15), (s, e, j) in arb_factor()) {
            let there = a.mul_factor(s, e, j).unwrap().div_factor(s, e, j).unwrap();
            prop_assert_eq!(&there, &a);
            let back = a.div_factor(s, e, j).unwrap().mul_factor(s, e, j).unwrap();
            prop_assert_eq!(&back, &a);
        }

        #[test]
        fn pochhammer_splits(
            a in 0usize..5, b in 0usize..5, c in 1usize..4, s in 1usize..4,
            e in -2i64..=2, minus in any::<bool>(),
        ) {
            let t = 18;
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            let spec = |offset, n| PochFactorSpec {
                sign, zeta_exp: e, offset, step: s, count: PochCount::Finite(n),
            };
            let whole = pochhammer(&spec(c, a + b), t).unwrap();
            let left = pochhammer(&spec(c, a), t).unwrap();
            let right = pochhammer(&spec(c + a * s, b), t).unwrap();
            prop_assert_eq!(whole, left.mul(&right).unwrap());
        }
    }
}
