//! Exact asymptotic expansions in terms of Bessel profiles.
//!
//! Three sources of coefficients are kept side by side:
//! * [`theorem_series`]: the multi-index sums of the published theorems,
//! * [`corollary_series`]: the published three-term tables, stored as data,
//! * [`wright_series`]: the near-pole expansion coefficients `A(M)` pushed
//!   through the generic Wright formula, see [`wright_input`].
//!
//! For `u`, `w` and `v` the theorem sums and the near-pole coefficients
//! differ by a sign `(−1)^s` in the `q^{−1/24}` expansion; the near-pole
//! version is the one that matches exact counts (see the README).

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::specfun::{
    bernoulli_poly, bessel_i_scaled, euler_number, euler_poly, pi, pi_poly_eval, ComplexPiPoly,
    PiPoly, ProfileKind, Quad,
};

fn fact(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn sign(e: u32) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn pow_u(base: u32, e: u32) -> Integer {
    Integer::from(base).pow(e)
}

/// `α_{m,2k+1}`: the Taylor coefficients defined by
/// `ζ^{−1/2}(1 − ζ) cos(2πmz) = Σ i α_{m,2k+1} z^{2k+1}`, that is, those of
/// `−2 sin(πz) cos(2πmz)`.
pub fn alpha(m: i64, index: u32) -> Result<PiPoly> {
    if index.is_multiple_of(2) {
        return Err(Error::Usage(format!("alpha needs an odd index, got {index}")));
    }
    let k = (index - 1) / 2;
    let a = Integer::from(2 * m + 1).pow(index) - Integer::from(2 * m - 1).pow(index);
    let r = Rational::from((a, fact(index))) * -sign(k);
    Ok(PiPoly::rational(r, index as i32))
}

/// `β_{m,2k}`: the Taylor coefficients of `cos(2πmz) / (2 cos(πz))`.
pub fn beta(m: i64, index: u32) -> Result<PiPoly> {
    if index % 2 == 1 {
        return Err(Error::Usage(format!("beta needs an even index, got {index}")));
    }
    let k = index / 2;
    let mut r = Rational::new();
    for a in 0..=k {
        let b = k - a;
        // cos(2πmz): (−1)^a (2m)^{2a} / (2a)!;  sec(πz): (−1)^b E_{2b} / (2b)!
        let c = Integer::from(2 * m).pow(2 * a) * euler_number(2 * b);
        r += Rational::from((c, fact(2 * a) * fact(2 * b))) * sign(a + b);
    }
    Ok(PiPoly::rational(r / 2u32, index as i32))
}

/// `γ_{2ℓ,j}(κ) = (2κ)^j (2κπ)^{2ℓ} (−1)^ℓ π^j B_{2j+2ℓ+1}(1/κ) / ((2ℓ)! j! (2j+2ℓ+1))`.
pub fn gamma_const(two_ell: u32, j: u32, kappa: u32) -> Result<PiPoly> {
    if two_ell % 2 == 1 {
        return Err(Error::Usage(format!("gamma needs an even first index, got {two_ell}")));
    }
    if kappa != 3 && kappa != 4 {
        return Err(Error::Usage(format!("gamma is defined here for kappa 3 or 4, got {kappa}")));
    }
    let ell = two_ell / 2;
    let n = 2 * j + two_ell + 1;
    let b = bernoulli_poly(n, &Rational::from((1, kappa)));
    let num = pow_u(2 * kappa, j + two_ell) * b;
    let den = fact(two_ell) * fact(j) * n;
    Ok(PiPoly::rational(num / den * sign(ell), (two_ell + j) as i32))
}

fn euler0(n: u32) -> Rational {
    euler_poly(n, &Rational::new())
}

/// `Σ c_k P_k(n)` over Bessel profiles `P_k` of one kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymSeries {
    pub family: Family,
    pub m: i64,
    pub kind: ProfileKind,
    terms: BTreeMap<u32, PiPoly>,
}

impl AsymSeries {
    pub fn new(family: Family, m: i64) -> Self {
        Self {
            family,
            m,
            kind: kind_of(family),
            terms: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, index: u32, c: &PiPoly) {
        let e = self.terms.entry(index).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    /// Coefficient of the profile with Bessel index `k`.
    pub fn coeff(&self, k: u32) -> PiPoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero `(index, coefficient)` pairs in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &PiPoly)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keeps only the terms with index at most `k`.
    pub fn truncated(&self, k: u32) -> AsymSeries {
        let mut out = self.clone();
        out.terms.retain(|&i, _| i <= k);
        out
    }
}

/// `X` profiles for `u`, `w`, `v`; `Y` profiles for `ν`.
pub fn kind_of(family: Family) -> ProfileKind {
    match family {
        Family::Nu => ProfileKind::Y,
        _ => ProfileKind::X,
    }
}

/// The expansion order `N` at which the theorem sums reproduce the published
/// three-term corollaries.
pub fn corollary_order(family: Family) -> u32 {
    match family {
        Family::U | Family::V => 4,
        Family::W => 5,
        Family::Nu => 3,
    }
}

fn min_order(family: Family) -> u32 {
    match family {
        Family::Nu => 1,
        _ => 2,
    }
}

fn check_order(family: Family, n: u32) -> Result<()> {
    let lo = min_order(family);
    if n < lo {
        return Err(Error::Usage(format!("{family} expansion needs N >= {lo}, got {n}")));
    }
    Ok(())
}

/// Calls `f` on every tuple of `len` non-negative integers whose weighted
/// sum `Σ w_i x_i` is at most `budget`.
fn for_each_index(weights: &[u32], budget: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(weights: &[u32], budget: u32, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if cur.len() == weights.len() {
            f(cur);
            return;
        }
        let w = weights[cur.len()];
        for x in 0..=budget / w {
            cur.push(x);
            rec(weights, budget - x * w, cur, f);
            cur.pop();
        }
    }
    rec(weights, budget, &mut Vec::new(), f);
}

/// The published theorem sum for `family` at expansion order `big_n`.
pub fn theorem_series(family: Family, m: i64, big_n: u32) -> Result<AsymSeries> {
    check_order(family, big_n)?;
    let mut out = AsymSeries::new(family, m);
    match family {
        Family::U | Family::V => {
            let (kappa, s_base, lead) = match family {
                Family::U => (4, 12u32, None),
                _ => (3, 2u32, Some(2u32)),
            };
            // indices (k, r, s, ℓ, j), constraint 2k + r + s + 2ℓ + j + 2 ≤ N
            for_each_index(&[2, 1, 1, 2, 1], big_n - 2, &mut |ix| {
                let &[k, r, s, l, j] = ix else { unreachable!() };
                let mut c = Rational::from(sign(k + r + s + j + l + 1))
                    / (pow_u(s_base, s) * fact(r) * fact(s));
                c *= match lead {
                    None => Rational::from((2, pow_u(2, j))),
                    Some(two) => Rational::from(two),
                };
                c *= euler0(2 * k + 2 * r + 2 * l + 1);
                let a = alpha(m, 2 * k + 1).expect("odd index");
                let g = gamma_const(2 * l, j, kappa).expect("valid gamma indices");
                out.add(
                    2 * k + r + s + 2 * l + j + 3,
                    &(&a * &g).scale(&c, (r + s + 1) as i32),
                );
            });
        }
        Family::W => {
            // (k, r, t), constraint 2k + r + t + 2 ≤ N
            for_each_index(&[2, 1, 1], big_n - 2, &mut |ix| {
                let &[k, r, t] = ix else { unreachable!() };
                let c = Rational::from(sign(r + t + k + 1)) / (pow_u(6, t) * fact(r) * fact(t))
                    * euler0(2 * k + 2 * r + 1);
                let a = alpha(m, 2 * k + 1).expect("odd index");
                out.add(2 * k + r + t + 3, &a.scale(&c, (r + t + 1) as i32));
            });
            // (k, r, j, ℓ, s, t), constraint j + r + 2k + 2ℓ + 2s + t + 2 ≤ N
            for_each_index(&[2, 1, 1, 2, 2, 1], big_n - 2, &mut |ix| {
                let &[k, r, j, l, s, t] = ix else { unreachable!() };
                let c = Rational::from(sign(r + t + k + j + l + s + 1)) * 4u32
                    * Rational::from((pow_u(2, 2 * s), pow_u(2, j)))
                    / (pow_u(12, t) * fact(r) * fact(t) * fact(2 * s))
                    * euler0(2 * r + 2 * k + 2 * l + 2 * s + 1);
                let a = alpha(m, 2 * k + 1).expect("odd index");
                let g = gamma_const(2 * l, j, 4).expect("valid gamma indices");
                out.add(
                    2 * k + r + t + 2 * l + 2 * s + j + 3,
                    &(&a * &g).scale(&c, (r + t + 2 * s + 1) as i32),
                );
            });
        }
        Family::Nu => {
            // (k, r, ℓ, j, s), constraint j + r + s + 2k + 2ℓ + 1 ≤ N
            let two_sqrt2 = Quad::new(0, 2);
            for_each_index(&[2, 1, 2, 1, 1], big_n - 1, &mut |ix| {
                let &[k, r, l, j, s] = ix else { unreachable!() };
                let c = Rational::from((
                    euler_number(2 * k + 2 * r + 2 * l) * sign(j + r + k + l + 1),
                    pow_u(2, r + s + j + 2 * l) * fact(r) * fact(s),
                ));
                let b = beta(m, 2 * k).expect("even index");
                let g = gamma_const(2 * l, j, 4).expect("valid gamma indices");
                let t = (&b * &g).scale(&c, (r + s + 1) as i32).scale_quad(&two_sqrt2, 0);
                out.add(j + r + s + 2 * k + 2 * l + 2, &t);
            });
        }
    }
    Ok(out)
}

/// One row of a published corollary: `π^a (c0 − c2·m²) / den`, optionally
/// divided by `√2`.
struct CorollaryEntry {
    index: u32,
    pi_exp: i32,
    c0: i64,
    c2: i64,
    den: i64,
    over_sqrt2: bool,
}

const fn entry(index: u32, pi_exp: i32, c0: i64, c2: i64, den: i64, over_sqrt2: bool) -> CorollaryEntry {
    CorollaryEntry {
        index,
        pi_exp,
        c0,
        c2,
        den,
        over_sqrt2,
    }
}

const COROLLARY_U: [CorollaryEntry; 3] = [
    entry(3, 2, 1, 0, 2, false),
    entry(4, 3, 1, 0, 3, false),
    entry(5, 4, 59, 36, 72, false),
];
const COROLLARY_W: [CorollaryEntry; 3] = [
    entry(4, 3, 1, 0, 3, false),
    entry(5, 4, 55, 0, 24, false),
    entry(6, 5, 1841, 108, 324, false),
];
const COROLLARY_V: [CorollaryEntry; 3] = [
    entry(3, 2, 1, 0, 3, false),
    entry(4, 3, 4, 0, 27, false),
    entry(5, 4, 101, 72, 216, false),
];
const COROLLARY_NU: [CorollaryEntry; 3] = [
    entry(2, 1, 1, 0, 2, true),
    entry(3, 2, 5, 0, 8, true),
    entry(4, 3, 77, 64, 64, true),
];

/// The published three-term expansion with `m²` replaced by `m2`.
pub fn corollary_series_m2(family: Family, m2: &Rational) -> AsymSeries {
    let table = match family {
        Family::U => &COROLLARY_U,
        Family::W => &COROLLARY_W,
        Family::V => &COROLLARY_V,
        Family::Nu => &COROLLARY_NU,
    };
    let mut out = AsymSeries::new(family, 0);
    for e in table {
        let r = (Rational::from(e.c0) - Rational::from(e.c2) * m2) / e.den;
        // 1/√2 = √2/2
        let q = if e.over_sqrt2 {
            Quad::new(0, r / 2u32)
        } else {
            Quad::rational(r)
        };
        out.add(e.index, &PiPoly::term(q, e.pi_exp));
    }
    out
}

/// The published three-term expansion for rank `m`.
pub fn corollary_series(family: Family, m: i64) -> AsymSeries {
    let mut s = corollary_series_m2(family, &Rational::from(m * m));
    s.m = m;
    s
}

/// Input of the generic Wright formula: `F(q) = e^{πi/(Lτ)} Σ_{j=1}^{N} A(j) τ^j + ⋯`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrightInput {
    pub l: u32,
    /// `a[j − 1] = A(j)`.
    pub a: Vec<ComplexPiPoly>,
}

/// `(πi)^e / d` as an exact complex constant.
fn pi_i_pow(e: u32, d: Rational) -> ComplexPiPoly {
    ComplexPiPoly::real(PiPoly::rational(d, e as i32)).mul_i_pow(e as i64)
}

/// Near-pole coefficients `A(1), …, A(N)` of the rank-`m` generating function
/// of `family`, collected from its near-pole expansion.
pub fn wright_input(family: Family, m: i64, big_n: u32) -> Result<WrightInput> {
    check_order(family, big_n)?;
    let mut a = vec![ComplexPiPoly::default(); big_n as usize];
    let mut put = |mexp: u32, c: ComplexPiPoly| {
        let slot = &mut a[mexp as usize - 1];
        *slot = &*slot + &c;
    };
    match family {
        Family::U | Family::V => {
            let (kappa, s_base) = if family == Family::U { (4, 12u32) } else { (3, 2u32) };
            for_each_index(&[2, 1, 1, 2, 1], big_n - 2, &mut |ix| {
                let &[k, r, s, l, j] = ix else { unreachable!() };
                // α (πi)^{r+s} (−1)^s / (base^s r! s!) · γ · (i/2)^j or i^j · E(0)
                let mut d = Rational::from(sign(s)) / (pow_u(s_base, s) * fact(r) * fact(s));
                if family == Family::U {
                    d /= pow_u(2, j);
                }
                d *= euler0(2 * k + 2 * r + 2 * l + 1);
                let real = &alpha(m, 2 * k + 1).expect("odd index")
                    * &gamma_const(2 * l, j, kappa).expect("valid gamma indices");
                let c = pi_i_pow(r + s, d).scale(&real).mul_i_pow(j as i64);
                put(2 * k + r + s + 2 * l + j + 2, c);
            });
        }
        Family::W => {
            for_each_index(&[2, 1, 1], big_n - 2, &mut |ix| {
                let &[k, r, t] = ix else { unreachable!() };
                let d = Rational::from((1, 2)) / (pow_u(6, t) * fact(r) * fact(t))
                    * euler0(2 * k + 2 * r + 1);
                let c = pi_i_pow(r + t, d).scale(&alpha(m, 2 * k + 1).expect("odd index"));
                put(2 * k + r + t + 2, c);
            });
            for_each_index(&[2, 1, 1, 2, 2, 1], big_n - 2, &mut |ix| {
                let &[k, r, j, l, s, t] = ix else { unreachable!() };
                let d = Rational::from(2 * sign(t) * sign(s)) * pow_u(2, 2 * s)
                    / (pow_u(12, t) * fact(r) * fact(t) * pow_u(2, j) * fact(2 * s))
                    * euler0(2 * r + 2 * k + 2 * l + 2 * s + 1);
                let real = (&alpha(m, 2 * k + 1).expect("odd index")
                    * &gamma_const(2 * l, j, 4).expect("valid gamma indices"))
                    .scale(&Rational::from(1), (2 * s) as i32);
                let c = pi_i_pow(r + t, d).scale(&real).mul_i_pow(j as i64);
                put(j + r + t + 2 * k + 2 * l + 2 * s + 2, c);
            });
        }
        Family::Nu => {
            let sqrt2 = PiPoly::term(Quad::new(0, 1), 0);
            for_each_index(&[2, 1, 2, 1, 1], big_n - 1, &mut |ix| {
                let &[k, r, l, j, s] = ix else { unreachable!() };
                let d = Rational::from((
                    euler_number(2 * k + 2 * r + 2 * l) * sign(s),
                    pow_u(2, r + s + j + 2 * l) * fact(r) * fact(s),
                ));
                let real = &(&beta(m, 2 * k).expect("even index")
                    * &gamma_const(2 * l, j, 4).expect("valid gamma indices"))
                    * &sqrt2;
                let c = pi_i_pow(r + s, d).scale(&real).mul_i_pow(j as i64 + 1);
                put(j + r + s + 2 * k + 2 * l + 1, c);
            });
        }
    }
    Ok(WrightInput {
        l: kind_of(family).l(),
        a,
    })
}

impl WrightInput {
    /// Rewrites `−2πi Σ A(j) (i/√(2Ln))^{j+1} I_{j+1}` as `Σ c_{j+1} P_{j+1}(n)`
    /// with `c_{j+1} = −2π i^{j+2} A(j)` and `P` the profile of matching `L`.
    /// The coefficients must come out real.
    pub fn to_series(&self, family: Family, m: i64) -> Result<AsymSeries> {
        let kind = kind_of(family);
        if kind.l() != self.l {
            return Err(Error::Usage(format!(
                "L = {} does not match the {family} profile (L = {})",
                self.l,
                kind.l()
            )));
        }
        let mut out = AsymSeries::new(family, m);
        let two_pi = PiPoly::rational(-2, 1);
        for (idx, a) in self.a.iter().enumerate() {
            let j = idx as i64 + 1;
            let c = a.mul_i_pow(j + 2).scale(&two_pi);
            if !c.im.is_zero() {
                return Err(Error::Integrity(format!(
                    "imaginary part {} survives at Bessel index {}",
                    c.im,
                    j + 1
                )));
            }
            out.add(j as u32 + 1, &c.re);
        }
        Ok(out)
    }
}

/// [`wright_input`] converted to a real profile expansion.
pub fn wright_series(family: Family, m: i64, big_n: u32) -> Result<AsymSeries> {
    wright_input(family, m, big_n)?.to_series(family, m)
}

/// Where asymptotic coefficients come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermSource {
    Corollary,
    Theorem,
    Wright,
}

/// The expansion of `family` at rank `m` from `source`; `big_n` defaults to
/// the corollary order and is ignored for [`TermSource::Corollary`].
pub fn asym_series(source: TermSource, family: Family, m: i64, big_n: Option<u32>) -> Result<AsymSeries> {
    let n = big_n.unwrap_or_else(|| corollary_order(family));
    match source {
        TermSource::Corollary => Ok(corollary_series(family, m)),
        TermSource::Theorem => theorem_series(family, m, n),
        TermSource::Wright => wright_series(family, m, n),
    }
}

/// `2π√(2n/L)`.
fn wright_argument(l: u32, n: u64, prec: u32) -> Float {
    let r = Float::with_val(prec, 2 * n) / l;
    pi(prec) * 2u32 * r.sqrt()
}

fn check_n(n: u64) -> Result<()> {
    if n < 1 {
        return Err(Error::Usage("asymptotic evaluation needs n >= 1".into()));
    }
    Ok(())
}

/// `(mantissa, scale)` with series value `mantissa · e^{scale}`.
pub fn eval_series(s: &AsymSeries, n: u64, prec: u32) -> Result<(Float, Float)> {
    check_n(n)?;
    let scale = s.kind.argument(n, prec);
    let mut sum = Float::with_val(prec, 0);
    for (k, c) in s.terms() {
        let (v, _) = crate::specfun::bessel_profile(s.kind, k as i64, n, prec)?;
        sum += pi_poly_eval(c, prec) * v;
    }
    Ok((sum, scale))
}

/// `ln` of the series value; fails when the value is not positive.
pub fn ln_eval(s: &AsymSeries, n: u64, prec: u32) -> Result<Float> {
    let (v, x) = eval_series(s, n, prec)?;
    if v <= 0 {
        return Err(Error::Domain(format!("asymptotic value at n = {n} is not positive")));
    }
    Ok(v.ln() + x)
}

/// The main term `−2πi Σ_j A(j) (i/√(2Ln))^{j+1} I_{−j−1}(2π√(2n/L))`, returned
/// as `(mantissa, scale)` with value `mantissa · e^{scale}`.
pub fn wright_eval(w: &WrightInput, n: u64, prec: u32) -> Result<(Complex, Float)> {
    check_n(n)?;
    if w.l == 0 {
        return Err(Error::Usage("L must be positive".into()));
    }
    let x = wright_argument(w.l, n, prec);
    let radius = Float::with_val(prec, 2 * u64::from(w.l) * n).sqrt();
    let unit = Complex::with_val(prec, (0, Float::with_val(prec, 1) / &radius));
    let mut sum = Complex::with_val(prec, (0, 0));
    for (idx, a) in w.a.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let j = idx as i64 + 1;
        let av = Complex::with_val(prec, (pi_poly_eval(&a.re, prec), pi_poly_eval(&a.im, prec)));
        let power = Complex::with_val(prec, (&unit).pow((j + 1) as u32));
        let bessel = bessel_i_scaled(-j - 1, &x, prec)?;
        sum += av * power * bessel;
    }
    let factor = Complex::with_val(prec, (0, -(pi(prec) * 2u32)));
    Ok((sum * factor, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn pp(n: i64, d: i64, a: i32) -> PiPoly {
        PiPoly::rational(r(n, d), a)
    }

    fn sqrt2_pp(n: i64, d: i64, a: i32) -> PiPoly {
        PiPoly::term(Quad::new(0, r(n, d)), a)
    }

    /// Coefficients of `Σ c_i z^i` truncated at degree `deg`, for
    /// `cos(b·z)` or `sin(b·z)` with `b = num·π` (π tracked separately).
    fn trig(num: i64, deg: u32, odd: bool) -> Vec<Rational> {
        (0..=deg)
            .map(|i| {
                if (i % 2 == 1) != odd {
                    return Rational::new();
                }
                let s = if (i / 2) % 2 == 0 { 1 } else { -1 };
                Rational::from((Integer::from(num).pow(i) * s, fact(i)))
            })
            .collect()
    }

    fn conv(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        (0..a.len())
            .map(|i| (0..=i).map(|k| Rational::from(&a[k] * &b[i - k])).sum())
            .collect()
    }

    #[test]
    fn alpha_matches_product_oracle() {
        // −2 sin(πz) cos(2πmz), coefficients in units of π^i
        for m in 0..6i64 {
            let prod = conv(&trig(1, 13, true), &trig(2 * m, 13, false));
            for k in 0..6u32 {
                let i = 2 * k + 1;
                let expected = PiPoly::rational(Rational::from(&prod[i as usize] * -2), i as i32);
                assert_eq!(alpha(m, i).unwrap(), expected, "m={m} k={k}");
            }
        }
        assert_eq!(alpha(3, 1).unwrap(), pp(-2, 1, 1));
        assert_eq!(alpha(0, 3).unwrap(), pp(1, 3, 3));
        assert_eq!(alpha(1, 3).unwrap(), pp(13, 3, 3));
        assert!(alpha(0, 2).is_err());
    }

    #[test]
    fn beta_matches_division_oracle() {
        // b(z) with 2cos(πz) b(z) = cos(2πmz), solved degree by degree
        let deg = 12;
        let two_cos = trig(1, deg, false).into_iter().map(|c| c * 2u32).collect::<Vec<_>>();
        for m in 0..6i64 {
            let rhs = trig(2 * m, deg, false);
            let mut b: Vec<Rational> = Vec::new();
            for i in 0..=deg as usize {
                let known: Rational = (1..=i).map(|k| Rational::from(&two_cos[k] * &b[i - k])).sum();
                b.push((rhs[i].clone() - known) / &two_cos[0]);
            }
            for k in 0..=deg / 2 {
                let expected = PiPoly::rational(b[2 * k as usize].clone(), 2 * k as i32);
                assert_eq!(beta(m, 2 * k).unwrap(), expected, "m={m} k={k}");
            }
        }
        assert_eq!(beta(7, 0).unwrap(), pp(1, 2, 0));
        assert_eq!(beta(0, 2).unwrap(), pp(1, 4, 2));
        assert_eq!(beta(1, 2).unwrap(), &pp(1, 4, 2) - &pp(1, 1, 2));
        assert!(beta(0, 1).is_err());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_const(0, 0, 4).unwrap(), pp(-1, 4, 0));
        assert_eq!(gamma_const(0, 1, 4).unwrap(), pp(1, 8, 1));
        assert_eq!(gamma_const(0, 0, 3).unwrap(), pp(-1, 6, 0));
        assert!(gamma_const(0, 0, 5).is_err());
        assert!(gamma_const(1, 0, 4).is_err());
    }

    #[test]
    fn theorem_reproduces_corollaries() {
        for f in Family::ALL {
            for m in 0..=3 {
                let t = theorem_series(f, m, corollary_order(f)).unwrap();
                assert_eq!(t, corollary_series(f, m), "{f} m={m}");
            }
        }
    }

    #[test]
    fn theorem_examples() {
        let u = theorem_series(Family::U, 0, 4).unwrap();
        assert_eq!(u.coeff(3), pp(1, 2, 2));
        assert_eq!(u.coeff(4), pp(1, 3, 3));
        let nu = theorem_series(Family::Nu, 2, 3).unwrap();
        assert_eq!(nu.coeff(2), sqrt2_pp(1, 4, 1));
        assert_eq!(nu.coeff(3), sqrt2_pp(5, 16, 2));
        assert_eq!(nu.coeff(4), sqrt2_pp(77 - 64 * 4, 128, 3));
        assert!(theorem_series(Family::U, 0, 1).is_err());
        assert!(theorem_series(Family::Nu, 0, 0).is_err());
    }

    #[test]
    fn corollary_root() {
        let s = corollary_series_m2(Family::U, &r(59, 36));
        assert!(s.coeff(5).is_zero());
        assert_eq!(corollary_series(Family::W, 1).coeff(6), pp(1733, 324, 5));
    }

    #[test]
    fn nu_wright_matches_theorem() {
        for m in 0..=4 {
            for n in 1..=5 {
                assert_eq!(
                    wright_series(Family::Nu, m, n).unwrap(),
                    theorem_series(Family::Nu, m, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn wright_and_theorem_share_leading_term() {
        for f in [Family::U, Family::V] {
            let w = wright_series(f, 1, 5).unwrap();
            let t = theorem_series(f, 1, 5).unwrap();
            let lead = t.terms().next().unwrap().0;
            assert_eq!(w.coeff(lead), t.coeff(lead), "{f}");
            assert_ne!(w.coeff(lead + 1), t.coeff(lead + 1), "{f}");
        }
        // for w the sign pattern reaches the leading X_4 term
        let w = wright_series(Family::W, 0, 5).unwrap();
        assert!(w.coeff(3).is_zero());
        assert_eq!(w.coeff(4), pp(1, 2, 3));
        assert_eq!(theorem_series(Family::W, 0, 5).unwrap().coeff(4), pp(1, 3, 3));
    }

    #[test]
    fn wright_input_rejects_mismatched_profile() {
        let w = wright_input(Family::U, 0, 3).unwrap();
        assert!(matches!(w.to_series(Family::Nu, 0), Err(Error::Usage(_))));
        let bad = WrightInput {
            l: 6,
            a: vec![ComplexPiPoly::real(pp(1, 1, 0))],
        };
        // A(1) = 1 gives −2π i³ = 2πi on P_2: imaginary
        assert!(matches!(bad.to_series(Family::U, 0), Err(Error::Integrity(_))));
    }

    #[test]
    fn wright_eval_examples() {
        let prec = 160;
        let zero = WrightInput {
            l: 6,
            a: vec![ComplexPiPoly::default(); 3],
        };
        assert!(wright_eval(&zero, 10, prec).unwrap().0.is_zero());

        let one = WrightInput {
            l: 6,
            a: vec![ComplexPiPoly::real(pp(1, 1, 0))],
        };
        let n = 37;
        let (v, x) = wright_eval(&one, n, prec).unwrap();
        assert_eq!(*v.real(), 0);
        // −2πi (i/√(12n))² I_2 = 2πi I_2 / (12n)
        let expected = bessel_i_scaled(2, &x, prec).unwrap() * pi(prec) * 2u32 / (12 * n);
        let rel = (Float::with_val(prec, v.imag() - &expected) / &expected).abs();
        assert!(rel < 1e-40);
    }

    #[test]
    fn eval_series_edge_cases() {
        let empty = AsymSeries::new(Family::U, 0);
        let (v, x) = eval_series(&empty, 12, 128).unwrap();
        assert_eq!(v, 0);
        let expected = ProfileKind::X.argument(12, 128);
        assert_eq!(x, expected);

        let mut single = AsymSeries::new(Family::U, 0);
        single.add(3, &pp(1, 1, 0));
        let (v, _) = eval_series(&single, 12, 128).unwrap();
        let (p, _) = crate::specfun::bessel_profile(ProfileKind::X, 3, 12, 128).unwrap();
        assert_eq!(v, p);
        assert!(eval_series(&single, 0, 128).is_err());
    }

    fn exact_gap(source: TermSource, f: Family, m: i64, n: u64) -> f64 {
        let prec = 192;
        let count = crate::genfun::rank_count(f, m, n as usize).unwrap();
        let exact = crate::specfun::ln_integer(&count, prec).unwrap();
        let s = asym_series(source, f, m, None).unwrap();
        let approx = ln_eval(&s, n, prec).unwrap();
        Float::with_val(prec, approx - exact).exp_m1().abs().to_f64()
    }

    #[test]
    fn corollary_gap_shrinks() {
        let early = exact_gap(TermSource::Corollary, Family::U, 0, 125);
        let late = exact_gap(TermSource::Corollary, Family::U, 0, 500);
        assert!(late < early, "{early} -> {late}");
    }

    #[test]
    fn near_pole_route_tracks_counts() {
        for f in Family::ALL {
            for m in 0..=1 {
                let a = exact_gap(TermSource::Wright, f, m, 400);
                let b = exact_gap(TermSource::Wright, f, m, 1600);
                let rate = (b / a).ln() / 4f64.ln();
                assert!(rate < -1.2, "{f} m={m}: {a:.3e} -> {b:.3e}, rate {rate:.3}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn lowest_coefficient_independent_of_m(fi in 0usize..4, m in 0i64..=10) {
            let f = Family::ALL[fi];
            let n = corollary_order(f);
            let base = theorem_series(f, 0, n).unwrap();
            let other = theorem_series(f, m, n).unwrap();
            let (k, c) = base.terms().next().unwrap();
            prop_assert_eq!(other.terms().next().unwrap(), (k, c));
        }

        #[test]
        fn low_orders_are_stable(fi in 0usize..4, m in 0i64..=10, extra in 0u32..3) {
            let f = Family::ALL[fi];
            let n = min_order(f) + extra;
            let small = theorem_series(f, m, n).unwrap();
            let big = theorem_series(f, m, n + 1).unwrap();
            let top = small.terms().map(|(k, _)| k).max().unwrap_or(0);
            prop_assert_eq!(big.truncated(top), small);
        }

        #[test]
        fn wright_eval_matches_real_series(fi in 0usize..4, m in 0i64..=5, n in 1u64..2000) {
            let prec = 192;
            let f = Family::ALL[fi];
            let w = wright_input(f, m, corollary_order(f) + 1).unwrap();
            let s = w.to_series(f, m).unwrap();
            let (c, x1) = wright_eval(&w, n, prec).unwrap();
            let (v, x2) = eval_series(&s, n, prec).unwrap();
            prop_assert_eq!(x1, x2);
            let tol = Float::with_val(prec, v.abs_ref()) >> (prec - 8);
            prop_assert!(Float::with_val(prec, c.real() - &v).abs() <= tol);
            prop_assert!(Float::with_val(prec, c.imag().abs_ref()) <= tol);
        }
    }
}
