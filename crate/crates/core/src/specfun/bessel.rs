use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer};

use super::pipoly::PiPoly;
use crate::error::{Error, Result};

/// `π` at `prec` bits, memoized per precision.
pub fn pi(prec: u32) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut map = cache.lock().expect("pi cache poisoned");
    map.entry(prec)
        .or_insert_with(|| Float::with_val(prec, Constant::Pi))
        .clone()
}

/// `e^{-x} I_{|k|}(x)` for `x > 0` from the ascending series, summed with
/// `⌈x / ln 2⌉ + 32` guard bits.
pub fn bessel_i_scaled(k: i64, x: &Float, prec: u32) -> Result<Float> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Usage(format!("Bessel argument must be positive, got {x}")));
    }
    let k = k.unsigned_abs();
    let guard = (x.to_f64() / std::f64::consts::LN_2).ceil() as u32 + 32;
    let wp = prec + guard;
    let half = Float::with_val(wp, x / 2u32);
    let quarter_sq = Float::with_val(wp, half.square_ref());

    let mut fact = Integer::from(1);
    for i in 2..=k {
        fact *= i;
    }
    let mut term = Float::with_val(wp, half.pow(k as u32)) / Float::with_val(wp, &fact);
    let mut sum = term.clone();
    let peak = x.to_f64() / 2.0;
    for j in 1u64.. {
        term *= &quarter_sq;
        term /= j * (j + k);
        sum += &term;
        if (j as f64) > peak {
            let tiny = Float::with_val(wp, &sum >> wp);
            if term < tiny {
                break;
            }
        }
    }
    let scale = Float::with_val(wp, -x).exp();
    Ok(Float::with_val(prec, sum * scale))
}

/// Profile family of an asymptotic expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    /// `X_k(n) = (2√(3n))^{-k} I_k(2π√(n/3))`
    X,
    /// `Y_k(n) = (4√n)^{-k} I_k(π√n)`
    Y,
}

impl ProfileKind {
    /// The `L` of the Wright expansion whose exponential is `2π√(2n/L)`.
    pub fn l(self) -> u32 {
        match self {
            ProfileKind::X => 6,
            ProfileKind::Y => 8,
        }
    }

    /// Bessel argument `2π√(2n/L)`.
    pub fn argument(self, n: u64, prec: u32) -> Float {
        let r = Float::with_val(prec, 2 * n) / self.l();
        pi(prec) * 2u32 * r.sqrt()
    }

    /// Order-scale `√(2Ln)`.
    pub fn radius(self, n: u64, prec: u32) -> Float {
        Float::with_val(prec, 2 * u64::from(self.l()) * n).sqrt()
    }
}

/// `(v, x)` with profile value `v · e^x` and `x = 2π√(2n/L)`.
pub fn bessel_profile(kind: ProfileKind, k: i64, n: u64, prec: u32) -> Result<(Float, Float)> {
    if k < 1 || n < 1 {
        return Err(Error::Usage(format!(
            "profile needs k >= 1 and n >= 1, got k = {k}, n = {n}"
        )));
    }
    let x = kind.argument(n, prec);
    let v = bessel_i_scaled(k, &x, prec)? / kind.radius(n, prec).pow(k as i32);
    Ok((v, x))
}

/// Numeric value of `c` at `prec` bits; exact until this substitution.
pub fn pi_poly_eval(c: &PiPoly, prec: u32) -> Float {
    let wp = prec + 16;
    let p = pi(wp);
    let sqrt2 = Float::with_val(wp, 2u32).sqrt();
    let mut sum = Float::with_val(wp, 0);
    for (a, q) in c.terms() {
        let coeff = Float::with_val(wp, &q.rat) + Float::with_val(wp, &q.sqrt2) * &sqrt2;
        sum += coeff * Float::with_val(wp, (&p).pow(a));
    }
    Float::with_val(prec, sum)
}

/// Natural logarithm of a positive big integer.
pub fn ln_integer(x: &Integer, prec: u32) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::Domain(format!("logarithm of non-positive integer {x}")));
    }
    Ok(Float::with_val(prec, x).ln())
}
