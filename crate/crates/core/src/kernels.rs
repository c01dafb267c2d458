//! Numeric checks of the analytic building blocks behind the asymptotic
//! expansions: the partial theta function near `q = 1`, the `sinh`/`cosh`
//! moment integrals, and Wright's contour integral.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Quadrature};
use crate::specfun::{bernoulli_number, bernoulli_table, bessel_i_scaled, euler_number, euler_poly, pi};

/// A point `τ = x + iy` of the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperHalfPoint {
    pub x: Float,
    pub y: Float,
}

impl UpperHalfPoint {
    pub fn new(x: Float, y: Float) -> Result<Self> {
        if !(y.is_finite() && y > 0 && x.is_finite()) {
            return Err(Error::Domain(format!("tau needs Im > 0, got x={x}, y={y}")));
        }
        Ok(Self { x, y })
    }

    /// `τ = iy`.
    pub fn imaginary(y: Float) -> Result<Self> {
        let x = Float::new(y.prec());
        Self::new(x, y)
    }

    pub fn tau(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.x, &self.y))
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self, prec: u32) -> Complex {
        let two_pi_i = Complex::with_val(prec, (0, pi(prec) * 2u32));
        (two_pi_i * self.tau(prec)).exp()
    }

    /// `Im(−1/τ) = y / |τ|²`.
    pub fn im_neg_inv(&self, prec: u32) -> Float {
        let norm = Float::with_val(prec, self.x.square_ref()) + Float::with_val(prec, self.y.square_ref());
        Float::with_val(prec, &self.y / norm)
    }
}

fn rat_float(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

fn check_d_k(d: &Rational, k: u32) -> Result<()> {
    if *d <= 0 || k == 0 {
        return Err(Error::Domain(format!("need d > 0 and k >= 1, got d={d}, k={k}")));
    }
    Ok(())
}

/// `F_{d,k}(z; τ) = Σ_{n≥0} ζ^{kn+d} q^{(kn+d)²}` summed directly, with
/// `ζ = e^{2πiz}`, `q = e^{2πiτ}`.
pub fn partial_theta_direct(d: &Rational, k: u32, z: &Complex, tau: &UpperHalfPoint, prec: u32) -> Result<Complex> {
    check_d_k(d, k)?;
    let wp = prec + 32;
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let two_pi_i = Complex::with_val(wp, (0, &two_pi));
    let z = Complex::with_val(wp, z);
    let t = tau.tau(wp);
    let y = Float::with_val(wp, &tau.y);
    let im_z = Float::with_val(wp, z.imag().abs_ref());
    let d = rat_float(d, wp);
    // past this point the magnitude bound decreases in n
    let turn = Float::with_val(wp, &im_z / Float::with_val(wp, &y * 2u32));

    let mut sum = Complex::with_val(wp, (0, 0));
    for n in 0u64.. {
        let u = Float::with_val(wp, &d + n * k as u64);
        let phase = Complex::with_val(wp, &z * &u) + Complex::with_val(wp, &t * Float::with_val(wp, u.square_ref()));
        sum += Complex::with_val(wp, &two_pi_i * &phase).exp();
        if u > turn {
            let next = Float::with_val(wp, &u + k);
            let bound_exp = Float::with_val(wp, &im_z * &next)
                - Float::with_val(wp, &y * Float::with_val(wp, next.square_ref()));
            let bound = Float::with_val(wp, &two_pi * bound_exp).exp();
            let mag = Float::with_val(wp, sum.abs_ref());
            if bound < Float::with_val(wp, &mag >> (prec + 8)) || bound.is_zero() {
                break;
            }
        }
    }
    Ok(Complex::with_val(prec, sum))
}

/// The near-`q = 1` expansion of [`partial_theta_direct`], keeping powers
/// `τ^0 … τ^N` in the inner sum; valid for `|z| < 1/(4k)`.
pub fn partial_theta_expansion(
    d: &Rational,
    k: u32,
    z: &Complex,
    tau: &UpperHalfPoint,
    big_n: u32,
    prec: u32,
) -> Result<Complex> {
    check_d_k(d, k)?;
    let wp = prec + 32;
    let z = Complex::with_val(wp, z);
    let radius = Float::with_val(wp, 1) / (4 * k);
    if Float::with_val(wp, z.abs_ref()) >= radius {
        return Err(Error::Domain(format!(
            "|z| = {} outside the convergence disc |z| < 1/{}",
            Float::with_val(53, z.abs_ref()).to_f64(),
            4 * k
        )));
    }
    let pi = pi(wp);
    let two_pi = Float::with_val(wp, &pi * 2u32);
    let t = tau.tau(wp);
    let kf = Float::with_val(wp, k);
    let x = Rational::from(d / k);

    // (−iτ)^{−1/2}, principal branch: Re(−iτ) = y > 0
    let minus_i_tau = Complex::with_val(wp, (&tau.y, -Float::with_val(wp, &tau.x)));
    let inv_sqrt = Complex::with_val(wp, minus_i_tau.sqrt().recip_ref());
    let inv_sqrt_two_pi = Float::with_val(wp, two_pi.sqrt_ref()).recip();

    // (2k²πi)^j τ^j / j! for j = 0..=N
    let step = Complex::with_val(wp, (0, Float::with_val(wp, &pi * (2 * k * k)))) * &t;
    let mut tau_pows = Vec::with_capacity(big_n as usize + 1);
    let mut cur = Complex::with_val(wp, (1, 0));
    for j in 0..=big_n {
        if j > 0 {
            cur = cur * &step / j;
        }
        tau_pows.push(cur.clone());
    }

    let mut bern: Vec<Rational> = Vec::new();
    let z_step = Complex::with_val(wp, (0, Float::with_val(wp, &two_pi * k))) * &z;
    let mut z_pow = Complex::with_val(wp, (1, 0)); // (2kπiz)^ℓ / ℓ!
    let mut inv_sqrt_pow = inv_sqrt.clone(); // (−iτ)^{−(ℓ+1)/2}
    let mut two_pi_pow = inv_sqrt_two_pi.clone(); // (2π)^{−(ℓ+1)/2}
    let mut k_pow = Float::with_val(wp, &kf); // k^{ℓ+1}
    let mut sum = Complex::with_val(wp, (0, 0));
    let mut quiet = 0;
    let z_is_zero = z.is_zero();
    for ell in 0u32.. {
        if ell > 0 {
            z_pow = z_pow * &z_step / ell;
            inv_sqrt_pow *= &inv_sqrt;
            two_pi_pow *= &inv_sqrt_two_pi;
            k_pow *= &kf;
        }
        let need = 2 * big_n + ell + 1;
        if bern.len() <= need as usize {
            bern = bernoulli_table((2 * need).max(16), &x);
        }
        let gamma = Float::with_val(wp, Float::with_val(wp, ell + 1) / 2u32).gamma();
        let lead = Float::with_val(wp, gamma * &two_pi_pow) / Float::with_val(wp, &k_pow * 2u32);
        let mut bracket = Complex::with_val(wp, &inv_sqrt_pow * &lead);
        for (j, tp) in tau_pows.iter().enumerate() {
            let idx = 2 * j as u32 + ell + 1;
            let c = Rational::from(&bern[idx as usize] / idx);
            bracket -= Complex::with_val(wp, tp * rat_float(&c, wp));
        }
        let term = Complex::with_val(wp, &z_pow * &bracket);
        sum += &term;
        if z_is_zero {
            break;
        }
        let mag = Float::with_val(wp, term.abs_ref());
        let tol = Float::with_val(wp, Float::with_val(wp, sum.abs_ref()) >> (prec + 8));
        if mag <= tol {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        if ell > 20_000 {
            return Err(Error::Domain("expansion in z failed to settle".into()));
        }
    }
    Ok(Complex::with_val(prec, sum))
}

/// Number of Taylor terms used for `x/sinh x` and `sech x` near zero.
const TAYLOR_TERMS: u32 = 10;

/// Radius below which the Taylor model replaces the closed-form evaluation.
fn taylor_radius(prec: u32) -> Float {
    let bits = (prec + 8) as f64 / (2 * TAYLOR_TERMS) as f64;
    Float::with_val(prec, 2f64.powf(-bits))
}

/// Coefficients of `x/sinh x = Σ (2 − 2^{2j}) B_{2j} x^{2j} / (2j)!`.
fn x_over_sinh_coeffs() -> Vec<Rational> {
    let mut fact = Rational::from(1);
    (0..TAYLOR_TERMS)
        .map(|j| {
            if j > 0 {
                fact *= (2 * j - 1) * (2 * j);
            }
            let two_pow = Rational::from(2).pow(2 * j);
            (Rational::from(2) - two_pow) * bernoulli_number(2 * j) / fact.clone()
        })
        .collect()
}

/// Coefficients of `sech x = Σ E_{2j} x^{2j} / (2j)!`.
fn sech_coeffs() -> Vec<Rational> {
    let mut fact = Rational::from(1);
    (0..TAYLOR_TERMS)
        .map(|j| {
            if j > 0 {
                fact *= (2 * j - 1) * (2 * j);
            }
            Rational::from(euler_number(2 * j)) / fact.clone()
        })
        .collect()
}

fn even_series(coeffs: &[Rational], x: &Complex, prec: u32) -> Complex {
    let x2 = Complex::with_val(prec, x.square_ref());
    let mut acc = Complex::with_val(prec, (0, 0));
    for c in coeffs.iter().rev() {
        acc = acc * &x2 + rat_float(c, prec);
    }
    acc
}

fn check_kernel_args(a: &Float) -> Result<()> {
    if !(a.is_finite() && *a > 0) {
        return Err(Error::Domain(format!("upper limit must be positive, got {a}")));
    }
    Ok(())
}

/// `∫_0^a z^{2ℓ+1} / sinh(πiz/τ) dz` by quadrature, paired with its
/// small-`τ` limit `½ E_{2ℓ+1}(0) τ^{2ℓ+2}`.
pub fn kernel_i(ell: u32, a: &Float, tau: &UpperHalfPoint, prec: u32) -> Result<(Quadrature, Complex)> {
    check_kernel_args(a)?;
    let wp = prec + 16;
    let t = tau.tau(wp);
    let w = Complex::with_val(wp, (0, pi(wp))) / &t;
    let eps = taylor_radius(wp);
    let coeffs = x_over_sinh_coeffs();
    let f = |s: &Float| -> Complex {
        let x = Complex::with_val(wp, &w * s);
        let s_pow = Float::with_val(wp, s.pow(2 * ell));
        if Float::with_val(wp, x.abs_ref()) < eps {
            // s^{2ℓ+1}/sinh(x) = s^{2ℓ} (x/sinh x) / w
            even_series(&coeffs, &x, wp) * s_pow / &w
        } else {
            Complex::with_val(wp, s_pow * s) / x.sinh()
        }
    };
    let zero = Float::new(wp);
    let quad = integrate(f, &zero, a, prec)?;
    let e = euler_poly(2 * ell + 1, &Rational::new()) / 2u32;
    let closed = Complex::with_val(prec, t.pow(2 * ell + 2) * rat_float(&e, wp));
    Ok((quad, closed))
}

/// `∫_0^a z^{2ℓ} / cosh(πiz/τ) dz` by quadrature, paired with its
/// small-`τ` limit `−i E_{2ℓ} (τ/2)^{2ℓ+1}`.
pub fn kernel_k(ell: u32, a: &Float, tau: &UpperHalfPoint, prec: u32) -> Result<(Quadrature, Complex)> {
    check_kernel_args(a)?;
    let wp = prec + 16;
    let t = tau.tau(wp);
    let w = Complex::with_val(wp, (0, pi(wp))) / &t;
    let eps = taylor_radius(wp);
    let coeffs = sech_coeffs();
    let f = |s: &Float| -> Complex {
        let x = Complex::with_val(wp, &w * s);
        let s_pow = Float::with_val(wp, s.pow(2 * ell));
        if Float::with_val(wp, x.abs_ref()) < eps {
            even_series(&coeffs, &x, wp) * s_pow
        } else {
            Complex::with_val(wp, (s_pow, 0)) / x.cosh()
        }
    };
    let zero = Float::new(wp);
    let quad = integrate(f, &zero, a, prec)?;
    let half_tau = Complex::with_val(wp, &t / 2u32);
    let e = Float::with_val(wp, euler_number(2 * ell));
    let closed = half_tau.pow(2 * ell + 1) * e * Complex::with_val(wp, (0, -1));
    Ok((quad, Complex::with_val(prec, closed)))
}

/// Wright's integral `P_{s,k} = (1/2πi) ∫_{1−i}^{1+i} v^s e^{c(1/v + v)} dv`,
/// `c = π√(kn/6)`, along the segment `v = 1 + it`, together with the Bessel
/// value `I_{−s−1}(2c)` that approximates it.
pub fn wright_p(s: f64, k: u32, n: u64, prec: u32) -> Result<(Quadrature, Float)> {
    if !(s.is_finite() && s > 0.0) || k == 0 || n == 0 {
        return Err(Error::Domain(format!("need s, k, n > 0, got s={s}, k={k}, n={n}")));
    }
    if s.fract() != 0.0 {
        return Err(Error::UnsupportedOrder(format!(
            "Bessel order {} is not an integer",
            -s - 1.0
        )));
    }
    let s = s as u32;
    let wp = prec + 16;
    let c = Float::with_val(wp, k as u64 * n) / 6u32;
    let c = c.sqrt() * pi(wp);
    let inv_two_pi = Float::with_val(wp, pi(wp) * 2u32).recip();
    let f = |t: &Float| -> Complex {
        let v = Complex::with_val(wp, (1, t));
        let e = Complex::with_val(wp, v.recip_ref()) + &v;
        let e = Complex::with_val(wp, e * &c).exp();
        let vs = Complex::with_val(wp, v.pow(s));
        vs * e * &inv_two_pi
    };
    let lo = Float::with_val(wp, -1);
    let hi = Float::with_val(wp, 1);
    let quad = integrate(f, &lo, &hi, prec)?;
    let arg = Float::with_val(wp, &c * 2u32);
    let scaled = bessel_i_scaled(-(s as i64) - 1, &arg, wp)?;
    let bessel = Float::with_val(prec, scaled * arg.exp());
    Ok((quad, bessel))
}
