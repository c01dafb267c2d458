//! Adaptive Gauss–Legendre quadrature at arbitrary precision for
//! complex-valued integrands on a real interval.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Nodes per panel.
pub const NODES: usize = 32;
const MAX_DEPTH: u32 = 48;

type Rule = Arc<Vec<(Float, Float)>>;

/// Nodes and weights on `[-1, 1]`, computed by Newton's method on `P_n`.
fn gauss_legendre(n: usize, prec: u32) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("node cache poisoned").get(&(n, prec)) {
        return r.clone();
    }
    let wp = prec + 32;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for _ in 0..200 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = Float::with_val(wp, 1);
            let mut p1 = x.clone();
            for k in 2..=n {
                let p2 = (Float::with_val(wp, &x * &p1) * (2 * k - 1) as u32
                    - Float::with_val(wp, &p0 * (k - 1) as u32))
                    / k as u32;
                p0 = p1;
                p1 = p2;
            }
            let one_minus = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
            dp = Float::with_val(wp, &p0 - Float::with_val(wp, &x * &p1)) * n as u32 / &one_minus;
            let dx = Float::with_val(wp, &p1 / &dp);
            x -= &dx;
            if dx.is_zero() || dx.abs().get_exp().unwrap_or(i32::MIN) < -(wp as i32) + 4 {
                break;
            }
        }
        let one_minus = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2) / (one_minus * Float::with_val(wp, dp.square_ref()));
        out.push((Float::with_val(prec, x), Float::with_val(prec, w)));
    }
    let r = Arc::new(out);
    cache
        .lock()
        .expect("node cache poisoned")
        .insert((n, prec), r.clone());
    r
}

fn panel<F: Fn(&Float) -> Complex>(f: &F, a: &Float, b: &Float, prec: u32) -> Complex {
    let nodes = gauss_legendre(NODES, prec);
    let half = Float::with_val(prec, b - a) / 2u32;
    let mid = Float::with_val(prec, a + b) / 2u32;
    let mut sum = Complex::with_val(prec, (0, 0));
    for (x, w) in nodes.iter() {
        let t = Float::with_val(prec, &half * x) + &mid;
        sum += f(&t) * w;
    }
    sum * half
}

/// Result of [`integrate`].
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: Complex,
    /// Number of accepted panels.
    pub panels: usize,
    /// `|value − value with every panel halved|`.
    pub self_check: Float,
}

fn cabs(z: &Complex, prec: u32) -> Float {
    Float::with_val(prec, z.abs_ref())
}

/// `∫_a^b f(t) dt` to about `prec − 16` bits relative to the integral's
/// magnitude, with a doubled-subdivision self-check.
pub fn integrate<F: Fn(&Float) -> Complex>(f: F, a: &Float, b: &Float, prec: u32) -> Result<Quadrature> {
    let wp = prec + 16;
    let a = Float::with_val(wp, a);
    let b = Float::with_val(wp, b);

    // coarse magnitude estimate on 8 uniform panels
    let coarse_pieces = 8u32;
    let width = Float::with_val(wp, &b - &a) / coarse_pieces;
    let mut scale = Float::with_val(wp, 0);
    let mut edges = Vec::with_capacity(coarse_pieces as usize + 1);
    for i in 0..=coarse_pieces {
        edges.push(Float::with_val(wp, &a + Float::with_val(wp, &width * i)));
    }
    for w in edges.windows(2) {
        scale += cabs(&panel(&f, &w[0], &w[1], wp), wp);
    }
    if scale.is_zero() {
        scale = Float::with_val(wp, 1);
    }
    let tol = Float::with_val(wp, &scale >> (prec - 8));

    let mut accepted: Vec<(Float, Float)> = Vec::new();
    let mut total = Complex::with_val(wp, (0, 0));
    let mut stack: Vec<(Float, Float, Complex, u32)> = Vec::new();
    for w in edges.windows(2) {
        let whole = panel(&f, &w[0], &w[1], wp);
        stack.push((w[0].clone(), w[1].clone(), whole, 0));
    }
    while let Some((l, r, whole, depth)) = stack.pop() {
        let m = Float::with_val(wp, &l + &r) / 2u32;
        let left = panel(&f, &l, &m, wp);
        let right = panel(&f, &m, &r, wp);
        let halves = Complex::with_val(wp, &left + &right);
        let err = cabs(&Complex::with_val(wp, &halves - &whole), wp);
        if err <= tol {
            total += halves;
            accepted.push((l, m.clone()));
            accepted.push((m, r));
        } else if depth >= MAX_DEPTH {
            return Err(Error::Quadrature(format!(
                "panel [{}, {}] still off by {} after {depth} bisections (tolerance {})",
                l.to_f64(),
                r.to_f64(),
                err.to_f64(),
                tol.to_f64()
            )));
        } else {
            stack.push((m.clone(), r, right, depth + 1));
            stack.push((l, m, left, depth + 1));
        }
    }

    let mut doubled = Complex::with_val(wp, (0, 0));
    for (l, r) in &accepted {
        let m = Float::with_val(wp, l + r) / 2u32;
        doubled += panel(&f, l, &m, wp);
        doubled += panel(&f, &m, r, wp);
    }
    let self_check = cabs(&Complex::with_val(wp, &doubled - &total), wp);
    if self_check > Float::with_val(wp, &tol * 64u32) {
        return Err(Error::Quadrature(format!(
            "doubled subdivision moved the result by {} (tolerance {})",
            self_check.to_f64(),
            tol.to_f64()
        )));
    }
    Ok(Quadrature {
        value: Complex::with_val(prec, total),
        panels: accepted.len(),
        self_check: Float::with_val(prec, self_check),
    })
}
