use rug::ops::Pow;
use rug::{Integer, Rational};

fn binom(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// `B_n(x)` from `Σ_{k=0}^{n} C(n+1, k) B_k(x) = (n+1) x^n`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    bernoulli_table(n, x).pop().expect("n + 1 values")
}

/// `[B_0(x), …, B_n(x)]`.
pub fn bernoulli_table(n: u32, x: &Rational) -> Vec<Rational> {
    let mut vals: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let mut acc = x.clone().pow(m as i32) * (m + 1);
        for (k, b) in vals.iter().enumerate() {
            acc -= binom(m + 1, k as u32) * b.clone();
        }
        vals.push(acc / (m + 1));
    }
    vals
}

/// `B_n = B_n(0)`.
pub fn bernoulli_number(n: u32) -> Rational {
    bernoulli_poly(n, &Rational::new())
}

/// `E_n(x)` from `E_n(x + 1) + E_n(x) = 2x^n` expanded by Taylor's theorem:
/// `2E_n(x) + Σ_{k<n} C(n, k) E_k(x) = 2x^n`.
pub fn euler_poly(n: u32, x: &Rational) -> Rational {
    let mut vals: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let mut acc = x.clone().pow(m as i32);
        let mut half = Rational::new();
        for (k, e) in vals.iter().enumerate() {
            half += binom(m, k as u32) * e.clone();
        }
        acc -= half / 2u32;
        vals.push(acc);
    }
    vals.pop().expect("n + 1 values")
}

/// Euler number `E_n` (the secant numbers with alternating sign), from
/// `Σ_k C(n, 2k) E_{2k} = 0` for even `n ≥ 2`; zero for odd `n`.
pub fn euler_number(n: u32) -> Integer {
    if n % 2 == 1 {
        return Integer::new();
    }
    let mut evens: Vec<Integer> = vec![Integer::from(1)];
    for m in (2..=n).step_by(2) {
        let mut acc = Integer::new();
        for (k, e) in evens.iter().enumerate() {
            acc -= binom(m, 2 * k as u32) * e;
        }
        evens.push(acc);
    }
    evens.pop().expect("at least E_0")
}
