use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

/// An element `a + b√2` of `ℚ(√2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Quad {
    pub rat: Rational,
    pub sqrt2: Rational,
}

impl Quad {
    pub fn new(rat: impl Into<Rational>, sqrt2: impl Into<Rational>) -> Self {
        Self {
            rat: rat.into(),
            sqrt2: sqrt2.into(),
        }
    }

    pub fn rational(r: impl Into<Rational>) -> Self {
        Self::new(r, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }
}

impl Add for &Quad {
    type Output = Quad;
    fn add(self, o: &Quad) -> Quad {
        Quad::new(Rational::from(&self.rat + &o.rat), Rational::from(&self.sqrt2 + &o.sqrt2))
    }
}

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(Rational::from(-&self.rat), Rational::from(-&self.sqrt2))
    }
}

impl Mul for &Quad {
    type Output = Quad;
    fn mul(self, o: &Quad) -> Quad {
        let rat = Rational::from(&self.rat * &o.rat) + Rational::from(&self.sqrt2 * &o.sqrt2) * 2u32;
        let sqrt2 = Rational::from(&self.rat * &o.sqrt2) + Rational::from(&self.sqrt2 * &o.rat);
        Quad::new(rat, sqrt2)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.sqrt2.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}*sqrt2", self.sqrt2),
            (false, false) => write!(f, "({} + {}*sqrt2)", self.rat, self.sqrt2),
        }
    }
}

/// A finite sum `Σ c_a π^a` with `c_a ∈ ℚ(√2)`; zero coefficients are never
/// stored, so structural equality is exact equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiPoly {
    terms: BTreeMap<i32, Quad>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · π^a`.
    pub fn term(c: Quad, a: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(a, c);
        p
    }

    /// `r · π^a` for rational `r`.
    pub fn rational(r: impl Into<Rational>, a: i32) -> Self {
        Self::term(Quad::rational(r), a)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `π^a`.
    pub fn coeff(&self, a: i32) -> Quad {
        self.terms.get(&a).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Quad)> {
        self.terms.iter().map(|(&a, c)| (a, c))
    }

    pub fn add_term(&mut self, a: i32, c: Quad) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(a).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&a);
        }
    }

    /// Multiplies by `r · π^a`.
    pub fn scale(&self, r: &Rational, a: i32) -> PiPoly {
        self.scale_quad(&Quad::rational(r.clone()), a)
    }

    /// Multiplies by `c · π^a`.
    pub fn scale_quad(&self, c: &Quad, a: i32) -> PiPoly {
        let mut out = PiPoly::zero();
        for (&e, x) in &self.terms {
            out.add_term(e + a, x * c);
        }
        out
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, k: &Integer) -> PiPoly {
        self.scale(&Rational::from(k.clone()), 0)
    }
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, o: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        for (&a, c) in &o.terms {
            out.add_term(a, c.clone());
        }
        out
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            terms: self.terms.iter().map(|(&a, c)| (a, -c)).collect(),
        }
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, o: &PiPoly) -> PiPoly {
        self + &(-o)
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, o: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match a {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*pi")?,
                _ => write!(f, "{c}*pi^{a}")?,
            }
        }
        Ok(())
    }
}

/// `re + i·im` with both parts in `ℚ(√2)[π]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexPiPoly {
    pub re: PiPoly,
    pub im: PiPoly,
}

impl ComplexPiPoly {
    pub fn new(re: PiPoly, im: PiPoly) -> Self {
        Self { re, im }
    }

    pub fn real(re: PiPoly) -> Self {
        Self::new(re, PiPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Multiplies by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> ComplexPiPoly {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => ComplexPiPoly::new(-&self.im, self.re.clone()),
            2 => ComplexPiPoly::new(-&self.re, -&self.im),
            _ => ComplexPiPoly::new(self.im.clone(), -&self.re),
        }
    }

    /// Multiplies both parts by a real constant.
    pub fn scale(&self, c: &PiPoly) -> ComplexPiPoly {
        ComplexPiPoly::new(&self.re * c, &self.im * c)
    }
}

impl Add for &ComplexPiPoly {
    type Output = ComplexPiPoly;
    fn add(self, o: &ComplexPiPoly) -> ComplexPiPoly {
        ComplexPiPoly::new(&self.re + &o.re, &self.im + &o.im)
    }
}
