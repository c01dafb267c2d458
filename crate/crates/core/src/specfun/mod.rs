//! Exact special values, the symbolic constant ring `ℚ(√2)[π]`, and
//! arbitrary-precision Bessel kernels.

mod bessel;
mod pipoly;
mod poly;

pub use bessel::{bessel_i_scaled, bessel_profile, ln_integer, pi, pi_poly_eval, ProfileKind};
pub use pipoly::{ComplexPiPoly, PiPoly, Quad};
pub use poly::{bernoulli_number, bernoulli_poly, bernoulli_table, euler_number, euler_poly};
