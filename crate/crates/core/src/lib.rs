//! Exact and asymptotic rank statistics of unimodal sequences.
//!
//! The crate counts four families of unimodal sequences refined by rank,
//! both exactly (truncated two-variable q-series, cross-checked against
//! brute-force enumeration) and asymptotically (Bessel-function expansions
//! with exact symbolic coefficients).

pub mod asymptotics;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod genfun;
pub mod kernels;
pub mod qseries;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use family::Family;
