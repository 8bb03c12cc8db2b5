//! Harmonic analysis on the compact torus attached to a triple `(a, Δ, m)`:
//! a reduced root system `Δ` in a Euclidean space with a Weyl-invariant
//! *even* multiplicity function `m`.
//!
//! The crate has an exact layer and a numerical layer.
//!
//! * Exact (arbitrary-precision rational) arithmetic: root systems and their
//!   Weyl groups ([`root_system`]), sparse exponential polynomials on the
//!   restricted weight lattice ([`exppoly`]), Jacobi polynomials `P(m, μ)`
//!   obtained by orthogonalization against orbit sums together with the
//!   `c`-function, Plancherel density and norm formulas ([`jacobi`]), and the
//!   shift operator `D` recovered by an exact linear solve ([`shiftop`]).
//! * Floating point: the Jacobi transform and its inverse on sampled grids,
//!   Paley-Wiener data built from compactly supported bumps and the support
//!   checks ([`transform`], [`pw`]), and the spectral solver for the modified
//!   wave equation with finite-propagation-speed and Huygens diagnostics
//!   ([`wave`]).
//!
//! Everything that the underlying identities allow to be rational *is*
//! rational here; floats appear only in torus evaluation, quadrature and the
//! wave/Paley-Wiener experiments.

pub mod error;
pub mod exppoly;
pub mod grid;
pub mod jacobi;
mod linalg;
pub mod pw;
pub mod root_system;
pub mod shiftop;
pub mod transform;
mod univar;
pub mod wave;

pub use error::{Error, Result};
pub use root_system::{RootSystem, SystemKind, Weight};

/// Rational scalar used throughout the exact layer.
pub type Rat = num_rational::BigRational;

/// Complex scalar used throughout the numerical layer.
pub type C64 = num_complex::Complex64;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub(crate) fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub(crate) fn rat_to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().expect("rational out of f64 range")
}

/// f64 value of an exact rational (for downstream consumers).
pub fn rat_to_f64_pub(q: &Rat) -> f64 {
    rat_to_f64(q)
}
