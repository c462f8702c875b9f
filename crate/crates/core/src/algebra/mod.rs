//! Exact arithmetic substrate.

pub mod json;
pub mod matrix;
pub mod mpoly;
pub mod proj;
pub mod scalar;
pub mod upoly;

pub use matrix::QMat;
pub use mpoly::{linear_forms, MPoly, Monomial};
pub use proj::{conic_through, dot, ProjPoint};
pub use scalar::{rat, ratio, Modulus, Rational, Scalar};
pub use upoly::UPoly;
