//! Numerical radius and `||I + t S_B||` for compressed shifts attached to
//! finite Blaschke products.
//!
//! Radius routes: closed forms and unimodular roots of `z B(z) = +-1` for real
//! zeros ([`realzeros`]), an eigenvalue sweep of the support function
//! ([`numrange`]), and the `t -> 0+` limit of `||I + tA||` computed either
//! directly or through Pick matrices ([`pick`]). Norm routes: SVD, Pick
//! bisection, and the reduced Foias–Tannenbaum equations ([`ft`]).

pub mod blaschke;
pub mod config;
pub mod ft;
pub mod linalg;
pub mod numrange;
pub mod pick;
pub mod poly;
pub mod realzeros;
pub mod result;

pub use blaschke::{BlaschkeError, BlaschkeProduct, CompressedShiftMatrix, EllipseParams};
pub use config::RunConfig;
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use result::{Method, NormResult};
