//! Exact and numerical machinery for spectral decompositions of two
//! non-Hermitian Schrödinger operators with exceptional points:
//! `h_n = −∂² + n(n+1)/(x − z)²` (exceptional point at the threshold `E = 0`)
//! and an interior model whose exceptional point `E = α²` is embedded in the
//! continuum.

pub mod biortho;
pub mod boundary;
pub mod error;
pub mod exact;
pub mod greens;
pub mod interior;
pub mod model;
pub mod quadrature;
pub mod report;
pub mod resolution;
pub mod suites;
pub mod susy;

pub use error::{Error, Result};
pub use model::{Model, ModelKind};
