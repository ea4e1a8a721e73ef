//! Exact dispersion computations for planar admissible lattices and rank-1
//! lattices on the torus.

pub mod error;
pub mod boxwalk;
pub mod contfrac;
pub mod dispersion;
pub mod oracle;
pub mod qfield;
pub mod torus;

pub use error::{Error, Result};
pub use qfield::{ci_compare, CertifiedInterval, Expr, QuadraticNumber};
