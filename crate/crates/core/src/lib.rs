//! Exact symbolic tools for second-order scalar PDEs on the Lagrangian
//! Grassmannian: principal symbols, exceptionality tests, conformal
//! geometry of hypersurfaces and the kernel of the first BGG operator.

pub mod bgg;
pub mod conformal;
pub mod error;
pub mod expr;
pub mod lgrass;
pub mod poly;
pub mod symbols;

pub use error::{Error, Result};
pub use poly::{MultiPoly, QMatrix, Rational, RationalFunction, Var};
