//! Exact multivariate polynomial and rational-function arithmetic.

pub mod gcd;
pub mod matrix;
pub mod multipoly;
pub mod ratfunc;
pub mod rational;
pub mod serde_impls;
pub mod var;

pub use gcd::gcd;
pub use matrix::{bareiss, rref_rows, Echelon, ExactDomain, QMatrix};
pub use multipoly::{Monomial, MultiPoly};
pub use ratfunc::RationalFunction;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use var::{chart_pairs, chart_vars, covector_vars, Var};
