//! Text input and output for rational expressions.

mod ast;
mod parser;

pub use ast::Expr;
pub use parser::parse;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{parse_rational, Rational, RationalFunction, Var};

/// Parses and lowers in one step.
pub fn parse_function(text: &str, n: usize) -> Result<RationalFunction> {
    parse(text, n)?.lower()
}

/// Text that [`parse_function`] reads back to the same value.
pub fn format(f: &RationalFunction) -> String {
    f.to_string()
}

/// Reads a point such as `"p11=1/2, p12=0, k0=3"`.
pub fn parse_point(text: &str, n: usize) -> Result<BTreeMap<Var, Rational>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{item}`")))?;
        let var = Var::from_name(name.trim(), n)?;
        out.insert(var, parse_rational(value)?);
    }
    Ok(out)
}
