use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A named variable of the jet-space chart.
///
/// Indices are 1-based. Second-jet and tangent coordinates are stored with
/// `i <= j`. The derived order is the registry order used by every
/// polynomial: second jets first, then covector components, then tangent
/// coordinates, then the inert coordinates and finally free parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Var {
    /// `p_ij`, a coordinate of the Lagrangian Grassmannian chart.
    SecondJet(u8, u8),
    /// `xi_i`, a covector component.
    Covector(u8),
    /// `v_ij`, a tangent-vector coordinate of the chart.
    Tangent(u8, u8),
    /// `x_i`, an independent variable.
    Base(u8),
    /// `u`, the unknown function.
    Unknown,
    /// `p_i`, a first-order jet coordinate.
    FirstJet(u8),
    /// Any other identifier.
    Param(String),
}

impl Var {
    pub fn p(i: usize, j: usize) -> Var {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        Var::SecondJet(a as u8, b as u8)
    }

    pub fn xi(i: usize) -> Var {
        Var::Covector(i as u8)
    }

    pub fn tangent(i: usize, j: usize) -> Var {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        Var::Tangent(a as u8, b as u8)
    }

    pub fn param(name: impl Into<String>) -> Var {
        Var::Param(name.into())
    }

    /// Resolves an identifier for a problem with `n` independent variables.
    ///
    /// `x1..xn`, `u`, `p1..pn`, `p11..pnn`, `xi1..xin` are jet coordinates;
    /// every other identifier is a parameter. Indices outside `1..=n` are
    /// rejected. `pji` with `j > i` is read as `pij`.
    pub fn from_name(name: &str, n: usize) -> Result<Var> {
        if name.is_empty() {
            return Err(Error::UnknownVariable(String::new()));
        }
        let check = |idx: usize| -> Result<u8> {
            if idx == 0 || idx > n {
                Err(Error::IndexOutOfRange { name: name.to_string(), n })
            } else {
                Ok(idx as u8)
            }
        };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if name == "u" {
            return Ok(Var::Unknown);
        }
        if let Some(rest) = name.strip_prefix("xi") {
            if digits(rest) {
                return Ok(Var::Covector(check(rest.parse().unwrap_or(0))?));
            }
        }
        if let Some(rest) = name.strip_prefix('x') {
            if digits(rest) {
                return Ok(Var::Base(check(rest.parse().unwrap_or(0))?));
            }
        }
        if let Some(rest) = name.strip_prefix('p') {
            if digits(rest) {
                let bytes = rest.as_bytes();
                match bytes.len() {
                    1 => return Ok(Var::FirstJet(check((bytes[0] - b'0') as usize)?)),
                    2 => {
                        let i = check((bytes[0] - b'0') as usize)?;
                        let j = check((bytes[1] - b'0') as usize)?;
                        return Ok(Var::p(i as usize, j as usize));
                    }
                    _ => {}
                }
            }
        }
        Ok(Var::Param(name.to_string()))
    }

    pub fn is_second_jet(&self) -> bool {
        matches!(self, Var::SecondJet(..))
    }

    pub fn is_covector(&self) -> bool {
        matches!(self, Var::Covector(_))
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Var::SecondJet(..) => 0,
            Var::Covector(_) => 1,
            Var::Tangent(..) => 2,
            Var::Base(_) => 3,
            Var::Unknown => 4,
            Var::FirstJet(_) => 5,
            Var::Param(_) => 6,
        }
    }
}

/// Splits an identifier into its alphabetic stem and trailing number so that
/// `k2 < k10`.
fn natural_key(name: &str) -> (&str, Option<u128>, &str) {
    let split = name
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(name.len());
    let (stem, digits) = name.split_at(split);
    (stem, digits.parse().ok(), digits)
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        use Var::*;
        match (self, other) {
            (SecondJet(a, b), SecondJet(c, d)) | (Tangent(a, b), Tangent(c, d)) => (a, b).cmp(&(c, d)),
            (Covector(a), Covector(b)) | (Base(a), Base(b)) | (FirstJet(a), FirstJet(b)) => a.cmp(b),
            (Param(a), Param(b)) => natural_key(a).cmp(&natural_key(b)),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::SecondJet(i, j) => write!(f, "p{i}{j}"),
            Var::Covector(i) => write!(f, "xi{i}"),
            Var::Tangent(i, j) => write!(f, "v{i}{j}"),
            Var::Base(i) => write!(f, "x{i}"),
            Var::Unknown => write!(f, "u"),
            Var::FirstJet(i) => write!(f, "p{i}"),
            Var::Param(s) => f.write_str(s),
        }
    }
}

/// The `n(n+1)/2` chart coordinates `p_ij`, `i <= j`, in registry order.
pub fn chart_vars(n: usize) -> Vec<Var> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            out.push(Var::p(i, j));
        }
    }
    out
}

/// The index pairs matching [`chart_vars`].
pub fn chart_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            out.push((i, j));
        }
    }
    out
}

pub fn covector_vars(n: usize) -> Vec<Var> {
    (1..=n).map(Var::xi).collect()
}
