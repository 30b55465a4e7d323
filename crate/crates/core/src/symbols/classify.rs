//! Type of a two-dimensional equation and the characteristic roots.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::exceptional::solve_for_jet;
use super::surd::QuadSurd;
use super::PdeFunction;
use crate::error::{Error, Result};
use crate::poly::{format_rational, Rational, RationalFunction, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationType {
    Hyperbolic,
    Elliptic,
    Parabolic,
    Degenerate,
    /// The discriminant is not constant and no point was given.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult {
    #[serde(rename = "type")]
    pub equation_type: EquationType,
    /// `F_p12^2 - 4 F_p11 F_p22`.
    #[serde(serialize_with = "as_string")]
    pub delta: RationalFunction,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_rational")]
    pub delta_at_point: Option<Rational>,
    /// Roots of `F_p11 + F_p12 l + F_p22 l^2 = 0` in decreasing order;
    /// `inf` marks a root at infinity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<String>>,
    /// Whether every root is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots_rational: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots_approx: Option<Vec<f64>>,
}

fn as_string<S: serde::Serializer, T: ToString>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

fn two_dimensional(f: &PdeFunction) -> Result<()> {
    if f.n() != 2 {
        return Err(Error::Invalid(format!("requires n = 2, got {}", f.n())));
    }
    Ok(())
}

enum Root {
    Finite(QuadSurd),
    Infinite,
}

/// Real roots of `a + b l + c l^2`, decreasing, when the discriminant is
/// non-negative.
fn real_roots(a: &Rational, b: &Rational, c: &Rational) -> Result<Option<Vec<Root>>> {
    let delta = b * b - Rational::from_integer(4.into()) * a * c;
    if delta.is_negative() {
        return Ok(None);
    }
    if c.is_zero() {
        if b.is_zero() {
            return Ok(Some(vec![Root::Infinite, Root::Infinite]));
        }
        return Ok(Some(vec![Root::Infinite, Root::Finite(QuadSurd::rational(-a / b))]));
    }
    let sq = QuadSurd::sqrt(&delta)?;
    let inv = (Rational::from_integer(2.into()) * c).recip();
    let mb = QuadSurd::rational(-b);
    let mut r = vec![(&mb + &sq).scale(&inv), (&mb - &sq).scale(&inv)];
    r.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
    Ok(Some(r.into_iter().map(Root::Finite).collect()))
}

/// Classifies a two-dimensional equation by the sign of its discriminant,
/// at a point when one is given.
pub fn classify(f: &PdeFunction, at: Option<&BTreeMap<Var, Rational>>) -> Result<ClassificationResult> {
    two_dimensional(f)?;
    let c11 = f.partial(1, 1);
    let c12 = f.partial(1, 2);
    let c22 = f.partial(2, 2);
    let delta = &(&c12 * &c12) - &(&c11 * &c22).scale(&Rational::from_integer(4.into()));
    let mut result = ClassificationResult {
        equation_type: EquationType::Undetermined,
        delta: delta.clone(),
        delta_at_point: None,
        roots: None,
        roots_rational: None,
        roots_approx: None,
    };
    let values = match at {
        Some(point) => {
            let ev = |c: &RationalFunction| -> Result<Rational> { c.eval_full(point) };
            Some((ev(&c11)?, ev(&c12)?, ev(&c22)?))
        }
        None => match (c11.constant_value(), c12.constant_value(), c22.constant_value()) {
            (Some(a), Some(b), Some(c)) => Some((a, b, c)),
            _ => None,
        },
    };
    let Some((a, b, c)) = values else {
        if c11.is_zero() && c12.is_zero() && c22.is_zero() {
            result.equation_type = EquationType::Degenerate;
        } else if let Some(d) = delta.constant_value() {
            result.equation_type = type_of(&d);
        }
        return Ok(result);
    };
    let d = &b * &b - Rational::from_integer(4.into()) * &a * &c;
    if at.is_some() {
        result.delta_at_point = Some(d.clone());
    }
    if a.is_zero() && b.is_zero() && c.is_zero() {
        result.equation_type = EquationType::Degenerate;
        return Ok(result);
    }
    result.equation_type = type_of(&d);
    if let Some(roots) = real_roots(&a, &b, &c)? {
        result.roots_rational = Some(roots.iter().all(|r| matches!(r, Root::Finite(q) if q.is_rational())));
        result.roots_approx = Some(
            roots
                .iter()
                .map(|r| match r {
                    Root::Finite(q) => q.to_f64(),
                    Root::Infinite => f64::INFINITY,
                })
                .collect(),
        );
        result.roots = Some(
            roots
                .iter()
                .map(|r| match r {
                    Root::Finite(q) => q.to_string(),
                    Root::Infinite => "inf".to_string(),
                })
                .collect(),
        );
    }
    Ok(result)
}

fn type_of(d: &Rational) -> EquationType {
    match d.cmp(&Rational::zero()) {
        Ordering::Greater => EquationType::Hyperbolic,
        Ordering::Less => EquationType::Elliptic,
        Ordering::Equal => EquationType::Parabolic,
    }
}

/// Affine coordinate on the projective line of characteristic directions:
/// `lambda = xi2/xi1` or `mu = xi1/xi2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Lambda,
    Mu,
}

impl Chart {
    /// Chart indices standing in for (11, 12, 22).
    fn indices(self) -> [(usize, usize); 3] {
        match self {
            Chart::Lambda => [(1, 1), (1, 2), (2, 2)],
            Chart::Mu => [(2, 2), (1, 2), (1, 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootResidual {
    pub chart: Chart,
    #[serde(serialize_with = "as_string")]
    pub root: QuadSurd,
    #[serde(serialize_with = "as_string")]
    pub residual: QuadSurd,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootsReport {
    /// The point used, including a solved-for `p22` when it was omitted.
    #[serde(serialize_with = "point_strings")]
    pub point: BTreeMap<Var, Rational>,
    pub roots: Vec<RootResidual>,
    /// Both residuals vanish.
    pub exceptional: bool,
}

fn point_strings<S: serde::Serializer>(p: &BTreeMap<Var, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(p.len()))?;
    for (k, v) in p {
        m.serialize_entry(&k.to_string(), &format_rational(v))?;
    }
    m.end()
}

/// Fills in one missing chart coordinate from `F = 0` when `F` is affine in it.
/// Only the variables in `needed` have to be bound in the end.
pub(crate) fn complete_point(
    f: &PdeFunction,
    point: &BTreeMap<Var, Rational>,
    needed: &[Var],
) -> Result<BTreeMap<Var, Rational>> {
    let missing: Vec<Var> = needed.iter().filter(|v| !point.contains_key(v)).cloned().collect();
    if missing.is_empty() {
        return Ok(point.clone());
    }
    let names = || missing.iter().map(Var::to_string).collect::<Vec<_>>().join(", ");
    if missing.len() > 1 {
        return Err(Error::Underdetermined(format!("unbound variables {}", names())));
    }
    let target = &missing[0];
    let Some((v, value)) = solve_for_jet(f).filter(|(v, _)| v == target) else {
        return Err(Error::Underdetermined(format!("cannot solve the equation for {}", names())));
    };
    let mut out = point.clone();
    out.insert(v, value.eval_full(point)?);
    Ok(out)
}

/// Residual `l_11 + l_12 l + l_22 l^2` of the characteristic-root condition
/// for each real root at a strictly hyperbolic point, computed exactly in
/// `Q(sqrt(Delta))`. A coordinate missing from the point is solved for
/// from `F = 0` when possible.
pub fn exceptionality_at_roots(f: &PdeFunction, at: &BTreeMap<Var, Rational>) -> Result<RootsReport> {
    two_dimensional(f)?;
    let idx = [(1, 1), (1, 2), (2, 2)];
    let mut needed: Vec<Var> = Vec::new();
    for &a in &idx {
        let fa = f.partial(a.0, a.1);
        needed.extend(fa.vars());
        for &b in &idx {
            needed.extend(fa.partial(&Var::p(b.0, b.1)).vars());
        }
    }
    needed.sort();
    needed.dedup();
    let point = complete_point(f, at, &needed)?;
    let mut first: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    let mut second: BTreeMap<((usize, usize), (usize, usize)), Rational> = BTreeMap::new();
    for &a in &idx {
        let fa = f.partial(a.0, a.1);
        first.insert(a, fa.eval_full(&point)?);
        for &b in &idx {
            let v = fa.partial(&Var::p(b.0, b.1)).eval_full(&point)?;
            second.insert((a, b), v);
        }
    }
    let delta = &first[&(1, 2)] * &first[&(1, 2)]
        - Rational::from_integer(4.into()) * &first[&(1, 1)] * &first[&(2, 2)];
    match delta.cmp(&Rational::zero()) {
        Ordering::Less => return Err(Error::EllipticPoint),
        Ordering::Equal => return Err(Error::ParabolicPoint),
        Ordering::Greater => {}
    }
    let charts: Vec<(Chart, Option<usize>)> = if !first[&(2, 2)].is_zero() {
        vec![(Chart::Lambda, Some(0)), (Chart::Lambda, Some(1))]
    } else if !first[&(1, 1)].is_zero() {
        vec![(Chart::Mu, Some(0)), (Chart::Mu, Some(1))]
    } else {
        // F11 = F22 = 0: the roots are lambda = 0 and mu = 0.
        vec![(Chart::Lambda, None), (Chart::Mu, None)]
    };
    let mut roots = Vec::new();
    for (chart, which) in charts {
        let ix = chart.indices();
        let c: Vec<&Rational> = ix.iter().map(|k| &first[k]).collect();
        let x = match which {
            None => QuadSurd::rational(Rational::zero()),
            Some(w) => {
                let Some(rs) = real_roots(c[0], c[1], c[2])? else { return Err(Error::EllipticPoint) };
                match &rs[w] {
                    Root::Finite(q) => q.clone(),
                    Root::Infinite => return Err(Error::ParabolicPoint),
                }
            }
        };
        let x2 = &x * &x;
        let den = &QuadSurd::rational(c[1].clone()) + &x.scale(&(Rational::from_integer(2.into()) * c[2]));
        if den.is_zero() {
            return Err(Error::ParabolicPoint);
        }
        let inv = den.recip()?;
        let derivative = |target: (usize, usize)| -> QuadSurd {
            let s0 = QuadSurd::rational(second[&(ix[0], target)].clone());
            let s1 = x.scale(&second[&(ix[1], target)]);
            let s2 = x2.scale(&second[&(ix[2], target)]);
            -&(&(&(&s0 + &s1) + &s2) * &inv)
        };
        let residual = &(&derivative(ix[0]) + &(&derivative(ix[1]) * &x)) + &(&derivative(ix[2]) * &x2);
        roots.push(RootResidual { chart, root: x, residual });
    }
    let exceptional = roots.iter().all(|r| r.residual.is_zero());
    Ok(RootsReport { point, roots, exceptional })
}
