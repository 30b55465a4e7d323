//! Polynomial vector fields on the chart and the infinitesimal conformal
//! symmetries of `T_3`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::tn_form;
use crate::error::{Error, Result};
use crate::poly::{chart_pairs, chart_vars, rat, MultiPoly, QMatrix, Rational, RationalFunction, Var};

/// A vector field `sum_k X_k d/dp_k` with components in [`chart_vars`] order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorField {
    pub n: usize,
    pub label: String,
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub components: Vec<RationalFunction>,
}

impl VectorField {
    pub fn new(n: usize, label: impl Into<String>, components: Vec<RationalFunction>) -> Result<Self> {
        let d = n * (n + 1) / 2;
        if components.len() != d {
            return Err(Error::Invalid(format!("a vector field for n = {n} has {d} components")));
        }
        Ok(VectorField { n, label: label.into(), components })
    }

    fn from_polys(n: usize, label: String, components: Vec<MultiPoly>) -> Self {
        VectorField { n, label, components: components.into_iter().map(RationalFunction::from_poly).collect() }
    }

    /// `d/dp_ij`.
    pub fn translation(n: usize, i: usize, j: usize) -> Self {
        let target = Var::p(i, j);
        let comps = chart_vars(n).iter().map(|v| if *v == target { MultiPoly::one() } else { MultiPoly::zero() }).collect();
        Self::from_polys(n, format!("d/d{target}"), comps)
    }

    /// The Euler field `sum p_ij d/dp_ij`.
    pub fn stretching(n: usize) -> Self {
        Self::from_polys(n, "stretching".into(), chart_vars(n).into_iter().map(MultiPoly::var).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        VectorField { n: self.n, label: format!("{} + {}", self.label, other.label), components }
    }

    /// Components at a point binding every chart coordinate.
    pub fn at(&self, point: &BTreeMap<Var, Rational>) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval_full(point)).collect()
    }

    /// The Jacobian `dX_k / dp_l` at a point.
    pub fn jacobian_at(&self, point: &BTreeMap<Var, Rational>) -> Result<Vec<Vec<Rational>>> {
        let vars = chart_vars(self.n);
        self.components
            .iter()
            .map(|c| vars.iter().map(|v| c.partial(v).eval_full(point)).collect())
            .collect()
    }
}

fn coord(i: usize, j: usize) -> MultiPoly {
    MultiPoly::var(Var::p(i, j))
}

fn index3(i: usize, j: usize) -> usize {
    chart_pairs(3).iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).expect("valid pair")
}

/// The 21 generators of the conformal symmetry algebra of `T_3` in the
/// coordinates `(xi_1, ..., xi_6) = (p11, p12, p13, p22, p23, p33)`, with
/// the rows `(1,2,3)`, `(2,4,5)`, `(3,5,6)` of `P`:
///
/// * the six translations `d/dxi_i`;
/// * nine linear fields `(E P + P E^T) / 2` with `E = e_b e_a^T`, i.e.
///   row `a` of `P` pushed onto row `b`, with weight 1 on the diagonal
///   slot `(b, b)` and 1/2 elsewhere;
/// * six quadratic fields `(P e_a e_b^T P + P e_b e_a^T P) / 2`, `a <= b`.
pub fn sp6_generators() -> Vec<VectorField> {
    let mut out = Vec::with_capacity(21);
    for &(i, j) in &chart_pairs(3) {
        out.push(VectorField::translation(3, i, j));
    }
    let half = rat(1, 2);
    for a in 1..=3 {
        for b in 1..=3 {
            let mut comps = vec![MultiPoly::zero(); 6];
            for y in 1..=3 {
                let w = if y == b { Rational::from_integer(1.into()) } else { half.clone() };
                let k = index3(b, y);
                comps[k] = &comps[k] + &coord(a, y).scale(&w);
            }
            out.push(VectorField::from_polys(3, format!("linear({a},{b})"), comps));
        }
    }
    for a in 1..=3 {
        for b in a..=3 {
            let comps = chart_pairs(3)
                .iter()
                .map(|&(c, d)| (&(&coord(a, c) * &coord(b, d)) + &(&coord(b, c) * &coord(a, d))).scale(&half))
                .collect();
            out.push(VectorField::from_polys(3, format!("quadratic({a},{b})"), comps));
        }
    }
    out
}

/// The nine linear fields `xi_i d_l + 1/2 xi_j d_m + 1/2 xi_k d_n`, with
/// `(i,j,k)` and `(l,m,n)` ranging over the rows `(1,2,3)`, `(2,4,5)`,
/// `(3,5,6)`, read with the weight 1 always on the first slot. Only the
/// three with target row `(1,2,3)` are conformal; [`sp6_generators`] uses
/// the weight on the diagonal slot instead.
pub fn printed_linear_fields() -> Vec<VectorField> {
    let triples = [[1usize, 2, 3], [2, 4, 5], [3, 5, 6]];
    let vars = chart_vars(3);
    let half = rat(1, 2);
    let mut out = Vec::with_capacity(9);
    for (a, src) in triples.iter().enumerate() {
        for (b, dst) in triples.iter().enumerate() {
            let mut comps = vec![MultiPoly::zero(); 6];
            for s in 0..3 {
                let w = if s == 0 { Rational::from_integer(1.into()) } else { half.clone() };
                let k = dst[s] - 1;
                comps[k] = &comps[k] + &MultiPoly::var(vars[src[s] - 1].clone()).scale(&w);
            }
            out.push(VectorField::from_polys(3, format!("row {} -> row {}", a + 1, b + 1), comps));
        }
    }
    out
}

/// Outcome of solving `L_X T_n = mu T_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalCheck {
    pub label: String,
    pub conformal: bool,
    /// The factor `mu`, when it exists.
    #[serde(serialize_with = "option_display")]
    pub factor: Option<RationalFunction>,
    /// The remainder of `L_X T_n` on division by `T_n` otherwise.
    #[serde(serialize_with = "option_display")]
    pub residual: Option<RationalFunction>,
}

fn option_display<S: serde::Serializer>(v: &Option<RationalFunction>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

/// Computes `(L_X T_n)(v, ..., v) = sum_k dT/dv_k (DX v)_k` (the
/// coefficients of `T_n` are constant) and divides it by `T_n(v, ..., v)`.
pub fn conformal_check(x: &VectorField) -> Result<ConformalCheck> {
    let n = x.n;
    let t = tn_form(n)?;
    let form = t.form();
    let vars = chart_vars(n);
    let tangents: Vec<Var> = chart_pairs(n).iter().map(|&(i, j)| Var::tangent(i, j)).collect();
    let mut lie = RationalFunction::zero();
    for (k, xk) in x.components.iter().enumerate() {
        let grad = RationalFunction::from_poly(form.partial(&tangents[k]));
        if grad.is_zero() {
            continue;
        }
        let mut w = RationalFunction::zero();
        for (l, v) in vars.iter().enumerate() {
            let d = xk.partial(v);
            if !d.is_zero() {
                w = &w + &(&d * &RationalFunction::var(tangents[l].clone()));
            }
        }
        lie = &lie + &(&grad * &w);
    }
    let (num, den) = lie.into_parts();
    let (q, r) = num.div_rem(form)?;
    let (factor, residual) = if r.is_zero() {
        (Some(RationalFunction::new(q, den)?), None)
    } else {
        (None, Some(RationalFunction::new(r, den)?))
    };
    Ok(ConformalCheck { label: x.label.clone(), conformal: factor.is_some(), factor, residual })
}

/// Rank over the rationals of a family of polynomial vector fields.
pub fn field_rank(fields: &[VectorField]) -> Result<usize> {
    for f in fields {
        if f.components.iter().any(|c| !c.is_polynomial()) {
            return Err(Error::Invalid(format!("field {} has a non-polynomial component", f.label)));
        }
    }
    let all_vars: Vec<Var> = {
        let mut v: Vec<Var> = fields.iter().flat_map(|f| f.components.iter().flat_map(|c| c.vars())).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut index: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for f in fields {
        let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
        for (k, c) in f.components.iter().enumerate() {
            let p = c.as_polynomial().expect("polynomial component");
            for (m, coef) in p.terms() {
                let exps: Vec<u32> = all_vars.iter().map(|v| p.exponent_of(m, v)).collect();
                let next = index.len();
                let col = *index.entry((k, exps)).or_insert(next);
                *row.entry(col).or_insert_with(Rational::zero) += coef;
            }
        }
        rows.push(row);
    }
    let width = index.len();
    let dense = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![Rational::zero(); width];
            for (c, x) in r {
                v[c] = x;
            }
            v
        })
        .collect();
    Ok(QMatrix::from_rows(dense).rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_function;

    fn mu(x: &VectorField) -> String {
        conformal_check(x).unwrap().factor.expect("conformal").to_string()
    }

    #[test]
    fn stretching_and_translations() {
        assert_eq!(mu(&VectorField::stretching(3)), "3");
        assert_eq!(mu(&VectorField::stretching(2)), "2");
        assert_eq!(mu(&VectorField::translation(3, 1, 2)), "0");
    }

    #[test]
    fn generator_factors() {
        let gens = sp6_generators();
        assert_eq!(gens.len(), 21);
        let factors: Vec<String> = gens.iter().map(mu).collect();
        assert_eq!(&factors[..6], ["0"; 6]);
        // linear(a, b) has factor delta_ab
        assert_eq!(&factors[6..15], ["1", "0", "0", "0", "1", "0", "0", "0", "1"]);
        assert_eq!(&factors[15..], ["2*p11", "2*p12", "2*p13", "2*p22", "2*p23", "2*p33"]);
        assert_eq!(field_rank(&gens).unwrap(), 21);
    }

    #[test]
    fn stretching_is_the_sum_of_diagonal_linear_fields() {
        let gens = sp6_generators();
        let sum = gens[6].add(&gens[10]).add(&gens[14]);
        assert_eq!(sum.components, VectorField::stretching(3).components);
    }

    #[test]
    fn mixed_quadratic_fields_match_their_expansion() {
        // the (1,2) field written out coordinate by coordinate
        let expected = [
            "p11*p12",
            "1/2*(p12^2 + p11*p22)",
            "1/2*(p12*p13 + p11*p23)",
            "p22*p12",
            "1/2*(p23*p12 + p13*p22)",
            "p13*p23",
        ];
        let gens = sp6_generators();
        for (c, e) in gens[16].components.iter().zip(expected) {
            assert_eq!(*c, parse_function(e, 3).unwrap());
        }
    }

    #[test]
    fn literal_row_transcription_fails_off_the_first_row() {
        let checks: Vec<bool> = printed_linear_fields().iter().map(|x| conformal_check(x).unwrap().conformal).collect();
        let expected: Vec<bool> = (0..9).map(|k| k % 3 == 0).collect();
        assert_eq!(checks, expected);
    }

    #[test]
    fn non_conformal_field_has_a_residual() {
        let x = VectorField::new(2, "p11 d/dp11", vec![RationalFunction::var(Var::p(1, 1)), RationalFunction::zero(), RationalFunction::zero()]).unwrap();
        let c = conformal_check(&x).unwrap();
        assert!(!c.conformal);
        assert!(c.residual.is_some());
    }
}
