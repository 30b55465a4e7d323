//! Hyperplane-section tests for hypersurfaces `F = 0` of the chart and the
//! obstruction tensor `Phi`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::forms::{fundamental_forms, graph_form, FundamentalForm, Metric, NormalRule};
use super::symmetries::VectorField;
use super::det_coords;
use crate::error::{Error, Result};
use crate::poly::{chart_vars, format_rational, rref_rows, MultiPoly, QMatrix, Rational, RationalFunction, Var};
use crate::symbols::{is_completely_exceptional, solve_for_jet, PdeFunction};

/// Verdict of [`hyperplane_test`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperplaneVerdict {
    pub n: usize,
    pub is_section: bool,
    /// `n = 2`: the cross products of `II` against `I`; `n = 3`: the
    /// residues of `Smbl^2` modulo `Smbl` on the equation.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub residuals: Vec<RationalFunction>,
    pub method: String,
}

/// Decides whether `F = 0` is a hyperplane section of `LGr(n, 2n)`.
///
/// For `n = 2` the second fundamental form of the graph of `F` with
/// respect to `T_2` must be proportional to the first. For `n = 3` the
/// condition on `II` of `X ⌟ T_3` reduces to `Smbl^2(F)` being a multiple
/// of `Smbl(F)` on the equation.
pub fn hyperplane_test(f: &PdeFunction) -> Result<HyperplaneVerdict> {
    match f.n() {
        2 => {
            let graph = graph_form(f)?;
            let forms = fundamental_forms(&graph, &Metric::T2, &NormalRule::Solved)?;
            let residuals: Vec<RationalFunction> = forms.proportionality.into_iter().filter(|r| !r.is_zero()).collect();
            Ok(HyperplaneVerdict {
                n: 2,
                is_section: residuals.is_empty(),
                residuals,
                method: format!("II proportional to I on {} = h", graph.solved),
            })
        }
        3 => {
            let report = is_completely_exceptional(f)?;
            Ok(HyperplaneVerdict {
                n: 3,
                is_section: report.on_shell_proportional,
                residuals: report.residuals,
                method: "second symbol divisible by the symbol on the equation".into(),
            })
        }
        n => Err(Error::Invalid(format!("the hyperplane test covers n = 2 and n = 3, got {n}"))),
    }
}

/// The direct `n = 3` computation at one point of the hypersurface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointMembership {
    #[serde(serialize_with = "point_repr")]
    pub point: BTreeMap<Var, Rational>,
    pub member: bool,
    /// Reduction of `II` modulo the restrictions of `Y ⌟ T_3`, entries
    /// `(a, b)` with `a <= b` over the tangent frame.
    #[serde(serialize_with = "rationals_repr")]
    pub remainder: Vec<Rational>,
}

fn point_repr<S: serde::Serializer>(p: &BTreeMap<Var, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(p.iter().map(|(k, v)| (k.to_string(), format_rational(v))))
}

fn rationals_repr<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn zero() -> Rational {
    Rational::zero()
}

/// `T_3(u, v, w)` by polarisation of the determinant.
fn trilinear(u: &[Rational], v: &[Rational], w: &[Rational]) -> Rational {
    let det = |xs: &[&[Rational]]| {
        let sum: Vec<Rational> = (0..6).map(|k| xs.iter().fold(zero(), |acc, x| acc + &x[k])).collect();
        det_coords(3, &sum)
    };
    let value = det(&[u, v, w]) - det(&[u, v]) - det(&[u, w]) - det(&[v, w]) + det(&[u]) + det(&[v]) + det(&[w]);
    value / Rational::from_integer(6.into())
}

/// Tests whether the second fundamental form of `F = 0` for the metric
/// `g = X ⌟ T_3` (with its Levi-Civita connection) lies in the span of the
/// restrictions of `Y ⌟ T_3` at a point. The point binds the five free
/// chart coordinates (and any parameters); the solved one is completed
/// from the equation.
pub fn direct_membership_at(f: &PdeFunction, x: &VectorField, point: &BTreeMap<Var, Rational>) -> Result<PointMembership> {
    if f.n() != 3 || x.n != 3 {
        return Err(Error::Invalid("the direct membership test is for n = 3".into()));
    }
    let (solved, h) = solve_for_jet(f).ok_or_else(|| Error::NoGraphForm("any chart coordinate".into()))?;
    let vars = chart_vars(3);
    let k = vars.iter().position(|v| *v == solved).expect("chart coordinate");
    let free: Vec<usize> = (0..6).filter(|&i| i != k).collect();

    let mut full = point.clone();
    full.remove(&solved);
    let h0 = h.eval_full(&full)?;
    full.insert(solved.clone(), h0);
    // derivatives of h at the point by implicit differentiation of
    // G = den(h) v - num(h), which is affine in v
    let g = &(h.denom() * &MultiPoly::var(solved.clone())) - h.numer();
    let at = |p: &MultiPoly| p.eval_full(&full).ok_or(Error::Pole);
    let gv = g.partial(&solved);
    let gv0 = at(&gv)?;
    if gv0.is_zero() {
        return Err(Error::Pole);
    }
    let ga: Vec<MultiPoly> = free.iter().map(|&a| g.partial(&vars[a])).collect();
    let hd: Vec<Rational> = ga.iter().map(|d| at(d).map(|x| -x / &gv0)).collect::<Result<_>>()?;
    let gva: Vec<Rational> = free.iter().map(|&a| at(&gv.partial(&vars[a]))).collect::<Result<_>>()?;
    let mut hdd = vec![vec![zero(); 5]; 5];
    for a in 0..5 {
        for b in a..5 {
            let gab = at(&ga[a].partial(&vars[free[b]]))?;
            let v = -(gab + &gva[a] * &hd[b] + &gva[b] * &hd[a]) / &gv0;
            hdd[a][b] = v.clone();
            hdd[b][a] = v;
        }
    }

    let unit = |i: usize| -> Vec<Rational> { (0..6).map(|j| if i == j { Rational::one() } else { zero() }).collect() };
    let units: Vec<Vec<Rational>> = (0..6).map(unit).collect();
    let mut t = vec![vec![vec![zero(); 6]; 6]; 6];
    for a in 0..6 {
        for b in a..6 {
            for c in b..6 {
                let v = trilinear(&units[a], &units[b], &units[c]);
                for (i, j, l) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    t[i][j][l] = v.clone();
                }
            }
        }
    }
    let form_of = |y: &[Rational]| -> Vec<Vec<Rational>> {
        (0..6)
            .map(|a| (0..6).map(|b| (0..6).fold(zero(), |acc, c| acc + &y[c] * &t[c][a][b])).collect())
            .collect()
    };

    let xv = x.at(&full)?;
    let jac = x.jacobian_at(&full)?;
    let g = form_of(&xv);
    let ginv = QMatrix::from_rows(g.clone())
        .inverse()
        .ok_or_else(|| Error::Invalid("X ⌟ T_3 is degenerate at the point".into()))?;
    // dg[c][a][b] = d_c g_ab = T_3(d_c X, e_a, e_b)
    let dg: Vec<Vec<Vec<Rational>>> = (0..6)
        .map(|c| {
            let col: Vec<Rational> = (0..6).map(|r| jac[r][c].clone()).collect();
            form_of(&col)
        })
        .collect();
    let half = Rational::new(1.into(), 2.into());
    let christoffel = |m: usize, u: &[Rational], w: &[Rational]| -> Rational {
        let mut acc = zero();
        for i in 0..6 {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..6 {
                if w[j].is_zero() {
                    continue;
                }
                let mut gamma = zero();
                for l in 0..6 {
                    let gml = ginv.get(m, l);
                    if gml.is_zero() {
                        continue;
                    }
                    gamma += gml * (&dg[i][l][j] + &dg[j][l][i] - &dg[l][i][j]);
                }
                acc += &u[i] * &w[j] * gamma;
            }
        }
        acc * &half
    };

    let frame: Vec<Vec<Rational>> = (0..5)
        .map(|a| {
            let mut e = unit(free[a]);
            e[k] = hd[a].clone();
            e
        })
        .collect();
    let mut nu = vec![zero(); 6];
    nu[k] = Rational::one();
    for a in 0..5 {
        nu[free[a]] = -hd[a].clone();
    }

    let slots: Vec<(usize, usize)> = (0..5).flat_map(|a| (a..5).map(move |b| (a, b))).collect();
    let second: Vec<Rational> = slots
        .iter()
        .map(|&(a, b)| {
            let mut acc = hdd[a][b].clone();
            for m in 0..6 {
                if !nu[m].is_zero() {
                    let gamma = christoffel(m, &frame[a], &frame[b]);
                    acc += if m == k { gamma } else { &nu[m] * gamma };
                }
            }
            -acc
        })
        .collect();
    let span: Vec<Vec<Rational>> = units
        .iter()
        .map(|y| {
            let q = form_of(y);
            slots
                .iter()
                .map(|&(a, b)| {
                    let mut acc = zero();
                    for i in 0..6 {
                        for j in 0..6 {
                            if !frame[a][i].is_zero() && !frame[b][j].is_zero() {
                                acc += &frame[a][i] * &frame[b][j] * &q[i][j];
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let remainder = reduce(&rref_rows(span), second);
    let member = remainder.iter().all(Zero::is_zero);
    Ok(PointMembership { point: full, member, remainder })
}

/// Reduces `v` by the rows of a reduced echelon basis.
fn reduce(basis: &[Vec<Rational>], mut v: Vec<Rational>) -> Vec<Rational> {
    for row in basis {
        let lead = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if v[lead].is_zero() {
            continue;
        }
        let c = v[lead].clone() / &row[lead];
        for (x, r) in v.iter_mut().zip(row) {
            *x -= &c * r;
        }
    }
    v
}

/// The obstruction tensor of a hypersurface: the trace-free second
/// fundamental form for `n = 2`, and `II` of `X ⌟ T_3` modulo
/// `S^2_{T_3}` (evaluated at seeded random points) for `n = 3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiReport {
    pub n: usize,
    pub vanishes: bool,
    /// `n = 2`, off the parabolic locus.
    pub trace_free: Option<FundamentalForm>,
    /// `n = 2` on the parabolic locus: cross products of `II` against `I`.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub proportionality: Vec<RationalFunction>,
    /// `n = 3`: one entry per sample point.
    pub samples: Vec<PointMembership>,
}

/// Evaluates the obstruction. For `n = 3`, `samples` points are drawn
/// with a seeded generator; points where the equation has a pole or
/// `X ⌟ T_3` degenerates are skipped.
pub fn phi_obstruction(f: &PdeFunction, samples: usize, seed: u64) -> Result<PhiReport> {
    match f.n() {
        2 => {
            let forms = fundamental_forms(&graph_form(f)?, &Metric::T2, &NormalRule::Solved)?;
            let vanishes = match &forms.trace_free {
                Some(tf) => tf.is_zero(),
                None => forms.proportionality.iter().all(RationalFunction::is_zero),
            };
            let proportionality = if forms.trace_free.is_none() { forms.proportionality } else { Vec::new() };
            Ok(PhiReport { n: 2, vanishes, trace_free: forms.trace_free, proportionality, samples: Vec::new() })
        }
        3 => {
            let points = sample_points(f, &VectorField::stretching(3), samples, seed)?;
            let vanishes = points.iter().all(|p| p.member);
            Ok(PhiReport { n: 3, vanishes, trace_free: None, proportionality: Vec::new(), samples: points })
        }
        n => Err(Error::Invalid(format!("the obstruction is implemented for n = 2 and n = 3, got {n}"))),
    }
}

/// Runs [`direct_membership_at`] at `count` seeded random points with
/// small rational coordinates.
pub fn sample_points(f: &PdeFunction, x: &VectorField, count: usize, seed: u64) -> Result<Vec<PointMembership>> {
    let (solved, _) = solve_for_jet(f).ok_or_else(|| Error::NoGraphForm("any chart coordinate".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut free: Vec<Var> = chart_vars(3).into_iter().filter(|v| *v != solved).collect();
    free.extend(f.function().vars().into_iter().filter(|v| !v.is_second_jet()));
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 50 * count + 50 {
            return Err(Error::Invalid("no admissible sample points found".into()));
        }
        let point: BTreeMap<Var, Rational> = free
            .iter()
            .map(|v| (v.clone(), Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())))
            .collect();
        match direct_membership_at(f, x, &point) {
            Ok(m) => out.push(m),
            Err(Error::Pole) | Err(Error::Invalid(_)) | Err(Error::DivisionByZero) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pde(s: &str, n: usize) -> PdeFunction {
        PdeFunction::parse(s, n).unwrap()
    }

    #[test]
    fn planar_verdicts() {
        assert!(hyperplane_test(&pde("3*(p11*p22 - p12^2) - p11 + 2*p12 + 5*p22 - 1/3", 2)).unwrap().is_section);
        assert!(!hyperplane_test(&pde("p22 - p11^2", 2)).unwrap().is_section);
        assert!(hyperplane_test(&pde("p12 - 4", 2)).unwrap().is_section);
        assert!(hyperplane_test(&pde("p22 - (p12^2 - 1)/p11", 2)).unwrap().is_section);
    }

    #[test]
    fn spatial_verdicts() {
        assert!(hyperplane_test(&pde("p11 + p11*p22*p33 + 2*p12*p23*p13 - p11*p23^2 - p22*p13^2 - p33*p12^2", 3)).unwrap().is_section);
        assert!(!hyperplane_test(&pde("p33 - p11^2", 3)).unwrap().is_section);
    }

    #[test]
    fn direct_computation_agrees() {
        let x = VectorField::stretching(3);
        let ma = pde("p11 + p11*p22*p33 + 2*p12*p23*p13 - p11*p23^2 - p22*p13^2 - p33*p12^2", 3);
        let pts = sample_points(&ma, &x, 3, 7).unwrap();
        assert!(pts.iter().all(|p| p.member));
        let other = pde("p33 - p11^2", 3);
        let pts = sample_points(&other, &x, 3, 7).unwrap();
        assert!(pts.iter().all(|p| !p.member));
    }

    #[test]
    fn obstruction() {
        assert!(phi_obstruction(&pde("p11*p22 - p12^2 + p11 + 1", 2), 0, 0).unwrap().vanishes);
        assert!(!phi_obstruction(&pde("p22 - p11^2", 2), 0, 0).unwrap().vanishes);
        assert!(phi_obstruction(&pde("p22 - 2*p11 + p12", 2), 0, 0).unwrap().vanishes);
    }
}
