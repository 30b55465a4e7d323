//! First and second fundamental forms of a graph hypersurface
//! `p_k = h(other coordinates)` in the three-dimensional chart of
//! `LGr(2,4)`, for the metric `T_2` and its conformal rescalings.

use serde::Serialize;

use super::tn_form;
use crate::error::{Error, Result};
use crate::lgrass::HyperplaneCoefficients;
use crate::poly::gcd::content_in;
use crate::poly::{chart_vars, MultiPoly, QMatrix, Rational, RationalFunction, Var};
use crate::symbols::{check_quasilinear_system, PdeFunction};

/// How the normal field is scaled. The normal is always the
/// `g`-orthogonal complement of the tangent plane; only its length
/// varies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalRule {
    /// `g(N, d/dp_k) = 1` for the solved coordinate `p_k` (for graphs
    /// over `p22` this is `g(N, d/dp22) = 1`).
    Solved,
    /// `g(N, d/dv) = 1` for the given chart coordinate.
    Coordinate(#[serde(serialize_with = "crate::poly::serde_impls::display_str")] Var),
}

/// The ambient metric: `T_2` itself or `e^{2 lambda} T_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Metric {
    T2,
    Conformal(RationalFunction),
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::T2 => f.write_str("T2"),
            Metric::Conformal(l) => write!(f, "exp(2*({l}))*T2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    First,
    Second,
    TraceFree,
}

/// A symmetric 2 x 2 form on the tangent frame of the graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalForm {
    pub kind: FormKind,
    #[serde(serialize_with = "crate::poly::serde_impls::display_matrix")]
    pub entries: Vec<Vec<RationalFunction>>,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub metric: Metric,
    pub normal_rule: NormalRule,
}

impl FundamentalForm {
    pub fn get(&self, a: usize, b: usize) -> &RationalFunction {
        &self.entries[a][b]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RationalFunction::is_zero)
    }

    /// The three independent entries `(11, 12, 22)`.
    pub fn upper(&self) -> [RationalFunction; 3] {
        [self.entries[0][0].clone(), self.entries[0][1].clone(), self.entries[1][1].clone()]
    }

    pub fn determinant(&self) -> RationalFunction {
        &(&self.entries[0][0] * &self.entries[1][1]) - &(&self.entries[0][1] * &self.entries[1][0])
    }
}

/// A hypersurface of the chart written as `solved = h(free)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphForm {
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub solved: Var,
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub free: Vec<Var>,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub h: RationalFunction,
}

impl GraphForm {
    /// `p22 = h(p11, p12)`.
    pub fn over_p22(h: RationalFunction) -> Result<Self> {
        if h.contains_var(&Var::p(2, 2)) {
            return Err(Error::Invalid("h must not depend on p22".into()));
        }
        Ok(GraphForm { solved: Var::p(2, 2), free: vec![Var::p(1, 1), Var::p(1, 2)], h })
    }
}

/// Writes `F = 0` (n = 2) as a graph, solving for `p22`, then `p11`,
/// then `p12`: the first coordinate in which the numerator of `F`, with
/// its factors free of that coordinate removed, is affine.
pub fn graph_form(f: &PdeFunction) -> Result<GraphForm> {
    if f.n() != 2 {
        return Err(Error::Invalid("graph forms are implemented for n = 2".into()));
    }
    let num = f.function().numer();
    for v in [Var::p(2, 2), Var::p(1, 1), Var::p(1, 2)] {
        if num.degree_in(&v) == 0 {
            continue;
        }
        // factors free of v are not part of the graph
        let content = content_in(num, &v);
        let prim = if content.is_constant() { num.clone() } else { num.div_exact(&content).expect("content divides") };
        let c = prim.coefficients_in(&v);
        if c.keys().any(|&e| e > 1) || !c.contains_key(&1) {
            continue;
        }
        let b = c.get(&0).cloned().unwrap_or_else(MultiPoly::zero);
        let h = RationalFunction::new(-b, c[&1].clone())?;
        let free = chart_vars(2).into_iter().filter(|x| *x != v).collect();
        return Ok(GraphForm { solved: v, free, h });
    }
    Err(Error::NoGraphForm("any of p22, p11, p12".into()))
}

/// All forms of a graph for one metric and normal rule. Forms for a
/// conformal metric `e^{2 lambda} T_2` are reported divided by
/// `e^{2 lambda}`, so that every entry stays rational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub graph: GraphForm,
    pub first: FundamentalForm,
    pub second: FundamentalForm,
    /// `None` on the locus `det I = 0`, where the trace-free part is undefined.
    pub trace_free: Option<FundamentalForm>,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub det_first: RationalFunction,
    #[serde(serialize_with = "option_display")]
    pub mean_curvature: Option<RationalFunction>,
    /// Components of the normal field in `(p11, p12, p22)`.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub normal: Vec<RationalFunction>,
    /// `II` versus `I` cross products; all zero iff `II` is proportional to `I`.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub proportionality: Vec<RationalFunction>,
}

fn option_display<S: serde::Serializer>(v: &Option<RationalFunction>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

type Vector = Vec<RationalFunction>;

fn gram() -> (Vec<Vec<RationalFunction>>, Vec<Vec<RationalFunction>>) {
    let g = tn_form(2).and_then(|t| t.bilinear_matrix()).expect("T_2 exists");
    let inv = g.inverse().expect("T_2 is nondegenerate");
    let lift = |m: &QMatrix| -> Vec<Vec<RationalFunction>> {
        m.rows().iter().map(|r| r.iter().cloned().map(RationalFunction::constant).collect()).collect()
    };
    (lift(&g), lift(&inv))
}

fn pair(g: &[Vec<RationalFunction>], u: &[RationalFunction], w: &[RationalFunction]) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for i in 0..u.len() {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..w.len() {
            if !g[i][j].is_zero() && !w[j].is_zero() {
                acc = &acc + &(&(&u[i] * &g[i][j]) * &w[j]);
            }
        }
    }
    acc
}

fn mat_vec(m: &[Vec<RationalFunction>], v: &[RationalFunction]) -> Vector {
    m.iter()
        .map(|row| row.iter().zip(v).fold(RationalFunction::zero(), |acc, (a, b)| &acc + &(a * b)))
        .collect()
}

fn dot(a: &[RationalFunction], b: &[RationalFunction]) -> RationalFunction {
    a.iter().zip(b).fold(RationalFunction::zero(), |acc, (x, y)| &acc + &(x * y))
}

fn position(v: &Var) -> usize {
    chart_vars(2).iter().position(|x| x == v).expect("a chart coordinate of n = 2")
}

/// First, second and trace-free second fundamental forms of the graph.
///
/// The tangent frame is `e_a = d/d(free_a) + h_a d/d(solved)` and the
/// second form is `II(e_a, e_b) = -g(D_{e_a} e_b, N)` with the Levi-Civita
/// connection `D` of the chosen metric. For `e^{2 lambda} T_2` the
/// connection is the flat one plus
/// `beta(X, Y) = X(lambda) Y + Y(lambda) X - g(X, Y) grad lambda`.
pub fn fundamental_forms(graph: &GraphForm, metric: &Metric, rule: &NormalRule) -> Result<FundamentalForms> {
    let (g, ginv) = gram();
    let vars = chart_vars(2);
    let k = position(&graph.solved);
    let free: Vec<usize> = graph.free.iter().map(position).collect();
    let h = &graph.h;
    let dh: Vec<RationalFunction> = graph.free.iter().map(|v| h.partial(v)).collect();

    let unit = |i: usize| -> Vector {
        (0..3).map(|j| if i == j { RationalFunction::one() } else { RationalFunction::zero() }).collect()
    };
    let frame: Vec<Vector> = (0..2)
        .map(|a| {
            let mut e = unit(free[a]);
            e[k] = dh[a].clone();
            e
        })
        .collect();
    // conormal: nu(e_a) = 0, nu(d/d solved) = 1
    let mut nu = vec![RationalFunction::zero(); 3];
    nu[k] = RationalFunction::one();
    for a in 0..2 {
        nu[free[a]] = -&dh[a];
    }
    let scale = match rule {
        NormalRule::Solved => RationalFunction::one(),
        NormalRule::Coordinate(v) => {
            let c = &nu[position(v)];
            c.recip().map_err(|_| Error::Invalid(format!("the normal is g-orthogonal to d/d{v} here")))?
        }
    };
    let normal: Vector = mat_vec(&ginv, &nu).iter().map(|x| x * &scale).collect();

    let first: Vec<Vec<RationalFunction>> =
        (0..2).map(|a| (0..2).map(|b| pair(&g, &frame[a], &frame[b])).collect()).collect();

    let grad_lambda: Option<(Vector, Vector)> = match metric {
        Metric::T2 => None,
        Metric::Conformal(l) => {
            let dl: Vector = vars.iter().map(|v| l.partial(v)).collect();
            let sharp = mat_vec(&ginv, &dl);
            Some((dl, sharp))
        }
    };

    let mut second = vec![vec![RationalFunction::zero(); 2]; 2];
    for a in 0..2 {
        for b in a..2 {
            // D_{e_a} e_b in the flat chart
            let mut acc = vec![RationalFunction::zero(); 3];
            acc[k] = dh[b].partial(&graph.free[a]);
            if let Some((dl, sharp)) = &grad_lambda {
                let xa = dot(dl, &frame[a]);
                let xb = dot(dl, &frame[b]);
                let gab = &first[a][b];
                for i in 0..3 {
                    let beta = &(&(&xa * &frame[b][i]) + &(&xb * &frame[a][i])) - &(gab * &sharp[i]);
                    acc[i] = &acc[i] + &beta;
                }
            }
            let value = -pair(&g, &acc, &normal);
            second[a][b] = value.clone();
            second[b][a] = value;
        }
    }

    let det_first = &(&first[0][0] * &first[1][1]) - &(&first[0][1] * &first[1][0]);
    let (trace_free, mean_curvature) = if det_first.is_zero() {
        (None, None)
    } else {
        // H = I^{ab} II_ab with I^{-1} = adj(I) / det I
        let adj_trace = &(&(&first[1][1] * &second[0][0]) - &(&first[0][1] * &second[0][1]).scale(&Rational::from_integer(2.into())))
            + &(&first[0][0] * &second[1][1]);
        let mean = adj_trace.checked_div(&det_first)?;
        let half = mean.scale(&Rational::new(1.into(), 2.into()));
        let tf = (0..2).map(|a| (0..2).map(|b| &second[a][b] - &(&half * &first[a][b])).collect()).collect();
        (Some(tf), Some(mean))
    };

    let wrap = |kind, entries| FundamentalForm { kind, entries, metric: metric.clone(), normal_rule: rule.clone() };
    let first = wrap(FormKind::First, first);
    let second = wrap(FormKind::Second, second);
    let proportionality = proportionality_residuals(&first, &second);
    Ok(FundamentalForms {
        graph: graph.clone(),
        trace_free: trace_free.map(|e| wrap(FormKind::TraceFree, e)),
        first,
        second,
        det_first,
        mean_curvature,
        normal,
        proportionality,
    })
}

/// The 2 x 2 minors of the matrix with rows `(II11, II12, II22)` and
/// `(I11, I12, I22)`.
pub fn proportionality_residuals(first: &FundamentalForm, second: &FundamentalForm) -> Vec<RationalFunction> {
    let s = second.upper();
    let f = first.upper();
    let minor = |i: usize, j: usize| &(&s[i] * &f[j]) - &(&s[j] * &f[i]);
    vec![minor(0, 1), minor(0, 2), minor(1, 2)]
}

/// For `p22 = h(p11, p12)` and `T_2` with the default normal: the three
/// entries `(11, 12, 22)` of `4 det(I) II^0`, the polynomial system in the
/// derivatives of `h` whose vanishing is `II^0 = 0` off the parabolic locus.
pub fn trace_free_system(h: &RationalFunction) -> Result<[RationalFunction; 3]> {
    let forms = fundamental_forms(&GraphForm::over_p22(h.clone())?, &Metric::T2, &NormalRule::Solved)?;
    let tf = forms.trace_free.ok_or(Error::DegenerateFirstForm)?;
    let c = forms.det_first.scale(&Rational::from_integer(4.into()));
    let [a, b, d] = tf.upper();
    Ok([&a * &c, &b * &c, &d * &c])
}

/// The 3 x 2 matrix expressing [`trace_free_system`] as combinations of
/// the two residuals of [`crate::symbols::check_quasilinear_system`]:
/// rows `(2 h1 + h2^2, -h1 h2)`, `(-h2, 2 h1)`, `(2, h2)`, with `h1`, `h2`
/// the derivatives in `p11`, `p12`.
pub fn combination_matrix(h: &RationalFunction) -> [[RationalFunction; 2]; 3] {
    let h1 = h.partial(&Var::p(1, 1));
    let h2 = h.partial(&Var::p(1, 2));
    let two = |x: &RationalFunction| x.scale(&Rational::from_integer(2.into()));
    [
        [&two(&h1) + &(&h2 * &h2), -(&h1 * &h2)],
        [-h2.clone(), two(&h1)],
        [RationalFunction::from_int(2), h2],
    ]
}

/// The three 2 x 2 minors of [`combination_matrix`] (rows 12, 13, 23).
/// The matrix has rank two exactly where one of them is nonzero.
pub fn combination_minors(h: &RationalFunction) -> [RationalFunction; 3] {
    let m = combination_matrix(h);
    let minor = |i: usize, j: usize| &(&m[i][0] * &m[j][1]) - &(&m[j][0] * &m[i][1]);
    [minor(0, 1), minor(0, 2), minor(1, 2)]
}

/// The two-equation system for `p22 = h(p11, p12)` next to its
/// three-equation trace-free counterpart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemReport {
    /// `(h_11,11 + h_11 h_12,12, 2 h_11,12 + h_12 h_12,12)`.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub residuals: Vec<RationalFunction>,
    pub vanishes: bool,
    /// [`trace_free_system`]; absent on the parabolic locus.
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub trace_free_system: Vec<RationalFunction>,
    #[serde(serialize_with = "crate::poly::serde_impls::display_matrix")]
    pub combination: Vec<Vec<RationalFunction>>,
    #[serde(serialize_with = "crate::poly::serde_impls::display_seq")]
    pub combination_minors: Vec<RationalFunction>,
}

pub fn check_system(h: &RationalFunction) -> Result<SystemReport> {
    let (a, b) = check_quasilinear_system(h);
    let trace_free = match trace_free_system(h) {
        Ok(t) => t.to_vec(),
        Err(Error::DegenerateFirstForm) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(SystemReport {
        vanishes: a.is_zero() && b.is_zero(),
        residuals: vec![a, b],
        trace_free_system: trace_free,
        combination: combination_matrix(h).iter().map(|r| r.to_vec()).collect(),
        combination_minors: combination_minors(h).to_vec(),
    })
}

/// Both sides of `det I = -Delta / (4 (k3 + k0 p11)^2)` for the
/// Monge-Ampere equation `k0 (p11 p22 - p12^2) + k1 p11 + k2 p12 + k3 p22 + k4 = 0`
/// with `Delta = k2^2 - 4 k1 k3 + 4 k0 k4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetIReport {
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub det_first: RationalFunction,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub expected: RationalFunction,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub delta: RationalFunction,
    pub holds: bool,
}

/// [`DetIReport`] for coefficients `k = (k0, k1, k2, k3, k4)`, which may
/// be numbers or symbolic parameters.
pub fn det_i_discriminant(k: &[RationalFunction; 5]) -> Result<DetIReport> {
    let (p11, p12) = (RationalFunction::var(Var::p(1, 1)), RationalFunction::var(Var::p(1, 2)));
    let slope = &k[3] + &(&k[0] * &p11);
    if slope.is_zero() {
        return Err(Error::NoGraphForm("p22".into()));
    }
    let rest = &(&(&(&k[1] * &p11) + &(&k[2] * &p12)) + &k[4]) - &(&k[0] * &(&p12 * &p12));
    let h = (-rest).checked_div(&slope)?;
    let forms = fundamental_forms(&GraphForm::over_p22(h)?, &Metric::T2, &NormalRule::Solved)?;
    let four = Rational::from_integer(4.into());
    let delta = &(&(&k[2] * &k[2]) - &(&k[1] * &k[3]).scale(&four)) + &(&k[0] * &k[4]).scale(&four);
    let expected = (-delta.clone()).checked_div(&(&slope * &slope).scale(&four))?;
    Ok(DetIReport { holds: forms.det_first == expected, det_first: forms.det_first, expected, delta })
}

/// [`det_i_discriminant`] with free parameters `k0, ..., k4`.
pub fn det_i_symbolic() -> Result<DetIReport> {
    let k = [0, 1, 2, 3, 4].map(|i| RationalFunction::var(Var::param(format!("k{i}"))));
    det_i_discriminant(&k)
}

/// [`det_i_discriminant`] for hyperplane coefficients on the minors
/// `(1, p11, p12, p22, det)`.
pub fn det_i_for(c: &HyperplaneCoefficients) -> Result<DetIReport> {
    if c.n() != 2 {
        return Err(Error::Invalid("the det I identity is stated for n = 2".into()));
    }
    let w: Vec<RationalFunction> = c.coeffs().iter().cloned().map(RationalFunction::constant).collect();
    det_i_discriminant(&[w[4].clone(), w[1].clone(), w[2].clone(), w[3].clone(), w[0].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_function;
    use crate::poly::int;

    fn rf(s: &str) -> RationalFunction {
        parse_function(s, 2).unwrap()
    }

    fn forms(h: &str) -> FundamentalForms {
        fundamental_forms(&GraphForm::over_p22(rf(h)).unwrap(), &Metric::T2, &NormalRule::Solved).unwrap()
    }

    #[test]
    fn first_form_of_a_graph() {
        let f = forms("p11^2 + 3*p12");
        assert_eq!(f.first.upper().map(|x| x.to_string()), ["2*p11", "3/2", "-1"]);
        assert_eq!(f.det_first.to_string(), "-2*p11 - 9/4");
        assert_eq!(f.normal.iter().map(ToString::to_string).collect::<Vec<_>>(), ["2", "3", "-4*p11"]);
    }

    #[test]
    fn flat_graph_has_no_second_form() {
        assert!(forms("2*p11 - p12 + 7").second.is_zero());
    }

    #[test]
    fn hyperplane_graph_is_umbilic() {
        let f = forms("(p12^2 - 1)/p11");
        assert!(f.trace_free.unwrap().is_zero());
        assert!(f.proportionality.iter().all(RationalFunction::is_zero));
    }

    #[test]
    fn quadratic_graph_is_not() {
        let f = forms("p11^2");
        assert!(!f.trace_free.unwrap().is_zero());
        assert!(f.proportionality.iter().any(|r| !r.is_zero()));
        assert_eq!(f.second.upper().map(|x| x.to_string()), ["-2", "0", "0"]);
    }

    #[test]
    fn graphs_over_other_coordinates() {
        let g = graph_form(&PdeFunction::parse("p11 - p12^2", 2).unwrap()).unwrap();
        assert_eq!(g.solved, Var::p(1, 1));
        assert_eq!(g.h.to_string(), "p12^2");
        let g = graph_form(&PdeFunction::parse("p12 + 3", 2).unwrap()).unwrap();
        assert_eq!(g.solved, Var::p(1, 2));
        assert!(matches!(graph_form(&PdeFunction::parse("p12^2 + p11^2 + p22^2", 2).unwrap()), Err(Error::NoGraphForm(_))));
    }

    #[test]
    fn parabolic_graph_has_no_trace_free_part() {
        // 4 h1 + h2^2 = 0
        let f = forms("2*p12 - p11");
        assert!(f.det_first.is_zero());
        assert!(f.trace_free.is_none());
        assert!(matches!(trace_free_system(&rf("2*p12 - p11")), Err(Error::DegenerateFirstForm)));
    }

    #[test]
    fn det_i_examples() {
        let r = det_i_symbolic().unwrap();
        assert!(r.holds);
        assert_eq!(r.delta.to_string(), "4*k0*k4 - 4*k1*k3 + k2^2");

        let k = |v: [i64; 5]| v.map(RationalFunction::from_int);
        let r = det_i_discriminant(&k([0, 1, 0, 1, 0])).unwrap();
        assert!(r.holds);
        assert_eq!(r.delta.constant_value(), Some(int(-4)));
        assert_eq!(r.det_first.constant_value(), Some(int(1)));

        let r = det_i_discriminant(&k([1, 0, 0, 0, 1])).unwrap();
        assert!(r.holds);
        let r = det_i_discriminant(&k([0, 1, 2, 1, 0])).unwrap();
        assert!(r.holds && r.det_first.is_zero());

        assert!(matches!(det_i_discriminant(&k([0, 1, 1, 0, 1])), Err(Error::NoGraphForm(_))));
    }
}
