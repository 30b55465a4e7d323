//! The canonical conformal structure `T_n` of the Lagrangian Grassmannian
//! (the total polarisation of the determinant), fundamental forms of
//! hypersurfaces in the chart, and the infinitesimal conformal symmetries
//! of `T_3`.

mod forms;
mod hyperplane;
mod symmetries;

pub use forms::{
    check_system, SystemReport, combination_matrix, combination_minors, det_i_discriminant, det_i_for, det_i_symbolic, fundamental_forms,
    graph_form, proportionality_residuals, trace_free_system, DetIReport, FormKind, FundamentalForm,
    FundamentalForms, GraphForm, Metric, NormalRule,
};
pub use hyperplane::{direct_membership_at, hyperplane_test, phi_obstruction, sample_points, HyperplaneVerdict, PhiReport, PointMembership};
pub use symmetries::{
    conformal_check, field_rank, printed_linear_fields, sp6_generators, ConformalCheck, VectorField,
};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lgrass::{minors_of, MinorIndex};
use crate::poly::{chart_pairs, covector_vars, MultiPoly, QMatrix, Rational, Var};
use crate::symbols::xi_monomials;

/// `T_n` stored as the degree-`n` polynomial `det(v)` in the tangent
/// coordinates `v_ij` (`i <= j`), polarised on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricNForm {
    n: usize,
    form: MultiPoly,
}

/// The symmetric matrix whose `(i,j)` and `(j,i)` entries are the chart
/// coordinate `v_ij`, for a coordinate vector in [`chart_pairs`] order.
pub fn coordinate_matrix<T: Clone + Zero>(n: usize, v: &[T]) -> Vec<Vec<T>> {
    let mut m = vec![vec![T::zero(); n]; n];
    for (k, &(i, j)) in chart_pairs(n).iter().enumerate() {
        m[i - 1][j - 1] = v[k].clone();
        m[j - 1][i - 1] = v[k].clone();
    }
    m
}

fn full_minor(n: usize) -> MinorIndex {
    let all: Vec<usize> = (1..=n).collect();
    MinorIndex::new(all.clone(), all)
}

/// Determinant of a symmetric rational matrix given by chart coordinates.
pub fn det_coords(n: usize, v: &[Rational]) -> Rational {
    let m = coordinate_matrix(n, v);
    minors_of(&m).remove(&full_minor(n)).expect("full minor present")
}

/// `T_n`. Errors for `n < 2`.
pub fn tn_form(n: usize) -> Result<SymmetricNForm> {
    if n < 2 {
        return Err(Error::Invalid(format!("T_n needs n >= 2, got {n}")));
    }
    let v: Vec<MultiPoly> = chart_pairs(n).iter().map(|&(i, j)| MultiPoly::var(Var::tangent(i, j))).collect();
    let m = coordinate_matrix(n, &v);
    let form = minors_of(&m).remove(&full_minor(n)).expect("full minor present");
    Ok(SymmetricNForm { n, form })
}

impl SymmetricNForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `T_n(v, ..., v)` as a polynomial in the tangent coordinates.
    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn dimension(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// `T_n(v, ..., v)` for a coordinate vector with polynomial entries.
    pub fn evaluate(&self, v: &[MultiPoly]) -> MultiPoly {
        let bindings = chart_pairs(self.n)
            .iter()
            .zip(v)
            .map(|(&(i, j), x)| (Var::tangent(i, j), x.clone()))
            .collect();
        self.form.substitute_poly(&bindings)
    }

    /// The fully polarised value `T_n(v_1, ..., v_n)`, normalised so that
    /// equal arguments give back `T_n(v, ..., v)`.
    pub fn polarize(&self, vs: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
        if vs.len() != self.n {
            return Err(Error::Invalid(format!("T_{} takes {} arguments, got {}", self.n, self.n, vs.len())));
        }
        let d = self.dimension();
        let mut acc = MultiPoly::zero();
        for mask in 1u32..(1 << self.n) {
            let mut sum = vec![MultiPoly::zero(); d];
            for (k, v) in vs.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    for (s, x) in sum.iter_mut().zip(v) {
                        *s = &*s + x;
                    }
                }
            }
            let value = self.evaluate(&sum);
            if (self.n as u32 - mask.count_ones()) % 2 == 0 {
                acc = &acc + &value;
            } else {
                acc = &acc - &value;
            }
        }
        let fact: u64 = (1..=self.n as u64).product();
        Ok(acc.scale(&Rational::new(1.into(), fact.into())))
    }

    /// The symmetric 2-form obtained by inserting `fixed` (`n - 2`
    /// vectors) into `T_n`, as a `d x d` matrix in the chart coordinates.
    pub fn contract(&self, fixed: &[Vec<MultiPoly>]) -> Result<Vec<Vec<MultiPoly>>> {
        if fixed.len() + 2 != self.n {
            return Err(Error::Invalid(format!("contracting T_{} needs {} vectors", self.n, self.n - 2)));
        }
        let d = self.dimension();
        let unit = |a: usize| -> Vec<MultiPoly> {
            (0..d).map(|k| if k == a { MultiPoly::one() } else { MultiPoly::zero() }).collect()
        };
        let mut q = vec![vec![MultiPoly::zero(); d]; d];
        for a in 0..d {
            for b in a..d {
                let mut args = fixed.to_vec();
                args.push(unit(a));
                args.push(unit(b));
                let value = self.polarize(&args)?;
                q[a][b] = value.clone();
                q[b][a] = value;
            }
        }
        Ok(q)
    }

    /// The Gram matrix of `T_2` in the coordinates `(v11, v12, v22)`.
    pub fn bilinear_matrix(&self) -> Result<QMatrix> {
        if self.n != 2 {
            return Err(Error::Invalid("a bilinear matrix exists only for n = 2".into()));
        }
        let q = self.contract(&[])?;
        let rows = q
            .iter()
            .map(|row| row.iter().map(|x| x.constant_value().expect("constant form")).collect())
            .collect();
        Ok(QMatrix::from_rows(rows))
    }
}

/// Result of the total-symmetrisation test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// `Q(xi xi^T, xi xi^T)`, zero exactly for members.
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub certificate: MultiPoly,
}

/// Tests whether the symmetric 2-form `q` (a `d x d` matrix in the chart
/// coordinates) lies in `S^2_{T_n}`, the kernel of total symmetrisation.
pub fn s2tn_membership(n: usize, q: &[Vec<MultiPoly>]) -> Result<Membership> {
    let pairs = chart_pairs(n);
    let d = pairs.len();
    if q.len() != d || q.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid(format!("expected a {d} x {d} matrix")));
    }
    let xi = covector_vars(n);
    let nu: Vec<MultiPoly> = pairs.iter().map(|&(i, j)| &MultiPoly::var(xi[i - 1].clone()) * &MultiPoly::var(xi[j - 1].clone())).collect();
    let mut quartic = MultiPoly::zero();
    for a in 0..d {
        for b in 0..d {
            if !q[a][b].is_zero() {
                quartic = &quartic + &(&q[a][b] * &(&nu[a] * &nu[b]));
            }
        }
    }
    Ok(Membership { member: quartic.is_zero(), certificate: quartic })
}

/// `dim S^2_{T_n}`, computed as the nullity of total symmetrisation on
/// symmetric 2-forms over the `n(n+1)/2` chart coordinates.
pub fn s2tn_dimension(n: usize) -> usize {
    let pairs = chart_pairs(n);
    let d = pairs.len();
    let quartics = xi_monomials(n, 4);
    let index: std::collections::HashMap<Vec<u32>, usize> =
        quartics.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
    let exps = |a: usize| {
        let mut e = vec![0u32; n];
        e[pairs[a].0 - 1] += 1;
        e[pairs[a].1 - 1] += 1;
        e
    };
    // one column per unordered pair {a, b}
    let mut cols = Vec::new();
    for a in 0..d {
        for b in a..d {
            let m: Vec<u32> = exps(a).iter().zip(exps(b)).map(|(x, y)| x + y).collect();
            let weight = if a == b { 1 } else { 2 };
            cols.push((index[&m], weight));
        }
    }
    let mut rows = vec![vec![Rational::zero(); cols.len()]; quartics.len()];
    for (c, &(r, w)) in cols.iter().enumerate() {
        rows[r][c] = Rational::from_integer(w.into());
    }
    cols.len() - QMatrix::from_rows(rows).rank()
}

/// `n^2 (n^2 - 1) / 12`.
pub fn s2tn_dimension_formula(n: usize) -> usize {
    n * n * (n * n - 1) / 12
}
