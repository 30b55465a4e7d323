//! The affine chart of the Lagrangian Grassmannian by minors of a
//! symmetric matrix: Pluecker images, rank-one lines and hyperplane
//! sections.

mod minors;

pub use minors::{minors_of, MinorEntry};

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{chart_vars, format_rational, rref_rows, MultiPoly, QMatrix, Rational, RationalFunction, Var};
use crate::symbols::PdeFunction;

/// A minor position: a `k x k` submatrix given by sorted row and column
/// sets with `rows <= cols` lexicographically (minors of a symmetric
/// matrix are unchanged by swapping the two).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        if rows <= cols {
            MinorIndex { rows, cols }
        } else {
            MinorIndex { rows: cols, cols: rows }
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

impl std::fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let set = |s: &[usize]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "m({{{}}},{{{}}})", set(&self.rows), set(&self.cols))
    }
}

/// Sorted `k`-subsets of `1..=n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All chart coordinates: sizes `0..=n`, then lexicographic in
/// `(rows, cols)`. For `n = 2` this is `(1, p11, p12, p22, det)`.
pub fn minor_indices(n: usize) -> Vec<MinorIndex> {
    let mut out = Vec::new();
    for k in 0..=n {
        let s = subsets(n, k);
        for (a, r) in s.iter().enumerate() {
            for c in &s[a..] {
                out.push(MinorIndex { rows: r.clone(), cols: c.clone() });
            }
        }
    }
    out
}

/// `sum_k (C(n,k)^2 + C(n,k)) / 2`.
pub fn coordinate_count(n: usize) -> usize {
    (0..=n)
        .map(|k| {
            let c = subsets(n, k).len();
            (c * c + c) / 2
        })
        .sum()
}

/// A point of the chart: a symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianPlane {
    n: usize,
    p: Vec<Vec<Rational>>,
}

impl LagrangianPlane {
    pub fn new(p: Vec<Vec<Rational>>) -> Result<Self> {
        let n = p.len();
        if p.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if p[i][j] != p[j][i] {
                    return Err(Error::Invalid("matrix is not symmetric".into()));
                }
            }
        }
        Ok(LagrangianPlane { n, p })
    }

    pub fn zero(n: usize) -> Self {
        LagrangianPlane { n, p: vec![vec![Rational::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut l = Self::zero(n);
        for i in 0..n {
            l.p[i][i] = Rational::one();
        }
        l
    }

    /// Reads the chart coordinates `p_ij` (i <= j) from a point; missing
    /// entries are zero.
    pub fn from_point(n: usize, point: &BTreeMap<Var, Rational>) -> Self {
        let mut l = Self::zero(n);
        for i in 1..=n {
            for j in i..=n {
                if let Some(v) = point.get(&Var::p(i, j)) {
                    l.p[i - 1][j - 1] = v.clone();
                    l.p[j - 1][i - 1] = v.clone();
                }
            }
        }
        l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based entry.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.p[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.p
    }

    /// The point as chart-variable bindings.
    pub fn to_point(&self) -> BTreeMap<Var, Rational> {
        let mut out = BTreeMap::new();
        for i in 1..=self.n {
            for j in i..=self.n {
                out.insert(Var::p(i, j), self.get(i, j).clone());
            }
        }
        out
    }
}

/// Projective coordinates indexed by [`minor_indices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlueckerVector {
    n: usize,
    coords: Vec<Rational>,
}

impl PlueckerVector {
    pub fn new(n: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != coordinate_count(n) {
            return Err(Error::Invalid(format!(
                "expected {} coordinates for n = {n}, got {}",
                coordinate_count(n),
                coords.len()
            )));
        }
        Ok(PlueckerVector { n, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, index: &MinorIndex) -> Rational {
        let idx = minor_indices(self.n);
        let key = MinorIndex::new(index.rows.clone(), index.cols.clone());
        idx.iter().position(|m| *m == key).map(|k| self.coords[k].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PlueckerVector { n: self.n, coords: self.coords.iter().map(|x| x * c).collect() }
    }
}

#[derive(Serialize)]
struct CoordRepr {
    rows: Vec<usize>,
    cols: Vec<usize>,
    value: String,
}

#[derive(Serialize)]
struct PlueckerRepr {
    n: usize,
    coords: Vec<CoordRepr>,
}

impl Serialize for PlueckerVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords = minor_indices(self.n)
            .into_iter()
            .zip(&self.coords)
            .map(|(m, v)| CoordRepr { rows: m.rows, cols: m.cols, value: format_rational(v) })
            .collect();
        PlueckerRepr { n: self.n, coords }.serialize(s)
    }
}

/// All minors of `P`, with the empty minor equal to 1.
pub fn minors_chart(l: &LagrangianPlane) -> PlueckerVector {
    let values = minors_of(&l.p);
    let coords = minor_indices(l.n).iter().map(|m| values[m].clone()).collect();
    PlueckerVector { n: l.n, coords }
}

/// The minors of the symbolic matrix `(p_ij)` as polynomials.
pub fn symbolic_minors(n: usize) -> Vec<MultiPoly> {
    let m: Vec<Vec<MultiPoly>> = (1..=n)
        .map(|i| (1..=n).map(|j| MultiPoly::var(Var::p(i, j))).collect())
        .collect();
    let values = minors_of(&m);
    minor_indices(n).iter().map(|k| values[k].clone()).collect()
}

/// Recovers `P` from the size-one coordinates divided by the empty one.
pub fn rational_inverse(w: &PlueckerVector) -> Result<LagrangianPlane> {
    let w0 = &w.coords[0];
    if w0.is_zero() {
        return Err(Error::OutsideBigCell);
    }
    let n = w.n;
    let mut l = LagrangianPlane::zero(n);
    for i in 1..=n {
        for j in i..=n {
            let v = w.get(&MinorIndex::new(vec![i], vec![j])) / w0;
            l.p[i - 1][j - 1] = v.clone();
            l.p[j - 1][i - 1] = v;
        }
    }
    Ok(l)
}

/// `t -> minors(P + t xi xi^T)`, written as `base + t * direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOneLine {
    pub base: PlueckerVector,
    pub direction: PlueckerVector,
    /// Highest power of `t` among all coordinates; at most 1 for a line.
    pub max_t_degree: u32,
    /// `xi = 0`: the curve is constant.
    pub degenerate: bool,
}

impl RankOneLine {
    pub fn is_straight(&self) -> bool {
        self.max_t_degree <= 1
    }

    pub fn at(&self, t: &Rational) -> PlueckerVector {
        let coords = self.base.coords.iter().zip(&self.direction.coords).map(|(b, d)| b + d * t).collect();
        PlueckerVector { n: self.base.n, coords }
    }
}

pub fn rank_one_line(l: &LagrangianPlane, xi: &[Rational]) -> Result<RankOneLine> {
    let n = l.n;
    if xi.len() != n {
        return Err(Error::Invalid(format!("covector must have {n} components")));
    }
    let t = MultiPoly::var(Var::param("t"));
    let m: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &MultiPoly::constant(l.p[i][j].clone()) + &t.scale(&(&xi[i] * &xi[j])))
                .collect()
        })
        .collect();
    let values = minors_of(&m);
    let tv = Var::param("t");
    let mut base = Vec::new();
    let mut direction = Vec::new();
    let mut max_deg = 0;
    for k in minor_indices(n) {
        let c = values[&k].coefficients_in(&tv);
        max_deg = max_deg.max(c.keys().next_back().copied().unwrap_or(0));
        let get = |e: u32| c.get(&e).and_then(MultiPoly::constant_value).unwrap_or_else(Rational::zero);
        base.push(get(0));
        direction.push(get(1));
    }
    Ok(RankOneLine {
        base: PlueckerVector { n, coords: base },
        direction: PlueckerVector { n, coords: direction },
        max_t_degree: max_deg,
        degenerate: xi.iter().all(Zero::is_zero),
    })
}

/// Exact rank of a symmetric matrix viewed as a tangent vector.
pub fn tangent_rank(v: &QMatrix) -> usize {
    v.rank()
}

/// Basis of the linear relations `sum c_I m_I = 0` among the minors, in
/// reduced echelon form. Empty for `n <= 3`.
pub fn minor_relations(n: usize) -> Vec<Vec<Rational>> {
    let minors = symbolic_minors(n);
    let vars = chart_vars(n);
    let mut monomials: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, Rational)>> = Vec::new();
    for m in &minors {
        let mut col = Vec::new();
        for (e, c) in m.split_by(&vars) {
            let next = monomials.len();
            let row = *monomials.entry(e).or_insert(next);
            col.push((row, c.constant_value().expect("numeric coefficients")));
        }
        entries.push(col);
    }
    let mut a = QMatrix::zeros(monomials.len(), minors.len());
    for (j, col) in entries.into_iter().enumerate() {
        for (i, c) in col {
            a.set(i, j, c);
        }
    }
    a.nullspace()
}

/// Hyperplane coefficients, one per chart coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneCoefficients {
    n: usize,
    coeffs: Vec<Rational>,
}

impl HyperplaneCoefficients {
    pub fn new(n: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != coordinate_count(n) {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for n = {n}, got {}",
                coordinate_count(n),
                coeffs.len()
            )));
        }
        Ok(HyperplaneCoefficients { n, coeffs })
    }

    /// Coefficients selecting the listed minors with the given weights.
    pub fn from_minors(n: usize, terms: &[(MinorIndex, Rational)]) -> Result<Self> {
        let idx = minor_indices(n);
        let mut coeffs = vec![Rational::zero(); idx.len()];
        for (m, c) in terms {
            let key = MinorIndex::new(m.rows.clone(), m.cols.clone());
            let k = idx
                .iter()
                .position(|x| *x == key)
                .ok_or_else(|| Error::Invalid(format!("no coordinate {m} for n = {n}")))?;
            coeffs[k] += c;
        }
        Ok(HyperplaneCoefficients { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Reduced modulo the relations by clearing each relation's pivot
    /// coordinate; fails when nothing is left.
    pub fn canonicalize(&self) -> Result<Self> {
        let mut c = self.coeffs.clone();
        if self.n >= 4 {
            for rel in minor_relations(self.n) {
                let pivot = rel.iter().position(|x| !x.is_zero()).expect("nonzero relation");
                let f = c[pivot].clone();
                if !f.is_zero() {
                    for (x, r) in c.iter_mut().zip(&rel) {
                        *x -= &f * r;
                    }
                }
            }
        }
        if c.iter().all(Zero::is_zero) {
            return Err(Error::ZeroModRelations);
        }
        Ok(HyperplaneCoefficients { n: self.n, coeffs: c })
    }

    /// `<c, w>`.
    pub fn pair(&self, w: &PlueckerVector) -> Rational {
        self.coeffs.iter().zip(&w.coords).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// `F_c = sum_I c_I m_I(P)`, the generalized Monge-Ampere equation.
pub fn hyperplane_section(c: &HyperplaneCoefficients) -> Result<PdeFunction> {
    c.canonicalize()?;
    let minors = symbolic_minors(c.n);
    let f = section_function(&minors, &c.coeffs.iter().cloned().map(RationalFunction::constant).collect::<Vec<_>>());
    PdeFunction::new(c.n, f)
}

/// `sum_I c_I m_I` with coefficients that may involve parameters.
pub fn section_function(minors: &[MultiPoly], coeffs: &[RationalFunction]) -> RationalFunction {
    minors
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(RationalFunction::zero(), |acc, (m, c)| &acc + &(c * &RationalFunction::from_poly(m.clone())))
}

/// Writes `F` as `sum_I c_I m_I` with coefficients free of the `p_ij`
/// (they may involve parameters). Errors when `F` is not of that shape.
/// Coefficients of dependent minors are set to zero.
pub fn decompose_section(f: &PdeFunction) -> Result<Vec<RationalFunction>> {
    let n = f.n();
    let vars = chart_vars(n);
    let not_section = || Error::Invalid("not a linear combination of minors".into());
    if vars.iter().any(|v| f.function().denom().contains_var(v)) {
        return Err(not_section());
    }
    let minors = symbolic_minors(n);
    let den = RationalFunction::from_poly(f.function().denom().clone());
    let mut monomials: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut rhs_terms: Vec<(Vec<u32>, MultiPoly)> = Vec::new();
    for (e, c) in f.function().numer().split_by(&vars) {
        let next = monomials.len();
        monomials.entry(e.clone()).or_insert(next);
        rhs_terms.push((e, c));
    }
    let mut cols: Vec<Vec<(Vec<u32>, Rational)>> = Vec::new();
    for m in &minors {
        let mut col = Vec::new();
        for (e, c) in m.split_by(&vars) {
            let next = monomials.len();
            monomials.entry(e.clone()).or_insert(next);
            col.push((e, c.constant_value().expect("numeric coefficients")));
        }
        cols.push(col);
    }
    let nm = minors.len();
    let nrows = monomials.len();
    // Augment with an identity block so the row operations can be replayed
    // on the parameter-dependent right-hand side.
    let mut rows = vec![vec![Rational::zero(); nm + nrows]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for (e, c) in col {
            rows[monomials[e]][j] = c.clone();
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        row[nm + r] = Rational::one();
    }
    let mut rhs = vec![RationalFunction::zero(); nrows];
    for (e, c) in rhs_terms {
        rhs[monomials[&e]] = &RationalFunction::from_poly(c) / &den;
    }
    let reduced = rref_rows(rows);
    let mut sol = vec![RationalFunction::zero(); nm];
    for row in &reduced {
        let lead = row.iter().position(|x| !x.is_zero()).unwrap();
        // combination of the original right-hand side picked by this row
        let mut value = RationalFunction::zero();
        for (r, coef) in row[nm..].iter().enumerate() {
            if !coef.is_zero() && !rhs[r].is_zero() {
                value = &value + &rhs[r].scale(coef);
            }
        }
        if lead >= nm {
            if !value.is_zero() {
                return Err(not_section());
            }
            continue;
        }
        sol[lead] = value;
    }
    Ok(sol)
}
