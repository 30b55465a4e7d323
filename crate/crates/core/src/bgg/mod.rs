//! The first BGG operator on the chart, `f -> (d/dt)^{r+1} f(P + t xi xi^T)`
//! at `t = 0`, and its polynomial kernel.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lgrass::{symbolic_minors, HyperplaneCoefficients};
use crate::poly::{chart_vars, covector_vars, MultiPoly, QMatrix, Rational, Var};
use crate::symbols::rank_one_taylor;

/// A form of degree `2(r+1)` in `xi` with polynomial coefficients in the
/// `p_ij`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiPolynomial {
    pub n: usize,
    pub r: u32,
    #[serde(serialize_with = "crate::poly::serde_impls::display_str")]
    pub poly: MultiPoly,
}

impl XiPolynomial {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl fmt::Display for XiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

fn factorial(k: u32) -> Rational {
    (1..=k).fold(Rational::from_integer(1.into()), |acc, i| acc * Rational::from_integer(i.into()))
}

/// The operator of order `r + 1` applied to a polynomial `f` in the `p_ij`.
pub fn bgg_apply(f: &MultiPoly, n: usize, r: u32) -> Result<XiPolynomial> {
    if r < 1 {
        return Err(Error::Invalid("the operator order r + 1 needs r >= 1".into()));
    }
    if let Some(v) = f.vars().iter().find(|v| !matches!(v, Var::SecondJet(_, j) if (*j as usize) <= n)) {
        return Err(Error::Invalid(format!("`{v}` is not a chart coordinate for n = {n}")));
    }
    let coeffs = rank_one_taylor(f, n, r + 1);
    let poly = coeffs[r as usize + 1].scale(&factorial(r + 1));
    Ok(XiPolynomial { n, r, poly })
}

/// Number of monomials of degree at most `nr` in `n(n+1)/2` variables.
pub fn monomial_count(n: usize, r: u32) -> u128 {
    let d = (n * (n + 1) / 2) as u128;
    let k = (n as u128) * (r as u128);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc * (d + i) / i;
    }
    acc
}

/// Default bound on the number of monomial columns.
pub const DEFAULT_CAP: u128 = 20_000;

/// The kernel of the operator among polynomials of degree at most `nr`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub n: usize,
    pub r: u32,
    /// Elements in reduced echelon form, leading monomials decreasing.
    pub basis: Vec<MultiPoly>,
    /// Column monomials as exponents over `chart_vars(n)`, descending grlex.
    columns: Vec<Vec<u32>>,
    /// The basis as coefficient rows over `columns`.
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize)]
struct KernelRepr<'a> {
    n: usize,
    r: u32,
    dimension: usize,
    max_degree: u32,
    degree_bound: u32,
    basis: &'a [MultiPoly],
}

impl Serialize for KernelBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelRepr {
            n: self.n,
            r: self.r,
            dimension: self.dimension(),
            max_degree: self.max_degree(),
            degree_bound: self.degree_bound(),
            basis: &self.basis,
        }
        .serialize(s)
    }
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `nr`.
    pub fn degree_bound(&self) -> u32 {
        self.n as u32 * self.r
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0)
    }

    /// Whether `f` lies in the span of the basis.
    pub fn contains(&self, f: &MultiPoly) -> bool {
        let vars = chart_vars(self.n);
        if f.vars().iter().any(|v| !vars.contains(v)) {
            return false;
        }
        let index: HashMap<&Vec<u32>, usize> = self.columns.iter().enumerate().map(|(k, c)| (c, k)).collect();
        let mut v = vec![Rational::zero(); self.columns.len()];
        for (m, c) in f.terms() {
            let exps: Vec<u32> = vars.iter().map(|x| f.exponent_of(m, x)).collect();
            match index.get(&exps) {
                Some(&k) => v[k] = c.clone(),
                None => return false,
            }
        }
        for row in &self.rows {
            let lead = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if v[lead].is_zero() {
                continue;
            }
            let c = v[lead].clone() / &row[lead];
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

/// Exponent vectors of every monomial of degree at most `max` in `d`
/// variables, in descending graded-lex order.
fn monomials_up_to(d: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == d - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(d, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for deg in (0..=max).rev() {
        rec(d, deg, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Exact basis of `{ f : deg f <= nr, D_{r+1} f = 0 }`.
///
/// The operator preserves the `Z^n` weight in which `p_ij` has weight
/// `e_i + e_j` and `xi_i` has weight `e_i`, so the matrix splits into one
/// block per weight and each block's nullspace is computed separately.
/// `cap` bounds the number of monomial columns.
pub fn kernel_basis(n: usize, r: u32, cap: u128) -> Result<KernelBasis> {
    if n < 2 || r < 1 {
        return Err(Error::Invalid(format!("need n >= 2 and r >= 1, got n = {n}, r = {r}")));
    }
    let required = monomial_count(n, r);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let vars = chart_vars(n);
    let pairs: Vec<(usize, usize)> = vars
        .iter()
        .map(|v| match v {
            Var::SecondJet(i, j) => (*i as usize, *j as usize),
            _ => unreachable!("chart variables are second jets"),
        })
        .collect();
    let columns = monomials_up_to(vars.len(), n as u32 * r);
    let weight = |exps: &[u32]| {
        let mut w = vec![0u32; n];
        for (k, &e) in exps.iter().enumerate() {
            w[pairs[k].0 - 1] += e;
            w[pairs[k].1 - 1] += e;
        }
        w
    };
    let mut blocks: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (k, c) in columns.iter().enumerate() {
        blocks.entry(weight(c)).or_default().push(k);
    }

    let mut target: Vec<Var> = vars.clone();
    target.extend(covector_vars(n));
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for cols in blocks.values() {
        let mut row_index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
        for (local, &k) in cols.iter().enumerate() {
            let f = MultiPoly::from_terms(&vars, [(columns[k].clone(), Rational::from_integer(1.into()))]);
            let image = bgg_apply(&f, n, r)?.poly;
            for (m, c) in image.terms() {
                let key: Vec<u32> = target.iter().map(|v| image.exponent_of(m, v)).collect();
                let next = row_index.len();
                let row = *row_index.entry(key).or_insert(next);
                entries.push((row, local, c.clone()));
            }
        }
        let kernel = if row_index.is_empty() {
            (0..cols.len())
                .map(|i| (0..cols.len()).map(|j| Rational::from_integer(((i == j) as i64).into())).collect())
                .collect()
        } else {
            let mut dense = vec![vec![Rational::zero(); cols.len()]; row_index.len()];
            for (row, col, c) in entries {
                dense[row][col] += c;
            }
            QMatrix::from_rows(dense).nullspace()
        };
        for v in kernel {
            let mut full = vec![Rational::zero(); columns.len()];
            for (local, x) in v.into_iter().enumerate() {
                full[cols[local]] = x;
            }
            rows.push(full);
        }
    }
    rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()));
    let basis = rows
        .iter()
        .map(|row| {
            MultiPoly::from_terms(
                &vars,
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (columns[k].clone(), x.clone())),
            )
        })
        .collect();
    Ok(KernelBasis { n, r, basis, columns, rows })
}

/// `sum_S c_S prod_{i in S} m_i` over multisets `S` of indices into the
/// minors `(1, p11, ...)` of [`crate::lgrass::minor_indices`]: the
/// restriction to the chart of a degree-`|S|` form in the Pluecker
/// coordinates.
pub fn section_polynomial(n: usize, terms: &[(Vec<usize>, Rational)]) -> Result<MultiPoly> {
    let minors = symbolic_minors(n);
    let mut acc = MultiPoly::zero();
    for (set, c) in terms {
        let mut prod = MultiPoly::constant(c.clone());
        for &i in set {
            let m = minors.get(i).ok_or_else(|| Error::Invalid(format!("no minor with index {i} for n = {n}")))?;
            prod = &prod * m;
        }
        acc = &acc + &prod;
    }
    Ok(acc)
}

/// The restriction of the `r`-th power of a hyperplane: a degree-`r`
/// section.
pub fn hyperplane_power(c: &HyperplaneCoefficients, r: u32) -> MultiPoly {
    let minors = symbolic_minors(c.n());
    let linear = c
        .coeffs()
        .iter()
        .zip(&minors)
        .fold(MultiPoly::zero(), |acc, (k, m)| &acc + &m.scale(k));
    linear.pow(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_function;

    fn poly(s: &str, n: usize) -> MultiPoly {
        parse_function(s, n).unwrap().as_polynomial().unwrap().clone()
    }

    #[test]
    fn operator_examples() {
        assert!(bgg_apply(&poly("p11*p22 - p12^2", 2), 2, 1).unwrap().is_zero());
        assert_eq!(bgg_apply(&poly("p11^2", 2), 2, 1).unwrap().to_string(), "2*xi1^4");
        assert!(bgg_apply(&poly("(p11*p22 - p12^2)^2", 2), 2, 2).unwrap().is_zero());
        assert!(bgg_apply(&poly("p11", 2), 2, 0).is_err());
    }

    #[test]
    fn planar_kernel() {
        let k = kernel_basis(2, 1, DEFAULT_CAP).unwrap();
        assert_eq!(k.dimension(), 5);
        assert_eq!(k.max_degree(), 2);
        let shown: Vec<String> = k.basis.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["p11*p22 - p12^2", "p11", "p12", "p22", "1"]);
        assert!(k.contains(&poly("3*(p11*p22 - p12^2) + p12 - 7", 2)));
        assert!(!k.contains(&poly("p11^2", 2)));
    }

    #[test]
    fn kernel_counts() {
        assert_eq!(kernel_basis(3, 1, DEFAULT_CAP).unwrap().dimension(), 14);
        assert_eq!(kernel_basis(2, 2, DEFAULT_CAP).unwrap().dimension(), 14);
    }

    #[test]
    fn cap_guard() {
        assert_eq!(monomial_count(4, 1), 1001);
        assert_eq!(kernel_basis(4, 1, 1000), Err(Error::CapExceeded { required: 1001, cap: 1000 }));
    }

    #[test]
    fn sections_lie_in_the_kernel() {
        let det = section_polynomial(2, &[(vec![4], Rational::from_integer(1.into()))]).unwrap();
        assert!(bgg_apply(&det, 2, 1).unwrap().is_zero());
        let c = HyperplaneCoefficients::new(2, [1, -2, 3, 1, 5].map(|k| Rational::from_integer(k.into())).to_vec()).unwrap();
        let sq = hyperplane_power(&c, 2);
        assert!(bgg_apply(&sq, 2, 2).unwrap().is_zero());
        assert!(kernel_basis(2, 2, DEFAULT_CAP).unwrap().contains(&sq));
    }
}
