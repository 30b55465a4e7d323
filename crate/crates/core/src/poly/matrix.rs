//! Dense exact linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::multipoly::MultiPoly;
use super::rational::Rational;

/// An integral domain with exact division, enough for fraction-free
/// elimination.
pub trait ExactDomain: Clone + PartialEq + Zero {
    fn times(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    /// `self / d`, known to be exact.
    fn exact_div(&self, d: &Self) -> Self;
    /// Smaller is a cheaper pivot.
    fn size(&self) -> usize;
}

impl ExactDomain for BigInt {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, d: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % d)));
        self / d
    }
    fn size(&self) -> usize {
        self.bits() as usize
    }
}

impl ExactDomain for MultiPoly {
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, d: &Self) -> Self {
        if d.is_one() {
            return self.clone();
        }
        self.div_exact(d).expect("fraction-free elimination divides exactly")
    }
    fn size(&self) -> usize {
        self.nterms()
    }
}

/// Result of fraction-free row reduction: the rows are permuted and
/// reduced in place and `pivots[k]` is the pivot column of row `k`.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss elimination. Only the first `pivot_limit` columns are eligible
/// as pivots, so an augmented right-hand side can ride along.
pub fn bareiss<T: ExactDomain>(mut rows: Vec<Vec<T>>, pivot_limit: usize) -> Echelon<T> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev: Option<T> = None;
    let mut k = 0;
    for c in 0..pivot_limit.min(ncols) {
        if k == nrows {
            break;
        }
        let best = (k..nrows)
            .filter(|&r| !rows[r][c].is_zero())
            .min_by_key(|&r| rows[r][c].size());
        let Some(r) = best else { continue };
        rows.swap(k, r);
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let mut v = piv.times(&row[j]);
                if !lead.is_zero() {
                    v = v.minus(&lead.times(&pivot_row[j]));
                }
                row[j] = match &prev {
                    Some(p) => v.exact_div(p),
                    None => v,
                };
            }
            row[c] = T::zero();
        }
        prev = Some(piv.clone());
        pivots.push(c);
        k += 1;
    }
    // Rows below the rank still carry the right-hand-side residues; rows
    // inside it never changed after becoming pivots.
    Echelon { rows, pivots }
}

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<Rational>>,
}

impl QMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMatrix { nrows, ncols, data: vec![vec![Rational::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        QMatrix { nrows: rows.len(), ncols, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ncols);
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    fn echelon(&self) -> Echelon<BigInt> {
        bareiss(self.integer_rows(), self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.nrows, self.ncols, "determinant of a non-square matrix");
        let mut scale = Rational::one();
        let mut rows = Vec::with_capacity(self.nrows);
        for r in &self.data {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale /= Rational::from_integer(l.clone());
            rows.push(r.iter().map(|x| x.numer() * (&l / x.denom())).collect::<Vec<BigInt>>());
        }
        // Track swaps to fix the sign.
        let n = self.nrows;
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !rows[r][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                rows.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &rows[k][k] * &rows[i][j] - &rows[i][k] * &rows[k][j];
                    rows[i][j] = v / &prev;
                }
                rows[i][k] = BigInt::zero();
            }
            prev = rows[k][k].clone();
        }
        let det = if n == 0 { BigInt::one() } else { rows[n - 1][n - 1].clone() };
        Rational::from_integer(det) * scale * Rational::from_integer(sign.into())
    }

    /// Kernel basis in reduced row echelon form: leftmost pivots, each
    /// vector's first nonzero entry equal to 1.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let ech = self.echelon();
        let n = self.ncols;
        let mut is_pivot = vec![false; n];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Rational::zero(); n];
            x[free] = Rational::one();
            for (k, &pc) in ech.pivots.iter().enumerate().rev() {
                let row = &ech.rows[k];
                let mut s = Rational::zero();
                for j in pc + 1..n {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        s += Rational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[pc] = -s / Rational::from_integer(row[pc].clone());
            }
            basis.push(x);
        }
        rref_rows(basis)
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.nrows);
        let mut rows = self.data.clone();
        for (r, v) in rows.iter_mut().zip(b) {
            r.push(v.clone());
        }
        let aug = QMatrix::from_rows(rows);
        let reduced = rref_rows(aug.data.clone());
        let mut x = vec![Rational::zero(); self.ncols];
        for r in &reduced {
            let lead = r.iter().position(|v| !v.is_zero()).unwrap();
            if lead == self.ncols {
                return None;
            }
            x[lead] = r[self.ncols].clone();
        }
        Some(x)
    }

    /// The inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.nrows;
        if n != self.ncols {
            return None;
        }
        let rows = (0..n)
            .map(|i| {
                let mut r = self.data[i].clone();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let reduced = rref_rows(rows);
        if reduced.len() < n || reduced.iter().enumerate().any(|(i, r)| r[i].is_zero()) {
            return None;
        }
        Some(QMatrix::from_rows(reduced.into_iter().map(|r| r[n..].to_vec()).collect()))
    }
}

/// Reduced row echelon form of a list of rows; zero rows are dropped.
pub fn rref_rows(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut k = 0;
    for c in 0..ncols {
        let Some(p) = (k..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(k, p);
        let inv = rows[k][c].recip();
        for v in rows[k].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[k].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == k || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        k += 1;
        if k == rows.len() {
            break;
        }
    }
    rows.truncate(k);
    rows
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(super::rational::format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    #[test]
    fn small_nullspace() {
        let m = QMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(m.nullspace(), vec![vec![int(1), int(-1), int(0)]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_is_reduced() {
        let m = QMatrix::from_i64(&[&[2, 4, 6, 8], &[1, 2, 3, 4]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // kernel of (1,2,3,4): rows e_i - (i/4) e_4
        assert_eq!(ns[0], vec![int(1), int(0), int(0), rat(-1, 4)]);
        assert_eq!(ns[2], vec![int(0), int(0), int(1), rat(-3, 4)]);
    }

    #[test]
    fn determinants() {
        let m = QMatrix::from_rows(vec![
            vec![rat(1, 2), int(0), int(1)],
            vec![int(0), int(-1), int(0)],
            vec![int(1), int(0), rat(1, 2)],
        ]);
        // cofactor expansion along the middle row: -(1/4 - 1)
        assert_eq!(m.determinant(), rat(3, 4));
        let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.determinant(), int(-1));
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = QMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[int(3), int(1)]).unwrap(), vec![int(2), int(1)]);
        let s = QMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn polynomial_elimination_residue() {
        use crate::poly::var::Var;
        let a = MultiPoly::var(Var::p(1, 1));
        let b = MultiPoly::var(Var::p(1, 2));
        // [a | 1], [b | b/a*1] is consistent only if the residue a*b - b*a vanishes
        let rows = vec![vec![a.clone(), MultiPoly::one()], vec![b.clone(), b.clone()]];
        let e = bareiss(rows, 1);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.rows[1][1], &(&a * &b) - &b);
    }
}
