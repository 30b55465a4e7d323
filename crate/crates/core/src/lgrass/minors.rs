//! All minors of a symmetric matrix by expansion along the first row,
//! reusing the minors one size smaller.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{subsets, MinorIndex};
use crate::poly::{MultiPoly, Rational};

/// Ring operations needed for determinant expansion.
pub trait MinorEntry: Clone {
    fn entry_zero() -> Self;
    fn entry_one() -> Self;
    fn entry_is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl MinorEntry for Rational {
    fn entry_zero() -> Self {
        Zero::zero()
    }
    fn entry_one() -> Self {
        One::one()
    }
    fn entry_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl MinorEntry for MultiPoly {
    fn entry_zero() -> Self {
        MultiPoly::zero()
    }
    fn entry_one() -> Self {
        MultiPoly::one()
    }
    fn entry_is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Every minor of the symmetric matrix `m`, keyed by canonical index.
pub fn minors_of<T: MinorEntry>(m: &[Vec<T>]) -> HashMap<MinorIndex, T> {
    let n = m.len();
    let mut out: HashMap<MinorIndex, T> = HashMap::new();
    out.insert(MinorIndex { rows: vec![], cols: vec![] }, T::entry_one());
    for k in 1..=n {
        let s = subsets(n, k);
        for (a, rows) in s.iter().enumerate() {
            for cols in &s[a..] {
                let r0 = rows[0];
                let rest_rows = &rows[1..];
                let mut acc = T::entry_zero();
                for (t, &c) in cols.iter().enumerate() {
                    let entry = &m[r0 - 1][c - 1];
                    if entry.entry_is_zero() {
                        continue;
                    }
                    let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let sub = &out[&MinorIndex::new(rest_rows.to_vec(), rest_cols)];
                    let term = entry.times(sub);
                    acc = if t % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
                }
                out.insert(MinorIndex { rows: rows.clone(), cols: cols.clone() }, acc);
            }
        }
    }
    out
}
