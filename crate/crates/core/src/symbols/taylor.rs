//! Expansion of a polynomial along the rank-one direction
//! `p_ij -> p_ij + t*xi_i*xi_j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{MultiPoly, Rational, Var};

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(k: u32) -> Rational {
    Rational::from_integer((1..=k).fold(BigInt::one(), |a, i| a * BigInt::from(i)))
}

/// Coefficients of `t^0 .. t^order` in `g(P + t*xi*xi^T)`.
///
/// Each monomial is expanded with the binomial theorem in every `p_ij`
/// it contains, so no derivatives are taken.
pub fn rank_one_taylor(g: &MultiPoly, n: usize, order: u32) -> Vec<MultiPoly> {
    let gvars = g.vars();
    let mut registry: Vec<Var> = gvars.to_vec();
    for i in 1..=n {
        if !registry.contains(&Var::xi(i)) {
            registry.push(Var::xi(i));
        }
    }
    registry.sort();
    let pos_of = |v: &Var| registry.binary_search(v).expect("registered");
    let g_pos: Vec<usize> = gvars.iter().map(pos_of).collect();
    let xi_pos: Vec<usize> = (1..=n).map(|i| pos_of(&Var::xi(i))).collect();
    // (slot in g, slots of xi_i and xi_j) for every second-jet variable
    let jets: Vec<(usize, usize, usize)> = gvars
        .iter()
        .enumerate()
        .filter_map(|(k, v)| match v {
            Var::SecondJet(i, j) if (*j as usize) <= n => {
                Some((k, xi_pos[*i as usize - 1], xi_pos[*j as usize - 1]))
            }
            _ => None,
        })
        .collect();

    let mut buckets: Vec<BTreeMap<Vec<u32>, Rational>> = vec![BTreeMap::new(); order as usize + 1];
    for (m, c) in g.terms() {
        let mut base = vec![0u32; registry.len()];
        for (k, &e) in m.exps().iter().enumerate() {
            base[g_pos[k]] = e;
        }
        let mut choice = vec![0u32; jets.len()];
        expand(&jets, m.exps(), 0, order, &mut choice, &mut |choice, used| {
            let mut exps = base.clone();
            let mut coef = c.clone();
            for (slot, &a) in choice.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let (k, xi, xj) = jets[slot];
                let e = m.exps()[k];
                coef *= Rational::from_integer(binomial(e, a));
                exps[g_pos[k]] -= a;
                exps[xi] += a;
                exps[xj] += a;
            }
            *buckets[used as usize].entry(exps).or_insert_with(Rational::zero) += coef;
        });
    }
    buckets
        .into_iter()
        .map(|b| MultiPoly::from_terms(&registry, b))
        .collect()
}

fn expand(
    jets: &[(usize, usize, usize)],
    exps: &[u32],
    slot: usize,
    budget: u32,
    choice: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32], u32),
) {
    if slot == jets.len() {
        let used: u32 = choice.iter().sum();
        emit(choice, used);
        return;
    }
    let e = exps[jets[slot].0];
    let spent: u32 = choice[..slot].iter().sum();
    let room = budget - spent;
    for a in 0..=e.min(room) {
        choice[slot] = a;
        expand(jets, exps, slot + 1, budget, choice, emit);
    }
    choice[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn determinant_is_affine_along_rank_one_lines() {
        let p = |i, j| MultiPoly::var(Var::p(i, j));
        let det = &(&p(1, 1) * &p(2, 2)) - &p(1, 2).pow(2);
        let c = rank_one_taylor(&det, 2, 3);
        assert_eq!(c[0], det);
        assert!(c[2].is_zero() && c[3].is_zero());
        let xi = |i| MultiPoly::var(Var::xi(i));
        // first-order term: p22 xi1^2 - 2 p12 xi1 xi2 + p11 xi2^2
        let expect = &(&(&p(2, 2) * &xi(1).pow(2)) - &(&p(1, 2) * &(&xi(1) * &xi(2))).scale(&int(2)))
            + &(&p(1, 1) * &xi(2).pow(2));
        assert_eq!(c[1], expect);
    }
}
