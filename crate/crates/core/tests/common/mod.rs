//! Shared generators and reference computations for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mage_core::poly::{chart_vars, rat};
use mage_core::{MultiPoly, Rational, RationalFunction, Var};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in `-9..=9` and denominator in `1..=4`.
pub fn small_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = small_rat(rng);
        if q != rat(0, 1) {
            return q;
        }
    }
}

/// A polynomial with up to `terms` random monomials of degree `<= deg` in `vars`.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], deg: u32, terms: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for _ in 0..terms {
        let mut left = rng.gen_range(0..=deg);
        let mut powers = Vec::new();
        for v in vars {
            if left == 0 {
                break;
            }
            let e = rng.gen_range(0..=left);
            left -= e;
            if e > 0 {
                powers.push((v.clone(), e));
            }
        }
        acc = &acc + &MultiPoly::monomial(small_rat(rng), &powers);
    }
    acc
}

/// A random symmetric rational matrix.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    let mut p = vec![vec![rat(0, 1); n]; n];
    for i in 0..n {
        for j in i..n {
            let q = small_rat(rng);
            p[i][j] = q.clone();
            p[j][i] = q;
        }
    }
    p
}

/// Binds the chart coordinates to the entries of a symmetric matrix.
pub fn point_of(p: &[Vec<Rational>]) -> BTreeMap<Var, Rational> {
    let n = p.len();
    chart_vars(n)
        .into_iter()
        .map(|v| match v {
            Var::SecondJet(i, j) => (v, p[i as usize - 1][j as usize - 1].clone()),
            _ => unreachable!(),
        })
        .collect()
}

/// A random function of `(p11, p12)`: a polynomial of degree `<= 3`,
/// divided by `1 + (linear form)` every other draw.
pub fn random_h(rng: &mut ChaCha8Rng) -> RationalFunction {
    let vars = [Var::p(1, 1), Var::p(1, 2)];
    loop {
        let num = random_poly(rng, &vars, 3, 4);
        if num.total_degree().unwrap_or(0) < 2 {
            continue;
        }
        let h = if rng.gen_bool(0.5) {
            let den = &MultiPoly::one() + &random_poly(rng, &vars, 1, 2);
            match RationalFunction::new(num, den) {
                Ok(h) => h,
                Err(_) => continue,
            }
        } else {
            RationalFunction::from_poly(num)
        };
        return h;
    }
}

/// `k0 (p11 p22 - p12^2) + k1 p11 + k2 p12 + k3 p22 + k4` in the n = 2 chart.
pub fn ma2(k: &[Rational; 5]) -> MultiPoly {
    let p = |i, j| MultiPoly::var(Var::p(i, j));
    let det = &(&p(1, 1) * &p(2, 2)) - &(&p(1, 2) * &p(1, 2));
    let mut f = det.scale(&k[0]);
    f = &f + &p(1, 1).scale(&k[1]);
    f = &f + &p(1, 2).scale(&k[2]);
    f = &f + &p(2, 2).scale(&k[3]);
    &f + &MultiPoly::constant(k[4].clone())
}

fn rf(q: Rational) -> RationalFunction {
    RationalFunction::constant(q)
}

/// Gram matrix of `T_2(v, v) = v11 v22 - v12^2` in the coordinates
/// `(p11, p12, p22)`, and its inverse.
pub fn t2_gram() -> ([[Rational; 3]; 3], [[Rational; 3]; 3]) {
    let z = || rat(0, 1);
    let g = [[z(), z(), rat(1, 2)], [z(), rat(-1, 1), z()], [rat(1, 2), z(), z()]];
    let inv = [[z(), z(), rat(2, 1)], [z(), rat(-1, 1), z()], [rat(2, 1), z(), z()]];
    (g, inv)
}

/// Reference second fundamental form of the graph `p22 = h(p11, p12)` for
/// the metric `e^{2 lambda} T_2`, divided by `e^{2 lambda}`, with the
/// normal `N = T_2^{-1}(-h_1, -h_2, 1)`. Built from the textbook
/// Christoffel symbols
/// `G^k_ij = 1/2 g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)`, where
/// `d_c g_ab = 2 lambda_c e^{2 lambda} (T_2)_ab`.
/// Returns `(II11, II12, II22)` and the normal.
pub fn reference_second_form(h: &RationalFunction, lambda: &RationalFunction) -> ([RationalFunction; 3], [RationalFunction; 3]) {
    let vars = chart_vars(2);
    let (g, inv) = t2_gram();
    let h1 = h.partial(&vars[0]);
    let h2 = h.partial(&vars[1]);
    let one = RationalFunction::one();
    let zero = RationalFunction::zero();
    let frame = [[one.clone(), zero.clone(), h1.clone()], [zero.clone(), one.clone(), h2.clone()]];
    let conormal = [-h1.clone(), -h2.clone(), one.clone()];
    let normal: [RationalFunction; 3] = std::array::from_fn(|k| {
        (0..3).fold(RationalFunction::zero(), |acc, l| &acc + &(&rf(inv[k][l].clone()) * &conormal[l]))
    });
    let dl: Vec<RationalFunction> = vars.iter().map(|v| lambda.partial(v)).collect();
    // d_c g_ab / e^{2 lambda}
    let dg = |c: usize, a: usize, b: usize| (&dl[c] * &rf(g[a][b].clone())).scale(&rat(2, 1));
    let christoffel = |k: usize, i: usize, j: usize| {
        (0..3).fold(RationalFunction::zero(), |acc, l| {
            let bracket = &(&dg(i, l, j) + &dg(j, l, i)) - &dg(l, i, j);
            &acc + &(&rf(inv[k][l].clone()) * &bracket).scale(&rat(1, 2))
        })
    };
    let gamma: Vec<Vec<Vec<RationalFunction>>> =
        (0..3).map(|k| (0..3).map(|i| (0..3).map(|j| christoffel(k, i, j)).collect()).collect()).collect();
    let second = |a: usize, b: usize| {
        // D_{e_a} e_b = e_a(e_b^k) d_k + G^k_ij e_a^i e_b^j d_k
        let mut d: Vec<RationalFunction> = (0..3)
            .map(|k| (0..2).fold(RationalFunction::zero(), |acc, c| &acc + &(&frame[a][c] * &frame[b][k].partial(&vars[c]))))
            .collect();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    d[k] = &d[k] + &(&gamma[k][i][j] * &(&frame[a][i] * &frame[b][j]));
                }
            }
        }
        let mut acc = RationalFunction::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = &acc + &(&(&d[i] * &rf(g[i][j].clone())) * &normal[j]);
            }
        }
        -acc
    };
    ([second(0, 0), second(0, 1), second(1, 1)], normal)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `h` with `p22 = h` equivalent to a random Monge-Ampere equation with
/// `k3 + k0 p11` not identically zero.
pub fn random_ma_graph(rng: &mut ChaCha8Rng) -> RationalFunction {
    loop {
        let k: [Rational; 5] = std::array::from_fn(|_| small_rat(rng));
        let slope = &MultiPoly::constant(k[3].clone()) + &MultiPoly::var(Var::p(1, 1)).scale(&k[0]);
        if slope.is_zero() {
            continue;
        }
        let rest = &ma2(&[rat(0, 1), k[1].clone(), k[2].clone(), rat(0, 1), k[4].clone()])
            - &MultiPoly::var(Var::p(1, 2)).pow(2).scale(&k[0]);
        return RationalFunction::new(-rest, slope).expect("nonzero slope");
    }
}
