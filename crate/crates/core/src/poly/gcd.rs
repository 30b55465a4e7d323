//! Multivariate gcd by recursive content extraction and primitive
//! pseudo-remainder sequences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::multipoly::MultiPoly;
use super::rational::Rational;
use super::var::Var;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.is_monomial() {
        return monomial_gcd(a, &b.monomial_content());
    }
    if b.is_monomial() {
        return monomial_gcd(b, &a.monomial_content());
    }
    if a.nterms() <= b.nterms() {
        if b.div_exact(a).is_some() {
            return a.monic();
        }
    } else if a.div_exact(b).is_some() {
        return b.monic();
    }
    let main = a.vars().iter().find(|v| b.contains_var(v)).cloned();
    let Some(x) = main else {
        return MultiPoly::one();
    };
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, &x);
    (&c * &g).monic()
}

fn monomial_gcd(m: &MultiPoly, other_content: &MultiPoly) -> MultiPoly {
    let (mm, _) = m.leading_term().unwrap();
    let powers: Vec<(Var, u32)> = m
        .vars()
        .iter()
        .zip(mm.exps())
        .map(|(v, &e)| {
            let f = other_content
                .leading_term()
                .map(|(om, _)| other_content.exponent_of(om, v))
                .unwrap_or(0);
            (v.clone(), e.min(f))
        })
        .collect();
    MultiPoly::monomial(num_traits::One::one(), &powers)
}

/// Gcd of the coefficients of `a` as a polynomial in `x`.
pub fn content_in(a: &MultiPoly, x: &Var) -> MultiPoly {
    let coeffs = a.coefficients_in(x);
    let mut iter = coeffs.values();
    let Some(first) = iter.next() else {
        return MultiPoly::zero();
    };
    let mut g = first.monic();
    for c in iter {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

pub fn primitive_part_in(a: &MultiPoly, x: &Var) -> MultiPoly {
    if a.is_zero() {
        return MultiPoly::zero();
    }
    let c = content_in(a, x);
    a.div_exact(&c).expect("content divides")
}

type Univariate = BTreeMap<u32, MultiPoly>;

fn degree(u: &Univariate) -> Option<u32> {
    u.keys().next_back().copied()
}

/// `a` scaled to integer coefficients with no common factor, keeping the
/// pseudo-remainder sequence from growing.
fn integer_primitive(a: &MultiPoly) -> MultiPoly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in a.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return a.clone();
    }
    let f = Rational::new(den, num.abs());
    if f.is_one() {
        a.clone()
    } else {
        a.scale(&f)
    }
}

/// `lc(b)^k * a mod b` in `x`, with `k` the number of reduction steps.
fn pseudo_remainder(a: &Univariate, b: &Univariate) -> Univariate {
    let db = degree(b).expect("nonzero divisor");
    let lcb = b[&db].clone();
    let mut r = a.clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lcr = r[&dr].clone();
        let shift = dr - db;
        let mut next: Univariate = BTreeMap::new();
        for (e, c) in &r {
            next.insert(*e, c * &lcb);
        }
        for (e, c) in b {
            let slot = next.entry(e + shift).or_default();
            *slot = &*slot - &(c * &lcr);
        }
        next.retain(|_, c| !c.is_zero());
        r = next;
    }
    r
}

/// Gcd of two polynomials primitive in `x`.
fn primitive_prs(a: MultiPoly, b: MultiPoly, x: &Var) -> MultiPoly {
    let (a, b) = (integer_primitive(&a), integer_primitive(&b));
    let (mut f, mut g) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        if g.degree_in(x) == 0 {
            // g is a nonzero polynomial free of x and primitive in x, so it is a unit.
            return MultiPoly::one();
        }
        let r = pseudo_remainder(&f.coefficients_in(x), &g.coefficients_in(x));
        if r.is_empty() {
            return g.monic();
        }
        let r = integer_primitive(&primitive_part_in(&MultiPoly::from_coefficients_in(x, &r), x));
        f = g;
        g = r;
    }
}
