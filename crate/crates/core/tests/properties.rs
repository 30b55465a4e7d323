//! Property tests for the algebra, parser, symbols, chart and operator.

mod common;

use std::collections::BTreeMap;

use common::{point_of, random_h, random_ma_graph};
use mage_core::bgg::{bgg_apply, kernel_basis, DEFAULT_CAP};
use mage_core::expr::{format, parse_function};
use mage_core::lgrass::{
    hyperplane_section, minors_chart, rational_inverse, HyperplaneCoefficients, LagrangianPlane,
};
use mage_core::poly::{chart_vars, gcd, rat};
use mage_core::symbols::{
    check_quasilinear_system, classify, exceptionality_at_roots, is_completely_exceptional, iterated_symbol,
    proportional_at, symbol, EquationType, PdeFunction,
};
use mage_core::{MultiPoly, QMatrix, Rational, RationalFunction, Var};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(a, b)| rat(a, b))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    small().prop_filter("nonzero", |q| *q != rat(0, 1))
}

/// Polynomials of degree <= `deg` in the n = 2 chart.
fn poly2(deg: u32, terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0..=deg, 0..=deg, 0..=deg, small()), 0..=terms).prop_map(move |ts| {
        let vars = chart_vars(2);
        ts.into_iter().fold(MultiPoly::zero(), |acc, (a, b, c, q)| {
            let (a, b) = (a.min(deg), b.min(deg - a.min(deg)));
            let c = c.min(deg - a - b);
            &acc + &MultiPoly::from_terms(&vars, [(vec![a, b, c], q)])
        })
    })
}

/// Polynomials of degree <= `deg` in the n = 3 chart.
fn poly3(deg: u32, terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, 6), small()), 0..=terms).prop_map(move |ts| {
        let vars = chart_vars(3);
        ts.into_iter().fold(MultiPoly::zero(), |acc, (mut e, q)| {
            let mut left = deg;
            for x in e.iter_mut() {
                *x = (*x).min(left);
                left -= *x;
            }
            &acc + &MultiPoly::from_terms(&vars, [(e, q)])
        })
    })
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(small(), n * (n + 1) / 2).prop_map(move |v| {
        let mut p = vec![vec![rat(0, 1); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                p[i][j] = v[k].clone();
                p[j][i] = v[k].clone();
                k += 1;
            }
        }
        p
    })
}

fn rf(p: &MultiPoly) -> RationalFunction {
    RationalFunction::from_poly(p.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly2(2, 4), b in poly2(2, 4), c in poly2(2, 4)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partial_is_a_derivation(a in poly2(3, 4), b in poly2(3, 4), k in 0usize..3) {
        let v = &chart_vars(2)[k];
        let lhs = (&a * &b).partial(v);
        let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_composes(f in poly2(2, 4), g in poly2(2, 3), k in poly2(1, 3)) {
        let (x, y) = (Var::p(1, 1), Var::p(1, 2));
        let first: BTreeMap<Var, MultiPoly> = [(x.clone(), g.clone())].into_iter().collect();
        let second: BTreeMap<Var, MultiPoly> = [(y.clone(), k.clone())].into_iter().collect();
        let staged = f.substitute_poly(&first).substitute_poly(&second);
        let composed: BTreeMap<Var, MultiPoly> = [(x, g.substitute_poly(&second)), (y, k)].into_iter().collect();
        prop_assert_eq!(staged, f.substitute_poly(&composed));
    }

    #[test]
    fn gcd_finds_common_factors(a in poly2(2, 3), b in poly2(2, 3), c in poly2(2, 3)) {
        prop_assume!(!c.is_zero() && !(&a * &c).is_zero() && !(&b * &c).is_zero());
        let g = gcd(&(&a * &c), &(&b * &c));
        prop_assert!(g.div_exact(&c.monic()).is_some() || c.is_constant());
        prop_assert!((&a * &c).div_exact(&g).is_some());
        prop_assert!((&b * &c).div_exact(&g).is_some());
    }

    #[test]
    fn rational_functions_are_canonical(a in poly2(2, 3), b in poly2(2, 3), c in poly2(1, 3)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = RationalFunction::new(a.clone(), b.clone()).unwrap();
        let g = RationalFunction::new(&a * &c, &b * &c).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert!(f.denom().leading_coefficient() == rat(1, 1));
    }

    #[test]
    fn nullspace_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(small(), 5), 1..5)) {
        let m = QMatrix::from_rows(rows);
        let kernel = m.nullspace();
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0, 1)));
        }
        prop_assert_eq!(m.rank() + kernel.len(), m.ncols());
    }

    #[test]
    fn format_then_parse_is_identity(a in poly2(3, 4), b in poly2(2, 3)) {
        prop_assume!(!b.is_zero());
        let f = RationalFunction::new(a, b).unwrap();
        prop_assert_eq!(parse_function(&format(&f), 2).unwrap(), f);
    }

    #[test]
    fn iterated_symbol_matches_the_recursion(f in poly3(3, 5), use_three in any::<bool>()) {
        let (n, f) = if use_three {
            (3, f)
        } else {
            let only2: BTreeMap<Var, MultiPoly> = [(Var::p(1, 3), MultiPoly::zero()), (Var::p(2, 3), MultiPoly::zero()), (Var::p(3, 3), MultiPoly::zero())].into_iter().collect();
            (2, f.substitute_poly(&only2))
        };
        let pde = PdeFunction::from_poly(n, f).unwrap();
        let direct = iterated_symbol(&pde, 2).unwrap().to_function();
        let mut recursion = RationalFunction::zero();
        for (i, j) in mage_core::poly::chart_pairs(n) {
            let inner = symbol(&PdeFunction::new(n, pde.partial(i, j)).unwrap()).to_function();
            let xx = MultiPoly::var(Var::xi(i)) * MultiPoly::var(Var::xi(j));
            recursion = &recursion + &(&inner * &rf(&xx));
        }
        prop_assert_eq!(direct, recursion);
    }

    #[test]
    fn iterated_symbols_are_homogeneous(f in poly3(4, 5), k in 1u32..4) {
        let pde = PdeFunction::from_poly(3, f).unwrap();
        let s = iterated_symbol(&pde, k).unwrap();
        for e in s.coefficients().keys() {
            prop_assert_eq!(e.iter().sum::<u32>(), 2 * k);
        }
    }

    #[test]
    fn verdict_is_invariant_under_scaling(h in poly2(3, 4), a in nonzero(), c in nonzero(), kind in 0usize..3) {
        // F = a p22 - h(p11, p12), times a multiplier without real zeros
        let no22: BTreeMap<Var, MultiPoly> = [(Var::p(2, 2), MultiPoly::zero())].into_iter().collect();
        let f = &MultiPoly::var(Var::p(2, 2)).scale(&a) - &h.substitute_poly(&no22);
        let pde = PdeFunction::from_poly(2, f.clone()).unwrap();
        let p = |i, j| MultiPoly::var(Var::p(i, j));
        let g = match kind {
            0 => MultiPoly::constant(c),
            1 => &MultiPoly::one() + &p(1, 1).pow(2),
            _ => &(&MultiPoly::from_int(2) + &p(1, 2).pow(2)) + &(&p(1, 1) * &p(1, 2)),
        };
        let scaled = PdeFunction::from_poly(2, &g * &f).unwrap();
        let a = is_completely_exceptional(&pde).unwrap().on_shell_proportional;
        let b = is_completely_exceptional(&scaled).unwrap().on_shell_proportional;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sections_pair_with_minors(c in prop::collection::vec(small(), 14), p in symmetric(3)) {
        let coeffs = HyperplaneCoefficients::new(3, c).unwrap();
        prop_assume!(coeffs.canonicalize().is_ok());
        let f = hyperplane_section(&coeffs).unwrap();
        let plane = LagrangianPlane::new(p.clone()).unwrap();
        let value = f.function().eval_full(&point_of(&p)).unwrap();
        prop_assert_eq!(value, coeffs.pair(&minors_chart(&plane)));
        prop_assert_eq!(rational_inverse(&minors_chart(&plane)).unwrap(), plane);
    }

    #[test]
    fn operator_is_linear(f in poly2(3, 4), g in poly2(3, 4), a in small(), b in small()) {
        let lhs = bgg_apply(&(&f.scale(&a) + &g.scale(&b)), 2, 1).unwrap().poly;
        let rhs = &bgg_apply(&f, 2, 1).unwrap().poly.scale(&a) + &bgg_apply(&g, 2, 1).unwrap().poly.scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_commutes_with_translations(f in poly3(3, 4), q in symmetric(3)) {
        let shift: BTreeMap<Var, MultiPoly> = point_of(&q)
            .into_iter()
            .map(|(v, c)| (v.clone(), &MultiPoly::var(v) + &MultiPoly::constant(c)))
            .collect();
        let moved_first = bgg_apply(&f.substitute_poly(&shift), 3, 1).unwrap().poly;
        let moved_after = bgg_apply(&f, 3, 1).unwrap().poly.substitute_poly(&shift);
        prop_assert_eq!(moved_first, moved_after);
    }
}

/// `P -> A^T P A` as a substitution of the chart coordinates.
fn congruence(a: &[Vec<Rational>]) -> BTreeMap<Var, MultiPoly> {
    let n = a.len();
    let p = |i: usize, j: usize| MultiPoly::var(if i <= j { Var::p(i + 1, j + 1) } else { Var::p(j + 1, i + 1) });
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let mut acc = MultiPoly::zero();
            for k in 0..n {
                for l in 0..n {
                    let c = &a[k][i] * &a[l][j];
                    if c != rat(0, 1) {
                        acc = &acc + &p(k, l).scale(&c);
                    }
                }
            }
            out.insert(Var::p(i + 1, j + 1), acc);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn congruence_preserves_the_kernel(entries in prop::collection::vec(small(), 9)) {
        let a: Vec<Vec<Rational>> = entries.chunks(3).map(<[Rational]>::to_vec).collect();
        prop_assume!(QMatrix::from_rows(a.clone()).determinant() != rat(0, 1));
        let sub = congruence(&a);
        let kernel = kernel_basis(3, 1, DEFAULT_CAP).unwrap();
        for f in &kernel.basis {
            let g = f.substitute_poly(&sub);
            prop_assert!(kernel.contains(&g), "{} -> {}", f, g);
            prop_assert!(bgg_apply(&g, 3, 1).unwrap().is_zero());
        }
    }

    #[test]
    fn quasilinear_system_agrees_with_exceptionality(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let h = if seed % 2 == 0 { random_ma_graph(&mut rng) } else { random_h(&mut rng) };
        let (a, b) = check_quasilinear_system(&h);
        let f = &RationalFunction::var(Var::p(2, 2)) - &h;
        let report = is_completely_exceptional(&PdeFunction::new(2, f).unwrap()).unwrap();
        prop_assert_eq!(a.is_zero() && b.is_zero(), report.on_shell_proportional);
    }

    #[test]
    fn root_residuals_agree_with_proportionality(f in poly2(3, 5), p in symmetric(2)) {
        let pde = PdeFunction::from_poly(2, f).unwrap();
        let point = point_of(&p);
        let strictly_hyperbolic = matches!(classify(&pde, Some(&point)).map(|c| c.equation_type), Ok(EquationType::Hyperbolic));
        prop_assume!(strictly_hyperbolic);
        let roots = exceptionality_at_roots(&pde, &point);
        prop_assume!(roots.is_ok());
        prop_assert_eq!(roots.unwrap().exceptional, proportional_at(&pde, &point).unwrap());
    }
}

#[test]
fn products_of_sections_stay_in_the_kernel() {
    let k1 = kernel_basis(2, 1, DEFAULT_CAP).unwrap();
    let k2 = kernel_basis(2, 2, DEFAULT_CAP).unwrap();
    for f in &k1.basis {
        for g in &k1.basis {
            let fg = f * g;
            assert!(bgg_apply(&fg, 2, 2).unwrap().is_zero(), "{f} * {g}");
            assert!(k2.contains(&fg));
        }
    }
}

#[test]
fn planar_kernel_has_polynomial_cofactors() {
    // the n = 2 kernel consists of Monge-Ampere expressions whose second
    // symbol is a polynomial multiple of the symbol
    for f in kernel_basis(2, 1, DEFAULT_CAP).unwrap().basis.iter().filter(|f| !f.is_constant()) {
        let r = is_completely_exceptional(&PdeFunction::from_poly(2, f.clone()).unwrap()).unwrap();
        let c = r.cofactor.expect("global cofactor");
        assert!(c.coefficients().values().all(RationalFunction::is_polynomial), "{f}");
    }
}
