//! Fundamental forms, normal rules and the n = 3 membership test.

mod common;

use common::{random_h, random_ma_graph, rng, small_rat};
use mage_core::conformal::{
    fundamental_forms, hyperplane_test, s2tn_dimension, s2tn_dimension_formula, sample_points, sp6_generators,
    trace_free_system, GraphForm, Metric, NormalRule, VectorField,
};
use mage_core::lgrass::{coordinate_count, hyperplane_section, HyperplaneCoefficients};
use mage_core::poly::rat;
use mage_core::symbols::PdeFunction;
use mage_core::{RationalFunction, Var};

/// The three trace-free equations exactly as printed, in the derivatives
/// `h1 = h_p11`, `h2 = h_p12`, `h11`, `h12`, `h22`.
fn printed_system(h: &RationalFunction) -> [RationalFunction; 3] {
    let (a, b) = (Var::p(1, 1), Var::p(1, 2));
    let h1 = h.partial(&a);
    let h2 = h.partial(&b);
    let h11 = h1.partial(&a);
    let h12 = h1.partial(&b);
    let h22 = h2.partial(&b);
    let k = |c: i64, f: RationalFunction| f.scale(&rat(c, 1));
    let first = &(&(&k(2, &h11 * &h1) + &(&h11 * &(&h2 * &h2))) - &k(2, &(&h1 * &h2) * &h12)) + &k(2, &(&h1 * &h1) * &h22);
    let second = &(&k(4, &h12 * &h1) - &(&h2 * &h11)) + &(&(&h2 * &h1) * &h22);
    let third = &(&(&k(2, &h1 * &h22) + &(&h22 * &(&h2 * &h2))) + &k(2, h11)) + &k(2, &h2 * &h12);
    [first, second, third]
}

#[test]
fn trace_free_system_matches_the_printed_equations() {
    let mut rng = rng(21);
    let mut checked = 0;
    while checked < 12 {
        let h = if checked % 4 == 0 { random_ma_graph(&mut rng) } else { random_h(&mut rng) };
        let Ok(ours) = trace_free_system(&h) else { continue };
        assert_eq!(ours, printed_system(&h), "h = {h}");
        checked += 1;
    }
}

/// Entries of `b` are a fixed multiple of those of `a`; `None` when the
/// zero patterns differ.
fn common_ratio(a: &[RationalFunction], b: &[RationalFunction]) -> Option<Option<RationalFunction>> {
    if a.iter().zip(b).any(|(x, y)| x.is_zero() != y.is_zero()) {
        return None;
    }
    let Some(k) = a.iter().position(|x| !x.is_zero()) else {
        return Some(None);
    };
    let r = b[k].checked_div(&a[k]).ok()?;
    a.iter().zip(b).all(|(x, y)| &(x * &r) == y).then_some(Some(r))
}

#[test]
fn zero_locus_does_not_depend_on_the_normal() {
    let mut rng = rng(22);
    for trial in 0..16 {
        let h = if trial % 2 == 0 { random_ma_graph(&mut rng) } else { random_h(&mut rng) };
        let graph = GraphForm::over_p22(h.clone()).unwrap();
        let base = fundamental_forms(&graph, &Metric::T2, &NormalRule::Solved).unwrap();
        let Some(tf) = base.trace_free else { continue };
        for v in [Var::p(1, 1), Var::p(1, 2)] {
            let Ok(other) = fundamental_forms(&graph, &Metric::T2, &NormalRule::Coordinate(v.clone())) else {
                continue;
            };
            let other_tf = other.trace_free.expect("same first form");
            let ratio = common_ratio(&tf.upper(), &other_tf.upper());
            assert!(ratio.is_some(), "h = {h}, rule {v}");
            if let Some(Some(r)) = ratio {
                assert!(!r.is_zero());
            }
            assert_eq!(tf.is_zero(), other_tf.is_zero());
            assert_eq!(other.first.upper(), base.first.upper());
        }
    }
}

#[test]
fn symmetric_square_dimensions() {
    for n in 2..=3 {
        assert_eq!(s2tn_dimension(n), s2tn_dimension_formula(n));
    }
    assert_eq!(s2tn_dimension_formula(4), 20);
}

fn fields() -> Vec<VectorField> {
    let stretching = VectorField::stretching(3);
    let shifted = [(1, 1), (2, 2), (3, 3)]
        .iter()
        .fold(stretching.clone(), |acc, &(i, j)| acc.add(&VectorField::translation(3, i, j)));
    let generators = sp6_generators();
    let quadratic = generators.iter().find(|x| x.label == "quadratic(1,1)").expect("generator");
    vec![stretching.clone(), shifted, stretching.add(quadratic)]
}

fn direct_verdict(f: &PdeFunction, x: &VectorField, seed: u64) -> bool {
    sample_points(f, x, 3, seed).unwrap().iter().all(|p| p.member)
}

#[test]
fn verdict_does_not_depend_on_the_symmetry() {
    let cases = [
        ("p33 - p11*p22 + p12^2 + 2*p13 - 1", true),
        ("p33 + 3*(p11*p23 - p12*p13) - p22", true),
        ("p33 - p11^2", false),
        ("p33 - p12*p13*p22", false),
    ];
    for (text, expected) in cases {
        let f = PdeFunction::parse(text, 3).unwrap();
        assert_eq!(hyperplane_test(&f).unwrap().is_section, expected, "{text}");
        for x in fields() {
            assert_eq!(direct_verdict(&f, &x, 5), expected, "{text} with {}", x.label);
        }
    }
}

#[test]
fn direct_test_agrees_with_divisibility_on_random_sections() {
    let mut rng = rng(23);
    let x = VectorField::stretching(3);
    for trial in 0..6 {
        let mut coeffs: Vec<_> = (0..coordinate_count(3)).map(|_| small_rat(&mut rng)).collect();
        // keep the equation solvable for p33: the determinant or the p33 slot is nonzero
        coeffs[13] = rat(1, 1);
        let section = hyperplane_section(&HyperplaneCoefficients::new(3, coeffs).unwrap()).unwrap();
        assert!(hyperplane_test(&section).unwrap().is_section);
        assert!(direct_verdict(&section, &x, trial), "{}", section.function());
    }
}
