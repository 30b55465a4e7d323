//! Proportionality of the second symbol to the first.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{iterated_symbol, symbol, xi_monomials, PdeFunction, SymbolForm};
use crate::error::{Error, Result};
use crate::poly::gcd::content_in;
use crate::poly::{bareiss, chart_vars, gcd, MultiPoly, QMatrix, Rational, RationalFunction, Var};

/// Outcome of testing whether `Smbl^2(F) = Smbl(F) * C` for a quadratic
/// form `C`, both identically and on the equation `F = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalityReport {
    pub globally_proportional: bool,
    pub on_shell_proportional: bool,
    /// The second-jet variable eliminated on the equation, if one was found.
    pub on_shell_variable: Option<Var>,
    /// Cofactor of the identity, when it holds globally.
    pub cofactor: Option<SymbolForm>,
    /// Cofactor after restriction to the equation.
    pub on_shell_cofactor: Option<SymbolForm>,
    /// Obstructions on the equation; all zero exactly when on-shell proportional.
    pub residuals: Vec<RationalFunction>,
    /// Obstructions to the global identity.
    pub global_residuals: Vec<RationalFunction>,
}

#[derive(Serialize)]
struct ReportRepr {
    globally_proportional: bool,
    on_shell_proportional: bool,
    on_shell_variable: Option<String>,
    cofactor: Option<String>,
    on_shell_cofactor: Option<String>,
    residuals: Vec<String>,
    global_residuals: Vec<String>,
}

impl Serialize for ExceptionalityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportRepr {
            globally_proportional: self.globally_proportional,
            on_shell_proportional: self.on_shell_proportional,
            on_shell_variable: self.on_shell_variable.as_ref().map(Var::to_string),
            cofactor: self.cofactor.as_ref().map(SymbolForm::to_string),
            on_shell_cofactor: self.on_shell_cofactor.as_ref().map(SymbolForm::to_string),
            residuals: self.residuals.iter().map(ToString::to_string).collect(),
            global_residuals: self.global_residuals.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).monic()
}

/// Solves `t = s * c` for a form `c`, coefficient by coefficient in `xi`,
/// over the field of rational functions. Returns the cofactor when the
/// system is consistent, and otherwise the nonzero residues left in the
/// right-hand side after fraction-free elimination.
pub(crate) fn solve_cofactor(s: &SymbolForm, t: &SymbolForm) -> (Option<SymbolForm>, Vec<RationalFunction>) {
    divide_forms(s, t).unwrap_or_else(|| eliminate(s, t))
}

/// `(sum c_e xi^e) * l` as one polynomial, where `l` clears every denominator.
fn cleared(f: &SymbolForm) -> (MultiPoly, MultiPoly) {
    let xis: Vec<Var> = (1..=f.n()).map(Var::xi).collect();
    let l = f.coefficients().values().fold(MultiPoly::one(), |acc, c| lcm(&acc, c.denom()));
    let mut acc = MultiPoly::zero();
    for (e, c) in f.coefficients() {
        let k = c.numer() * &l.div_exact(c.denom()).expect("lcm is a multiple");
        acc = &acc + &(&k * &MultiPoly::power_product(&xis, e));
    }
    (acc, l)
}

/// Division of `t` by the quadratic form `s` in one `xi_i` whose square
/// has a nonzero coefficient in `s`. That coefficient is free of the
/// `xi`, so the pseudo-remainder vanishes exactly when `s` divides `t`
/// over the rational functions. `None` when every `xi_i^2` coefficient is
/// zero.
fn divide_forms(s: &SymbolForm, t: &SymbolForm) -> Option<(Option<SymbolForm>, Vec<RationalFunction>)> {
    let n = s.n();
    if s.degree() != 2 {
        return None;
    }
    let xis: Vec<Var> = (1..=n).map(Var::xi).collect();
    let square = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 2;
        s.coefficient(&e)
    };
    let i = (0..n).filter(|&i| !square(i).is_zero()).min_by_key(|&i| square(i).numer().nterms())?;
    let (sp, ls) = cleared(s);
    let (tp, lt) = cleared(t);
    let x = &xis[i];
    let sc = sp.coefficients_in(x);
    let lead = sc[&2].clone();
    let mut r = tp.coefficients_in(x);
    let mut q: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    let mut steps = 0;
    while let Some((&d, c)) = r.iter().next_back() {
        if d < 2 {
            break;
        }
        let c = c.clone();
        for v in q.values_mut() {
            *v = &*v * &lead;
        }
        let slot = q.entry(d - 2).or_insert_with(MultiPoly::zero);
        *slot = &*slot + &c;
        for v in r.values_mut() {
            *v = &*v * &lead;
        }
        for (e, sv) in &sc {
            let slot = r.entry(e + d - 2).or_insert_with(MultiPoly::zero);
            *slot = &*slot - &(&c * sv);
        }
        r.retain(|_, v| !v.is_zero());
        steps += 1;
    }
    if !r.is_empty() {
        let rem = MultiPoly::from_coefficients_in(x, &r);
        let residuals = rem.split_by(&xis).into_values().map(|c| RationalFunction::from_poly(c.monic())).collect();
        return Some((None, residuals));
    }
    let quotient = MultiPoly::from_coefficients_in(x, &q);
    let den = &lead.pow(steps) * &lt;
    let mut coeffs = BTreeMap::new();
    for (e, c) in quotient.split_by(&xis) {
        coeffs.insert(e, RationalFunction::new(&c * &ls, den.clone()).expect("nonzero denominator"));
    }
    Some((Some(SymbolForm::from_coefficients(n, t.degree() - 2, coeffs)), Vec::new()))
}

/// The same question as a linear system for the cofactor coefficients,
/// solved by fraction-free elimination.
fn eliminate(s: &SymbolForm, t: &SymbolForm) -> (Option<SymbolForm>, Vec<RationalFunction>) {
    let n = s.n();
    assert!(t.degree() >= s.degree());
    let cdeg = t.degree() - s.degree();
    let unknowns = xi_monomials(n, cdeg);
    let nu = unknowns.len();
    let mut rows: Vec<Vec<MultiPoly>> = Vec::new();
    for big in xi_monomials(n, t.degree()) {
        let mut entries: Vec<RationalFunction> = unknowns
            .iter()
            .map(|m| {
                if m.iter().zip(&big).all(|(a, b)| a <= b) {
                    let rest: Vec<u32> = big.iter().zip(m).map(|(b, a)| b - a).collect();
                    s.coefficient(&rest)
                } else {
                    RationalFunction::zero()
                }
            })
            .collect();
        entries.push(t.coefficient(&big));
        if entries.iter().all(RationalFunction::is_zero) {
            continue;
        }
        let l = entries.iter().fold(MultiPoly::one(), |acc, e| lcm(&acc, e.denom()));
        rows.push(
            entries
                .iter()
                .map(|e| {
                    if e.is_zero() {
                        MultiPoly::zero()
                    } else {
                        e.numer() * &l.div_exact(e.denom()).expect("lcm is a multiple")
                    }
                })
                .collect(),
        );
    }
    if rows.is_empty() {
        return (Some(SymbolForm::zero(n, cdeg)), Vec::new());
    }
    let ech = bareiss(rows, nu);
    let rank = ech.rank();
    let residuals: Vec<RationalFunction> = ech.rows[rank..]
        .iter()
        .map(|r| &r[nu])
        .filter(|v| !v.is_zero())
        .map(|v| RationalFunction::from_poly(v.monic()))
        .collect();
    if !residuals.is_empty() {
        return (None, residuals);
    }
    let mut x = vec![RationalFunction::zero(); nu];
    for (k, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[k];
        let mut acc = RationalFunction::from_poly(row[nu].clone());
        for j in pc + 1..nu {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&RationalFunction::from_poly(row[j].clone()) * &x[j]);
            }
        }
        x[pc] = acc.checked_div(&RationalFunction::from_poly(row[pc].clone())).expect("pivot is nonzero");
    }
    let coeffs = unknowns.into_iter().zip(x).collect();
    (Some(SymbolForm::from_coefficients(n, cdeg, coeffs)), Vec::new())
}

/// Finds a second-jet variable in which the numerator of `F` is affine and
/// returns it with the value that solves `F = 0`. Tries `p_nn` first and
/// then the remaining chart variables from the last to the first. Factors
/// of the numerator free of a candidate variable are dropped first, so a
/// multiplier that does not involve it leaves the result unchanged.
pub fn solve_for_jet(f: &PdeFunction) -> Option<(Var, RationalFunction)> {
    let num = f.function().numer();
    let mut order = chart_vars(f.n());
    order.reverse();
    for v in order {
        if num.degree_in(&v) == 0 {
            continue;
        }
        let content = content_in(num, &v);
        let prim = if content.is_constant() { num.clone() } else { num.div_exact(&content).expect("content divides") };
        let c = prim.coefficients_in(&v);
        if c.keys().any(|&e| e > 1) || !c.contains_key(&1) {
            continue;
        }
        let a = &c[&1];
        let b = c.get(&0).cloned().unwrap_or_else(MultiPoly::zero);
        let value = RationalFunction::new(-b, a.clone()).expect("nonzero leading coefficient");
        return Some((v, value));
    }
    None
}

/// Tests whether the second symbol is proportional to the symbol, both as
/// an identity and on the equation.
pub fn is_completely_exceptional(f: &PdeFunction) -> Result<ExceptionalityReport> {
    let s = symbol(f);
    if s.is_zero() {
        return Err(Error::DegenerateEquation("the symbol vanishes identically".into()));
    }
    let t = iterated_symbol(f, 2)?;
    let (cofactor, global_residuals) = solve_cofactor(&s, &t);
    let globally = cofactor.is_some();
    let (var, on_shell_cofactor, residuals) = match solve_for_jet(f) {
        Some((v, value)) => {
            let mut b = BTreeMap::new();
            b.insert(v.clone(), value);
            let s_on = s.substitute(&b)?;
            let t_on = t.substitute(&b)?;
            let (c, r) = solve_cofactor(&s_on, &t_on);
            (Some(v), c, r)
        }
        None => (None, cofactor.clone(), global_residuals.clone()),
    };
    Ok(ExceptionalityReport {
        globally_proportional: globally,
        on_shell_proportional: on_shell_cofactor.is_some(),
        on_shell_variable: var,
        cofactor,
        on_shell_cofactor,
        residuals,
        global_residuals,
    })
}

/// The proportionality test with every coefficient evaluated at a point;
/// the point must bind every variable of `F`.
pub fn proportional_at(f: &PdeFunction, point: &BTreeMap<Var, Rational>) -> Result<bool> {
    let s = symbol(f).eval(point)?;
    let t = iterated_symbol(f, 2)?.eval(point)?;
    let value = |c: &RationalFunction| {
        c.constant_value()
            .ok_or_else(|| Error::Underdetermined(format!("coefficient {c} is not fixed by the point")))
    };
    let n = f.n();
    let unknowns = xi_monomials(n, 2);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for big in xi_monomials(n, 4) {
        let mut row = Vec::with_capacity(unknowns.len());
        for m in &unknowns {
            if m.iter().zip(&big).all(|(a, b)| a <= b) {
                let rest: Vec<u32> = big.iter().zip(m).map(|(b, a)| b - a).collect();
                row.push(value(&s.coefficient(&rest))?);
            } else {
                row.push(Rational::from_integer(0.into()));
            }
        }
        rows.push(row);
        rhs.push(value(&t.coefficient(&big))?);
    }
    Ok(QMatrix::from_rows(rows).solve(&rhs).is_some())
}

/// For the equation `p22 = h(p11, p12)`, the pair
/// `(h_11,11 + h_11 h_12,12, 2 h_11,12 + h_12 h_12,12)` (subscripts are
/// derivatives in `p11`, `p12`); both vanish exactly for completely
/// exceptional equations.
pub fn check_quasilinear_system(h: &RationalFunction) -> (RationalFunction, RationalFunction) {
    let (a, b) = (Var::p(1, 1), Var::p(1, 2));
    let h1 = h.partial(&a);
    let h2 = h.partial(&b);
    let h11 = h1.partial(&a);
    let h12 = h1.partial(&b);
    let h22 = h2.partial(&b);
    let first = &h11 + &(&h1 * &h22);
    let second = &h12.scale(&Rational::from_integer(2.into())) + &(&h2 * &h22);
    (first, second)
}
