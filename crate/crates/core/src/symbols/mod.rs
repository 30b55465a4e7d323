//! Principal symbols of second-order scalar equations and the tests for
//! complete exceptionality built on them.

mod classify;
mod exceptional;
mod surd;
mod taylor;

pub use classify::{
    classify, exceptionality_at_roots, Chart, ClassificationResult, EquationType, RootResidual, RootsReport,
};
pub use exceptional::{
    check_quasilinear_system, is_completely_exceptional, proportional_at, solve_for_jet, ExceptionalityReport,
};
pub use surd::QuadSurd;
pub use taylor::rank_one_taylor;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::parse_function;
use crate::poly::{chart_pairs, MultiPoly, Rational, RationalFunction, Var};
use taylor::factorial;

/// A second-order equation `F = 0` in `n` independent variables.
///
/// Only the `p_ij` are differentiated; `x_i`, `u`, `p_i` and parameters
/// are carried along unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeFunction {
    n: usize,
    f: RationalFunction,
}

impl PdeFunction {
    pub fn new(n: usize, f: RationalFunction) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("dimension must be at least 2, got {n}")));
        }
        for v in f.vars() {
            match &v {
                Var::SecondJet(_, j) | Var::Tangent(_, j) if *j as usize > n => {
                    return Err(Error::IndexOutOfRange { name: v.to_string(), n })
                }
                Var::Covector(i) | Var::Base(i) | Var::FirstJet(i) if *i as usize > n => {
                    return Err(Error::IndexOutOfRange { name: v.to_string(), n })
                }
                Var::Covector(_) | Var::Tangent(..) => {
                    return Err(Error::Invalid(format!("`{v}` is reserved for symbols and tangent vectors")))
                }
                _ => {}
            }
        }
        Ok(PdeFunction { n, f })
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Self::new(n, parse_function(text, n)?)
    }

    pub fn from_poly(n: usize, f: MultiPoly) -> Result<Self> {
        Self::new(n, RationalFunction::from_poly(f))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn function(&self) -> &RationalFunction {
        &self.f
    }

    /// `dF/dp_ij`.
    pub fn partial(&self, i: usize, j: usize) -> RationalFunction {
        self.f.partial(&Var::p(i, j))
    }

    pub fn symbol(&self) -> SymbolForm {
        symbol(self)
    }

    pub fn iterated_symbol(&self, k: u32) -> Result<SymbolForm> {
        iterated_symbol(self, k)
    }
}

impl fmt::Display for PdeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

/// Exponent vectors of all monomials of degree `d` in `n` variables, in
/// decreasing lexicographic order (`xi1^d` first).
pub fn xi_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            let mut e = prefix.clone();
            e.push(d);
            out.push(e);
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// A form in `xi_1..xi_n`, homogeneous of the stated degree, with
/// rational-function coefficients in the jet variables and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolForm {
    n: usize,
    degree: u32,
    coeffs: BTreeMap<Vec<u32>, RationalFunction>,
}

impl SymbolForm {
    pub fn zero(n: usize, degree: u32) -> Self {
        SymbolForm { n, degree, coeffs: BTreeMap::new() }
    }

    /// Builds a form from a coefficient map; zero entries are dropped.
    /// Panics on an exponent vector of the wrong length or degree.
    pub fn from_coefficients(n: usize, degree: u32, coeffs: BTreeMap<Vec<u32>, RationalFunction>) -> Self {
        for e in coeffs.keys() {
            assert_eq!(e.len(), n);
            assert_eq!(e.iter().sum::<u32>(), degree, "form is not homogeneous");
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SymbolForm { n, degree, coeffs }
    }

    /// Splits a rational function that is polynomial in the `xi` over a
    /// xi-free denominator.
    pub fn from_function(n: usize, degree: u32, f: &RationalFunction) -> Result<Self> {
        let xis: Vec<Var> = (1..=n).map(Var::xi).collect();
        if xis.iter().any(|v| f.denom().contains_var(v)) {
            return Err(Error::Invalid("denominator depends on xi".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (e, c) in f.numer().split_by(&xis) {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::Invalid(format!("form is not homogeneous of degree {degree}")));
            }
            coeffs.insert(e, RationalFunction::new(c, f.denom().clone())?);
        }
        Ok(SymbolForm { n, degree, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> RationalFunction {
        self.coeffs.get(exps).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Coefficient of `xi_i*xi_j`.
    pub fn quadratic_coefficient(&self, i: usize, j: usize) -> RationalFunction {
        let mut e = vec![0; self.n];
        e[i - 1] += 1;
        e[j - 1] += 1;
        self.coefficient(&e)
    }

    /// Nonzero coefficients keyed by exponent vector.
    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, RationalFunction> {
        &self.coeffs
    }

    /// The form as a single rational function in the `xi` and jet variables.
    pub fn to_function(&self) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (e, c) in &self.coeffs {
            let xis: Vec<Var> = (1..=self.n).map(Var::xi).collect();
            let m = RationalFunction::from_poly(MultiPoly::power_product(&xis, e));
            acc = &acc + &(c * &m);
        }
        acc
    }

    pub fn map_coefficients(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let v = f(c)?;
            if !v.is_zero() {
                coeffs.insert(e.clone(), v);
            }
        }
        Ok(SymbolForm { n: self.n, degree: self.degree, coeffs })
    }

    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalFunction>) -> Result<Self> {
        self.map_coefficients(|c| c.substitute(bindings))
    }

    pub fn eval(&self, point: &BTreeMap<Var, Rational>) -> Result<Self> {
        self.map_coefficients(|c| c.eval(point))
    }

    pub fn add(&self, other: &SymbolForm) -> SymbolForm {
        assert_eq!((self.n, self.degree), (other.n, other.degree));
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let slot = coeffs.entry(e.clone()).or_insert_with(RationalFunction::zero);
            *slot = &*slot + c;
        }
        Self::from_coefficients(self.n, self.degree, coeffs)
    }

    pub fn mul(&self, other: &SymbolForm) -> SymbolForm {
        assert_eq!(self.n, other.n);
        let mut coeffs: BTreeMap<Vec<u32>, RationalFunction> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = coeffs.entry(e).or_insert_with(RationalFunction::zero);
                *slot = &*slot + &(ca * cb);
            }
        }
        Self::from_coefficients(self.n, self.degree + other.degree, coeffs)
    }

    pub fn scale(&self, c: &RationalFunction) -> SymbolForm {
        let coeffs = self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        Self::from_coefficients(self.n, self.degree, coeffs)
    }
}

impl fmt::Display for SymbolForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_function())
    }
}

#[derive(Serialize)]
struct SymbolFormRepr {
    n: usize,
    degree: u32,
    expression: String,
}

impl Serialize for SymbolForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolFormRepr { n: self.n, degree: self.degree, expression: self.to_string() }.serialize(s)
    }
}

/// `Smbl(F) = sum_{i<=j} F_{p_ij} xi_i xi_j`.
pub fn symbol(f: &PdeFunction) -> SymbolForm {
    let n = f.n;
    let mut coeffs = BTreeMap::new();
    for (i, j) in chart_pairs(n) {
        let d = f.partial(i, j);
        if d.is_zero() {
            continue;
        }
        let mut e = vec![0; n];
        e[i - 1] += 1;
        e[j - 1] += 1;
        coeffs.insert(e, d);
    }
    SymbolForm::from_coefficients(n, 2, coeffs)
}

/// `Smbl^k(F)`: the `k`-th derivative at `t = 0` of
/// `t -> F(P + t*xi*xi^T)`, a form of degree `2k`.
pub fn iterated_symbol(f: &PdeFunction, k: u32) -> Result<SymbolForm> {
    if k == 0 {
        return Err(Error::Invalid("symbol order must be at least 1".into()));
    }
    let n = f.n;
    let num = rank_one_taylor(f.f.numer(), n, k);
    let den_poly = f.f.denom();
    let xis: Vec<Var> = (1..=n).map(Var::xi).collect();
    let kf = factorial(k);
    let (top, den_power) = if den_poly.is_constant() {
        (num[k as usize].clone(), MultiPoly::one())
    } else {
        // N/D = sum Q_m t^m with Q_m = R_m / D^(m+1) and
        // R_m = N_m D^m - sum_{l=1..m} D_l R_{m-l} D^(l-1).
        let den = rank_one_taylor(den_poly, n, k);
        let d0 = &den[0];
        let mut r: Vec<MultiPoly> = Vec::with_capacity(k as usize + 1);
        for m in 0..=k as usize {
            let mut acc = &num[m] * &d0.pow(m as u32);
            for l in 1..=m {
                if den[l].is_zero() {
                    continue;
                }
                acc = &acc - &(&(&den[l] * &r[m - l]) * &d0.pow(l as u32 - 1));
            }
            r.push(acc);
        }
        (r[k as usize].clone(), d0.pow(k + 1))
    };
    let mut coeffs = BTreeMap::new();
    for (e, c) in top.split_by(&xis) {
        coeffs.insert(e, RationalFunction::new(c.scale(&kf), den_power.clone())?);
    }
    Ok(SymbolForm::from_coefficients(n, 2 * k, coeffs))
}
