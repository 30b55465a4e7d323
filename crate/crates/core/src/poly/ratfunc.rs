//! Reduced quotients of polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::multipoly::MultiPoly;
use super::rational::Rational;
use super::var::Var;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RationalFunction { num, den: MultiPoly::one() }
    }

    fn reduce(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        Self::normalized(num, den)
    }

    /// Makes the denominator monic; assumes the pair is already coprime.
    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Union of the numerator and denominator registries.
    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self.num.vars().iter().chain(self.den.vars()).cloned().collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.recip()?.pow(e.unsigned_abs() as u32))
        }
    }

    /// Quotient rule, reduced.
    pub fn partial(&self, v: &Var) -> Self {
        let dn = self.num.partial(v);
        if self.den.is_constant() {
            return RationalFunction { num: dn, den: self.den.clone() };
        }
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(num, self.den.pow(2))
    }

    /// Composition with rational-function bindings.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalFunction>) -> Result<Self> {
        let n = substitute_poly(&self.num, bindings);
        let d = substitute_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(n.checked_div(&d).expect("nonzero denominator"))
    }

    /// Substitutes rational values; the result may still contain unbound variables.
    pub fn eval(&self, values: &BTreeMap<Var, Rational>) -> Result<Self> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Self::new(self.num.eval(values), d)
    }

    /// Value at a point binding every variable.
    pub fn eval_full(&self, values: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let r = self.eval(values)?;
        r.constant_value().ok_or_else(|| {
            let missing: Vec<String> = r.vars().iter().map(|v| v.to_string()).collect();
            Error::Underdetermined(format!("unbound variables {}", missing.join(", ")))
        })
    }
}

/// Substitution into a polynomial over a single common denominator.
pub fn substitute_poly(f: &MultiPoly, bindings: &BTreeMap<Var, RationalFunction>) -> RationalFunction {
    let relevant: Vec<(&Var, &RationalFunction)> =
        f.vars().iter().filter_map(|v| bindings.get_key_value(v)).collect();
    if relevant.is_empty() {
        return RationalFunction::from_poly(f.clone());
    }
    if relevant.iter().all(|(_, r)| r.is_polynomial()) {
        let polys: BTreeMap<Var, MultiPoly> =
            relevant.iter().map(|(v, r)| ((*v).clone(), r.num.clone())).collect();
        return RationalFunction::from_poly(f.substitute_poly(&polys));
    }
    // f = sum c m; with E_v the top degree of v, clear the denominators d_v^E_v.
    let mut num_bind = BTreeMap::new();
    let mut den_total = MultiPoly::one();
    let mut scaled_terms: Vec<MultiPoly> = Vec::new();
    let tops: Vec<u32> = relevant.iter().map(|(v, _)| f.degree_in(v)).collect();
    for (k, (v, r)) in relevant.iter().enumerate() {
        num_bind.insert((*v).clone(), r.num.clone());
        den_total = &den_total * &r.den.pow(tops[k]);
    }
    for (m, c) in f.terms() {
        let mut term = MultiPoly::constant(c.clone());
        let mut free = m.exps().to_vec();
        for (k, (v, r)) in relevant.iter().enumerate() {
            let e = f.exponent_of(m, v);
            if let Ok(pos) = f.vars().binary_search(v) {
                free[pos] = 0;
            }
            term = &term * &r.num.pow(e);
            if tops[k] > e {
                term = &term * &r.den.pow(tops[k] - e);
            }
        }
        term = &term * &MultiPoly::power_product(f.vars(), &free);
        scaled_terms.push(term);
    }
    let num = scaled_terms.into_iter().fold(MultiPoly::zero(), |a, b| &a + &b);
    RationalFunction::reduce(num, den_total)
}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        RationalFunction::var(v)
    }
}

fn add_impl(a: &RationalFunction, b: &RationalFunction, negate: bool) -> RationalFunction {
    let bn = if negate { -&b.num } else { b.num.clone() };
    if a.is_zero() {
        return RationalFunction { num: bn, den: b.den.clone() };
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        let num = &a.num + &bn;
        if a.den.is_one() {
            return RationalFunction::from_poly(num);
        }
        return RationalFunction::reduce(num, a.den.clone());
    }
    if a.den.is_one() {
        return RationalFunction::normalized(&(&a.num * &b.den) + &bn, b.den.clone());
    }
    if b.den.is_one() {
        return RationalFunction::normalized(&a.num + &(&bn * &a.den), a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    let (ad, bd) = if g.is_one() {
        (a.den.clone(), b.den.clone())
    } else {
        (a.den.div_exact(&g).unwrap(), b.den.div_exact(&g).unwrap())
    };
    let num = &(&a.num * &bd) + &(&bn * &ad);
    let den = &a.den * &bd;
    RationalFunction::reduce(num, den)
}

fn mul_impl(a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    if a.is_zero() || b.is_zero() {
        return RationalFunction::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return RationalFunction::from_poly(&a.num * &b.num);
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let an = a.num.div_exact(&g1).unwrap();
    let bd = b.den.div_exact(&g1).unwrap();
    let bn = b.num.div_exact(&g2).unwrap();
    let ad = a.den.div_exact(&g2).unwrap();
    RationalFunction::normalized(&an * &bn, &ad * &bd)
}

macro_rules! forward_rf {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                let f: fn(&RationalFunction, &RationalFunction) -> RationalFunction = $body;
                f(self, rhs)
            }
        }
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    };
}

forward_rf!(Add, add, |a, b| add_impl(a, b, false));
forward_rf!(Sub, sub, |a, b| add_impl(a, b, true));
forward_rf!(Mul, mul, mul_impl);
// Panics on division by zero; use `checked_div` for fallible division.
forward_rf!(Div, div, |a, b| a.checked_div(b).expect("division by the zero rational function"));

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.nterms() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let den = if self.den.nterms() > 1 || !self.den.is_monomial_power() {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{num}/{den}")
    }
}

impl MultiPoly {
    /// A single term with coefficient one, e.g. `p11^2*p12`; printed
    /// without parentheses as a denominator only if it is a single factor.
    fn is_monomial_power(&self) -> bool {
        self.is_monomial() && self.leading_coefficient().is_one() && self.vars().len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn p(i: usize, j: usize) -> RationalFunction {
        RationalFunction::var(Var::p(i, j))
    }

    #[test]
    fn reduction_and_normalization() {
        let num = (&p(1, 1) * &p(1, 1)) - (&p(1, 2) * &p(1, 2));
        let den = (&p(1, 1) - &p(1, 2)).scale(&int(3));
        let q = num.checked_div(&den).unwrap();
        assert!(q.is_polynomial());
        assert_eq!(q, (&p(1, 1) + &p(1, 2)).scale(&rat(1, 3)));
        let r = RationalFunction::one().checked_div(&p(1, 1).scale(&int(2))).unwrap();
        assert!(r.denom().leading_coefficient().is_one());
        assert_eq!(r.numer().constant_value(), Some(rat(1, 2)));
    }

    #[test]
    fn quotient_rule_matches_cleared_denominators() {
        // d/dp11 ((p12^2 - 1)/p11) = -(p12^2 - 1)/p11^2
        let f = (&(&p(1, 2) * &p(1, 2)) - &RationalFunction::one()).checked_div(&p(1, 1)).unwrap();
        let d = f.partial(&Var::p(1, 1));
        // oracle: (d * p11^2) must equal -(p12^2 - 1) as a polynomial identity
        let cleared = &d * &(&p(1, 1) * &p(1, 1));
        assert!(cleared.is_polynomial());
        assert_eq!(cleared, -(&(&p(1, 2) * &p(1, 2)) - &RationalFunction::one()));
    }

    #[test]
    fn substitution_on_shell() {
        // det with p22 -> (1 + p12^2)/p11 gives 1
        let det = &(&p(1, 1) * &p(2, 2)) - &(&p(1, 2) * &p(1, 2));
        let h = (&RationalFunction::one() + &(&p(1, 2) * &p(1, 2))).checked_div(&p(1, 1)).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Var::p(2, 2), h);
        assert_eq!(det.substitute(&b).unwrap(), RationalFunction::one());
        assert_eq!(det.substitute(&BTreeMap::new()).unwrap(), det);
        let mut pt = BTreeMap::new();
        pt.insert(Var::p(1, 1), int(1));
        pt.insert(Var::p(1, 2), int(0));
        pt.insert(Var::p(2, 2), int(1));
        assert_eq!(det.eval_full(&pt).unwrap(), int(1));
    }

    #[test]
    fn pole_is_reported() {
        let f = RationalFunction::one().checked_div(&p(1, 1)).unwrap();
        let mut b = BTreeMap::new();
        b.insert(Var::p(1, 1), RationalFunction::zero());
        assert_eq!(f.substitute(&b), Err(Error::Pole));
        let mut pt = BTreeMap::new();
        pt.insert(Var::p(1, 1), int(0));
        assert_eq!(f.eval(&pt), Err(Error::Pole));
    }

    #[test]
    fn display() {
        let f = (&(&p(1, 2) * &p(1, 2)) - &RationalFunction::one()).checked_div(&p(1, 1)).unwrap();
        assert_eq!(f.to_string(), "(p12^2 - 1)/p11");
    }
}
