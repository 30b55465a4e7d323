//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use super::var::Var;
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically against the registry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Terms = BTreeMap<Monomial, Rational>;

/// A polynomial with exact rational coefficients.
///
/// The registry holds exactly the variables that occur, sorted by [`Var`]'s
/// order, and no zero coefficient is ever stored. Two equal polynomials
/// therefore have identical registries and term maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<[Var]>,
    terms: Terms,
}

fn empty_vars() -> Arc<[Var]> {
    Arc::from(Vec::<Var>::new())
}

fn merge_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Re-expresses `terms` over a larger registry `to` containing `from`.
fn embed(terms: &Terms, from: &[Var], to: &[Var]) -> Terms {
    let positions: Vec<usize> = from
        .iter()
        .map(|v| to.binary_search(v).expect("registry is a superset"))
        .collect();
    terms
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0; to.len()];
            for (k, &p) in positions.iter().enumerate() {
                e[p] = m.0[k];
            }
            (Monomial(e), c.clone())
        })
        .collect()
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { vars: empty_vars(), terms: Terms::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![]), c);
        }
        MultiPoly { vars: empty_vars(), terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut terms = Terms::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        MultiPoly { vars: Arc::from(vec![v]), terms }
    }

    /// `coef * prod v^e`.
    pub fn monomial(coef: Rational, powers: &[(Var, u32)]) -> Self {
        let mut acc = Self::constant(coef);
        for (v, e) in powers {
            acc = &acc * &Self::var(v.clone()).pow(*e);
        }
        acc
    }

    /// Builds a polynomial from exponent vectors over `vars`; the registry
    /// may be given in any order and zero coefficients are dropped.
    pub fn from_terms<I>(vars: &[Var], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted: Vec<Var> = order.iter().map(|&k| vars[k].clone()).collect();
        let mut map = Terms::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length must match the registry");
            let e: Vec<u32> = order.iter().map(|&k| exps[k]).collect();
            let slot = map.entry(Monomial(e)).or_insert_with(Rational::zero);
            *slot += c;
        }
        // Repeated variables are folded into one registry slot.
        let mut dedup: Vec<Var> = sorted.clone();
        dedup.dedup();
        if dedup.len() != sorted.len() {
            let map2: Terms = map
                .into_iter()
                .map(|(m, c)| {
                    let mut e = vec![0; dedup.len()];
                    for (k, v) in sorted.iter().enumerate() {
                        e[dedup.binary_search(v).unwrap()] += m.0[k];
                    }
                    (Monomial(e), c)
                })
                .fold(Terms::new(), |mut acc, (m, c)| {
                    *acc.entry(m).or_insert_with(Rational::zero) += c;
                    acc
                });
            return Self::build(Arc::from(dedup), map2);
        }
        Self::build(Arc::from(sorted), map)
    }

    /// Drops zero coefficients and unused registry entries.
    fn build(vars: Arc<[Var]>, mut terms: Terms) -> Self {
        terms.retain(|_, c| !c.is_zero());
        if terms.is_empty() {
            return Self::zero();
        }
        let used: Vec<bool> = (0..vars.len())
            .map(|k| terms.keys().any(|m| m.0[k] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return MultiPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&k| used[k]).collect();
        let new_vars: Vec<Var> = keep.iter().map(|&k| vars[k].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&k| m.0[k]).collect()), c))
            .collect();
        MultiPoly { vars: Arc::from(new_vars), terms }
    }

    /// Both operands expressed over a common registry.
    fn unify<'a>(a: &'a MultiPoly, b: &'a MultiPoly) -> (Arc<[Var]>, std::borrow::Cow<'a, Terms>, std::borrow::Cow<'a, Terms>) {
        use std::borrow::Cow;
        if a.vars == b.vars {
            return (a.vars.clone(), Cow::Borrowed(&a.terms), Cow::Borrowed(&b.terms));
        }
        let vars = merge_vars(&a.vars, &b.vars);
        let ta = if *a.vars == vars[..] { Cow::Borrowed(&a.terms) } else { Cow::Owned(embed(&a.terms, &a.vars, &vars)) };
        let tb = if *b.vars == vars[..] { Cow::Borrowed(&b.terms) } else { Cow::Owned(embed(&b.terms, &b.vars, &vars)) };
        (Arc::from(vars), ta, tb)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .next()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.vars.binary_search(v).is_ok()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        match self.vars.binary_search(v) {
            Ok(k) => self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0),
            Err(_) => 0,
        }
    }

    /// Exponent of `v` in a monomial of this polynomial.
    pub fn exponent_of(&self, m: &Monomial, v: &Var) -> u32 {
        self.vars.binary_search(v).map(|k| m.0[k]).unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Scaled so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        let lc = self.leading_coefficient();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn combine(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let (vars, ta, tb) = Self::unify(self, other);
        let mut out = ta.into_owned();
        for (m, c) in tb.iter() {
            match out.get_mut(m) {
                Some(slot) => {
                    if negate {
                        *slot -= c;
                    } else {
                        *slot += c;
                    }
                }
                None => {
                    out.insert(m.clone(), if negate { -c } else { c.clone() });
                }
            }
        }
        Self::build(vars, out)
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let (vars, ta, tb) = Self::unify(self, other);
        let mut out = Terms::new();
        for (ma, ca) in ta.iter() {
            for (mb, cb) in tb.iter() {
                let m = ma.mul(mb);
                let c = ca * cb;
                match out.get_mut(&m) {
                    Some(slot) => *slot += c,
                    None => {
                        out.insert(m, c);
                    }
                }
            }
        }
        Self::build(vars, out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power; negative exponents belong to rational functions.
    pub fn powi(&self, e: i64) -> Result<MultiPoly> {
        if e < 0 {
            return Err(Error::NegativeExponent(e));
        }
        Ok(self.pow(e as u32))
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: &Var) -> MultiPoly {
        let Ok(k) = self.vars.binary_search(v) else {
            return Self::zero();
        };
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[k] -= 1;
            out.insert(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        Self::build(self.vars.clone(), out)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    pub fn coefficients_in(&self, v: &Var) -> BTreeMap<u32, MultiPoly> {
        let Ok(k) = self.vars.binary_search(v) else {
            let mut out = BTreeMap::new();
            if !self.is_zero() {
                out.insert(0, self.clone());
            }
            return out;
        };
        let mut parts: BTreeMap<u32, Terms> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = std::mem::replace(&mut exps[k], 0);
            parts.entry(e).or_default().insert(Monomial(exps), c.clone());
        }
        parts
            .into_iter()
            .map(|(e, t)| (e, Self::build(self.vars.clone(), t)))
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(v: &Var, coeffs: &BTreeMap<u32, MultiPoly>) -> MultiPoly {
        let x = Self::var(v.clone());
        let mut acc = Self::zero();
        for (e, c) in coeffs {
            acc = &acc + &(c * &x.pow(*e));
        }
        acc
    }

    /// Groups terms by their exponents in `split` (in the given order); the
    /// values are the coefficient polynomials in the remaining variables.
    pub fn split_by(&self, split: &[Var]) -> BTreeMap<Vec<u32>, MultiPoly> {
        let pos: Vec<Option<usize>> = split.iter().map(|v| self.vars.binary_search(v).ok()).collect();
        let mut parts: BTreeMap<Vec<u32>, Terms> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let key: Vec<u32> = pos
                .iter()
                .map(|p| p.map_or(0, |k| std::mem::replace(&mut exps[k], 0)))
                .collect();
            parts.entry(key).or_default().insert(Monomial(exps), c.clone());
        }
        parts
            .into_iter()
            .map(|(k, t)| (k, Self::build(self.vars.clone(), t)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// Composition with polynomial bindings.
    pub fn substitute_poly(&self, bindings: &BTreeMap<Var, MultiPoly>) -> MultiPoly {
        let bound: Vec<Option<&MultiPoly>> = self.vars.iter().map(|v| bindings.get(v)).collect();
        if bound.iter().all(Option::is_none) {
            return self.clone();
        }
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut free = m.0.clone();
            let mut term = Self::constant(c.clone());
            for (k, b) in bound.iter().enumerate() {
                if let Some(val) = b {
                    let e = free[k];
                    if e > 0 {
                        free[k] = 0;
                        let p = cache.entry((k, e)).or_insert_with(|| val.pow(e));
                        term = &term * p;
                    }
                }
            }
            let rest = Self::build(self.vars.clone(), std::iter::once((Monomial(free), Rational::one())).collect());
            acc = &acc + &(&term * &rest);
        }
        acc
    }

    /// Substitutes rational values for some variables.
    pub fn eval(&self, values: &BTreeMap<Var, Rational>) -> MultiPoly {
        let vals: Vec<Option<&Rational>> = self.vars.iter().map(|v| values.get(v)).collect();
        if vals.iter().all(Option::is_none) {
            return self.clone();
        }
        let mut out = Terms::new();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut exps = m.0.clone();
            for (k, val) in vals.iter().enumerate() {
                if let Some(x) = val {
                    if exps[k] > 0 {
                        coef *= num_traits::pow((*x).clone(), exps[k] as usize);
                        exps[k] = 0;
                    }
                }
            }
            if coef.is_zero() {
                continue;
            }
            *out.entry(Monomial(exps)).or_insert_with(Rational::zero) += coef;
        }
        Self::build(self.vars.clone(), out)
    }

    /// Evaluates to a rational when every variable is bound.
    pub fn eval_full(&self, values: &BTreeMap<Var, Rational>) -> Option<Rational> {
        self.eval(values).constant_value()
    }

    /// Division with remainder by a single divisor in graded-lex order.
    pub fn div_rem(&self, d: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (vars, tp, td) = Self::unify(self, d);
        let mut p = tp.into_owned();
        let (lm_d, lc_d) = td.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut q = Terms::new();
        let mut r = Terms::new();
        while let Some((lm, lc)) = p.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm_d.divides(&lm) {
                let tm = lm.div(&lm_d);
                let tc = &lc / &lc_d;
                for (m, c) in td.iter() {
                    let key = m.mul(&tm);
                    let delta = c * &tc;
                    let remove = match p.get_mut(&key) {
                        Some(slot) => {
                            *slot -= delta;
                            slot.is_zero()
                        }
                        None => {
                            p.insert(key.clone(), -delta);
                            false
                        }
                    };
                    if remove {
                        p.remove(&key);
                    }
                }
                *q.entry(tm).or_insert_with(Rational::zero) += tc;
            } else {
                p.remove(&lm);
                r.insert(lm, lc);
            }
        }
        Ok((Self::build(vars.clone(), q), Self::build(vars, r)))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.vars.iter().any(|v| !self.contains_var(v)) {
            return None;
        }
        if d.total_degree() > self.total_degree() {
            return None;
        }
        let (vars, tp, td) = Self::unify(self, d);
        let mut p = tp.into_owned();
        let (lm_d, lc_d) = td.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut q = Terms::new();
        while let Some((lm, lc)) = p.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm_d.divides(&lm) {
                return None;
            }
            let tm = lm.div(&lm_d);
            let tc = &lc / &lc_d;
            for (m, c) in td.iter() {
                let key = m.mul(&tm);
                let delta = c * &tc;
                let remove = match p.get_mut(&key) {
                    Some(slot) => {
                        *slot -= delta;
                        slot.is_zero()
                    }
                    None => {
                        p.insert(key.clone(), -delta);
                        false
                    }
                };
                if remove {
                    p.remove(&key);
                }
            }
            q.insert(tm, tc);
        }
        Some(Self::build(vars, q))
    }

    /// Lowest power of each variable dividing every term.
    pub fn monomial_content(&self) -> MultiPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut low: Vec<u32> = vec![u32::MAX; self.vars.len()];
        for m in self.terms.keys() {
            for (l, e) in low.iter_mut().zip(&m.0) {
                *l = (*l).min(*e);
            }
        }
        Self::build(self.vars.clone(), std::iter::once((Monomial(low), Rational::one())).collect())
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> MultiPoly {
        Self::build(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Power-product `vars^exps` with exponents given in the order of `vars`.
    pub fn power_product(vars: &[Var], exps: &[u32]) -> MultiPoly {
        Self::from_terms(vars, std::iter::once((exps.to_vec(), Rational::one())))
    }
}

impl Default for MultiPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                let f: fn(&MultiPoly, &MultiPoly) -> MultiPoly = $body;
                f(self, rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.combine(b, false));
forward_binop!(Sub, sub, |a, b| a.combine(b, true));
forward_binop!(Mul, mul, |a, b| a.product(b));

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::one()
    }
}

pub(crate) fn format_monomial(vars: &[Var], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(m.exps()) {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing graded-lex order, e.g. `3/2*p11^2*p12 - p12 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let mono = format_monomial(&self.vars, m);
            if mono.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}
