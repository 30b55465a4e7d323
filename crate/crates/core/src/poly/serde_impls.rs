//! JSON representations: rationals as `"num/den"` strings and polynomials
//! as `{"vars": [...], "terms": [{"exps": [...], "coef": "a/b"}]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::multipoly::MultiPoly;
use super::ratfunc::RationalFunction;
use super::rational::{format_rational, parse_rational, Rational};
use super::var::Var;

/// Serde adapter for a single [`Rational`] field.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serialises any displayable value as its string form.
pub fn display_str<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Serialises a sequence of displayable values as strings.
pub fn display_seq<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// Serialises a matrix of displayable values as nested string arrays.
pub fn display_matrix<T: std::fmt::Display, S: Serializer>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u32>,
    #[serde(with = "rational_str")]
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

/// Largest index accepted when reading variable names back.
const MAX_INDEX: usize = 9;

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = PolyRepr {
            vars: self.vars().iter().map(Var::to_string).collect(),
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermRepr { exps: m.exps().to_vec(), coef: c.clone() })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let vars = repr
            .vars
            .iter()
            .map(|v| Var::from_name(v, MAX_INDEX))
            .collect::<crate::Result<Vec<Var>>>()
            .map_err(D::Error::custom)?;
        if repr.terms.iter().any(|t| t.exps.len() != vars.len()) {
            return Err(D::Error::custom("exponent vector length does not match vars"));
        }
        Ok(MultiPoly::from_terms(&vars, repr.terms.into_iter().map(|t| (t.exps, t.coef))))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionRepr {
    num: MultiPoly,
    den: MultiPoly,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalFunctionRepr { num: self.numer().clone(), den: self.denom().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RationalFunctionRepr::deserialize(d)?;
        RationalFunction::new(r.num, r.den).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    #[test]
    fn polynomial_json_round_trip() {
        let f = &MultiPoly::var(Var::p(1, 1)).scale(&rat(3, 2)) - &MultiPoly::var(Var::param("k0"));
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(json["vars"], serde_json::json!(["p11", "k0"]));
        assert_eq!(json["terms"][0]["coef"], "3/2");
        let back: MultiPoly = serde_json::from_value(json).unwrap();
        assert_eq!(back, f);
    }
}
