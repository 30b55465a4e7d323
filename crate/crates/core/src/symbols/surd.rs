//! Exact arithmetic in a real quadratic extension Q(sqrt d).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_rational, rational::rational_sqrt, Rational};

/// `a + b*sqrt(d)` with `d` a positive squarefree integer (or `d = 1`
/// and `b = 0` for rational values).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    d: BigInt,
}

/// Splits `q > 0` as `s^2 * d` with `d` a squarefree integer, trial
/// dividing by small factors only; larger square factors stay in `d`,
/// which keeps values exact but possibly non-canonical.
pub fn square_free_split(q: &Rational) -> (Rational, BigInt) {
    assert!(q.is_positive());
    // q = num/den = num*den / den^2
    let mut m: BigInt = q.numer() * q.denom();
    let mut s = Rational::new(BigInt::one(), q.denom().clone());
    let mut f = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &f * &f <= m && f < limit {
        let sq = &f * &f;
        while (&m % &sq).is_zero() {
            m /= &sq;
            s *= Rational::from_integer(f.clone());
        }
        f += 1;
    }
    if let Some(r) = rational_sqrt(&Rational::from_integer(m.clone())) {
        return (s * r, BigInt::one());
    }
    (s, m)
}

impl QuadSurd {
    pub fn rational(a: Rational) -> Self {
        QuadSurd { a, b: Rational::zero(), d: BigInt::one() }
    }

    /// `sqrt(q)` for `q >= 0`.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Invalid("square root of a negative number".into()));
        }
        if q.is_zero() {
            return Ok(Self::rational(Rational::zero()));
        }
        let (s, d) = square_free_split(q);
        if d.is_one() {
            Ok(Self::rational(s))
        } else {
            Ok(QuadSurd { a: Rational::zero(), b: s, d })
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn with_radicand(&self, other: &QuadSurd) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }

    fn normalize(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            QuadSurd::rational(a)
        } else {
            QuadSurd { a, b, d }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalize(&self.a * c, &self.b * c, self.d.clone())
    }

    /// Multiplicative inverse via the conjugate.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone());
        Ok(Self::normalize(&self.a / &norm, -&self.b / &norm, self.d.clone()))
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).signum())
    }
}

impl<'a> Add<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: &QuadSurd) -> QuadSurd {
        let d = self.with_radicand(o);
        QuadSurd::normalize(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl<'a> Sub<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: &QuadSurd) -> QuadSurd {
        let d = self.with_radicand(o);
        QuadSurd::normalize(&self.a - &o.a, &self.b - &o.b, d)
    }
}

impl<'a> Mul<&'a QuadSurd> for &'a QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: &QuadSurd) -> QuadSurd {
        let d = self.with_radicand(o);
        let dq = Rational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dq;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadSurd::normalize(a, b, d)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::normalize(-&self.a, -&self.b, self.d.clone())
    }
}

impl fmt::Display for QuadSurd {
    /// `a`, `b*sqrt(d)` or `a + b*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&format_rational(&self.a));
        }
        let surd = |b: &Rational| {
            if b.is_one() {
                format!("sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", format_rational(b), self.d)
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{}", surd(&-&self.b));
            }
            return f.write_str(&surd(&self.b));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}", format_rational(&self.a), sign, surd(&self.b.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn square_roots_and_inverse() {
        let r = QuadSurd::sqrt(&int(8)).unwrap();
        assert_eq!(r.to_string(), "2*sqrt(2)");
        assert_eq!((&r * &r).as_rational(), Some(&int(8)));
        let x = &QuadSurd::rational(int(1)) + &r;
        let y = x.recip().unwrap();
        assert_eq!((&x * &y).as_rational(), Some(&int(1)));
        assert_eq!(QuadSurd::sqrt(&rat(9, 4)).unwrap().as_rational(), Some(&rat(3, 2)));
        assert_eq!(QuadSurd::sqrt(&rat(1, 2)).unwrap().to_string(), "1/2*sqrt(2)");
    }

    #[test]
    fn exact_sign() {
        let s2 = QuadSurd::sqrt(&int(2)).unwrap();
        let a = &QuadSurd::rational(rat(141, 100)) - &s2;
        assert_eq!(a.signum(), Ordering::Less);
        let b = &QuadSurd::rational(rat(142, 100)) - &s2;
        assert_eq!(b.signum(), Ordering::Greater);
    }
}
