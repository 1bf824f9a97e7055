//! Polynomial coefficients: plain rationals or truncated `q`-series.
//!
//! Every polynomial in a given ring uses a single coefficient kind
//! throughout. Mixed-kind arithmetic is a programming error and panics;
//! public entry points lift rationals into series explicitly before
//! combining.

use core::fmt;

use crate::algebra::rat::Rat;
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};

/// A scalar coefficient, either a rational or a truncated series in `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(Rat),
    Ser(QSeries),
}

impl Coeff {
    pub fn zero_like(&self) -> Coeff {
        match self {
            Coeff::Rat(_) => Coeff::Rat(Rat::zero()),
            Coeff::Ser(s) => Coeff::Ser(QSeries::zero(s.truncation())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Ser(s) => s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Ser(s) => s.is_constant() && s.coeff(0).is_one(),
        }
    }

    /// The rational value, if this coefficient is one (a plain rational or a
    /// constant series).
    pub fn as_rat(&self) -> Option<Rat> {
        match self {
            Coeff::Rat(r) => Some(r.clone()),
            Coeff::Ser(s) if s.is_constant() => Some(s.coeff(0)),
            Coeff::Ser(_) => None,
        }
    }

    fn pair<'a>(a: &'a Coeff, b: &'a Coeff) -> (&'a Coeff, &'a Coeff) {
        match (a, b) {
            (Coeff::Rat(_), Coeff::Ser(_)) | (Coeff::Ser(_), Coeff::Rat(_)) => {
                panic!("mixed coefficient kinds; lift before combining")
            }
            _ => (a, b),
        }
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        match Coeff::pair(self, rhs) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::Ser(a), Coeff::Ser(b)) => Coeff::Ser(a.add(b)),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        match Coeff::pair(self, rhs) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a - b),
            (Coeff::Ser(a), Coeff::Ser(b)) => Coeff::Ser(a.sub(b)),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        match Coeff::pair(self, rhs) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Ser(a), Coeff::Ser(b)) => Coeff::Ser(a.mul(b)),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Ser(a) => Coeff::Ser(a.neg()),
        }
    }

    pub fn scale(&self, c: &Rat) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(a * c),
            Coeff::Ser(a) => Coeff::Ser(a.scale(c)),
        }
    }

    /// Applies `q d/dq`; the zero map on plain rationals.
    pub fn d_b(&self) -> Coeff {
        match self {
            Coeff::Rat(_) => Coeff::Rat(Rat::zero()),
            Coeff::Ser(s) => Coeff::Ser(s.d_b()),
        }
    }

    /// Multiplicative inverse. Errors when the coefficient is not a unit.
    pub fn invert(&self) -> Result<Coeff> {
        match self {
            Coeff::Rat(a) => Ok(Coeff::Rat(a.inv()?)),
            Coeff::Ser(s) => Ok(Coeff::Ser(s.invert()?)),
        }
    }

    /// Evaluates the coefficient at a rational `q` value; errors when a `q`
    /// value is required but absent.
    pub fn eval_q(&self, q: Option<&Rat>) -> Result<Rat> {
        match self {
            Coeff::Rat(a) => Ok(a.clone()),
            Coeff::Ser(s) => {
                let q = q.ok_or(Error::MissingQValue)?;
                Ok(s.eval(q))
            }
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(r) => write!(f, "{r}"),
            Coeff::Ser(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let a = Coeff::Rat(Rat::new(1, 2).unwrap());
        let b = Coeff::Rat(Rat::new(1, 3).unwrap());
        assert_eq!(a.add(&b), Coeff::Rat(Rat::new(5, 6).unwrap()));
        assert!(a.sub(&a).is_zero());
        assert!(a.d_b().is_zero());
    }

    #[test]
    #[should_panic(expected = "mixed coefficient kinds")]
    fn mixed_kinds_panic() {
        let a = Coeff::Rat(Rat::one());
        let b = Coeff::Ser(QSeries::one(3));
        let _ = a.add(&b);
    }
}
