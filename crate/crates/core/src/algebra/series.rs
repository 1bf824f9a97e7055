//! Truncated formal power series in one variable `q` over the rationals.
//!
//! A series holds its coefficients for `q^0 .. q^(N-1)` where `N` is the
//! truncation length. All operations stay within a fixed truncation; mixing
//! two different truncations is a programming error and panics.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::rat::Rat;
use crate::error::{Error, Result};

/// A formal power series truncated at order `q^(len-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rat>,
}

impl QSeries {
    /// The zero series with `n` retained coefficients.
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "truncation length must be positive");
        QSeries {
            coeffs: vec![Rat::zero(); n],
        }
    }

    /// The constant series `c` with `n` retained coefficients.
    pub fn constant(c: Rat, n: usize) -> Self {
        let mut s = QSeries::zero(n);
        s.coeffs[0] = c;
        s
    }

    /// The constant series `1`.
    pub fn one(n: usize) -> Self {
        QSeries::constant(Rat::one(), n)
    }

    /// The series `q` (zero if the truncation keeps only the constant term).
    pub fn q(n: usize) -> Self {
        let mut s = QSeries::zero(n);
        if n > 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    /// Builds a series from explicit coefficients `a_0, a_1, ...`.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "truncation length must be positive");
        QSeries { coeffs }
    }

    /// The truncation length (number of retained coefficients).
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// The coefficient of `q^k`, or zero past the truncation.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Replaces the coefficient of `q^k`.
    pub fn set_coeff(&mut self, k: usize, c: Rat) {
        assert!(k < self.coeffs.len(), "order past the truncation");
        self.coeffs[k] = c;
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// True when the series is the constant `c`.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Rat::is_zero)
    }

    fn check_same(&self, rhs: &QSeries) {
        assert_eq!(
            self.coeffs.len(),
            rhs.coeffs.len(),
            "mixed series truncations"
        );
    }

    pub fn add(&self, rhs: &QSeries) -> QSeries {
        self.check_same(rhs);
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &QSeries) -> QSeries {
        self.check_same(rhs);
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Product, truncated to the common length.
    pub fn mul(&self, rhs: &QSeries) -> QSeries {
        self.check_same(rhs);
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += &(a * b);
            }
        }
        QSeries { coeffs: out }
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// The logarithmic derivative operator `q d/dq`: sends `a_k q^k` to
    /// `k a_k q^k`. Truncation-stable.
    pub fn d_b(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a * &Rat::from_int(k as i64))
                .collect(),
        }
    }

    /// Multiplicative inverse. Errors unless the constant term is nonzero.
    pub fn invert(&self) -> Result<QSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::SingularMatrix(
                "series with zero constant term has no inverse".into(),
            ));
        }
        let n = self.coeffs.len();
        let a0inv = a0.inv()?;
        let mut out = vec![Rat::zero(); n];
        out[0] = a0inv.clone();
        for k in 1..n {
            let mut acc = Rat::zero();
            for i in 1..=k {
                acc += &(&self.coeffs[i] * &out[k - i]);
            }
            out[k] = -(acc * a0inv.clone());
        }
        Ok(QSeries { coeffs: out })
    }

    /// Keeps only the coefficients up to `q^(m-1)`, padding with zeros if `m`
    /// exceeds the current truncation.
    pub fn prefix(&self, m: usize) -> QSeries {
        assert!(m > 0, "truncation length must be positive");
        let mut coeffs: Vec<Rat> = self.coeffs.iter().take(m).cloned().collect();
        coeffs.resize(m, Rat::zero());
        QSeries { coeffs }
    }

    /// Evaluates the truncated polynomial at a rational value of `q`.
    pub fn eval(&self, q: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * q.clone() + a.clone();
        }
        acc
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*q")?,
                _ => write!(f, "({a})*q^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.coeffs.len())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn mul_truncates() {
        let a = QSeries::from_coeffs(vec![r(1, 1), r(2, 1), r(3, 1)]);
        let b = QSeries::from_coeffs(vec![r(1, 1), r(-1, 1), r(0, 1)]);
        let p = a.mul(&b);
        assert_eq!(p.coeffs(), &[r(1, 1), r(1, 1), r(1, 1)]);
    }

    #[test]
    fn invert_roundtrip() {
        let a = QSeries::from_coeffs(vec![r(2, 1), r(1, 3), r(-5, 7), r(1, 1)]);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), QSeries::one(4));
        assert!(QSeries::q(4).invert().is_err());
    }

    #[test]
    fn d_b_scales_by_order() {
        let a = QSeries::from_coeffs(vec![r(5, 1), r(1, 1), r(1, 2)]);
        assert_eq!(a.d_b().coeffs(), &[r(0, 1), r(1, 1), r(1, 1)]);
    }
}
