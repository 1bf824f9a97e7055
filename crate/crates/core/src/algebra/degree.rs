//! Coordinate degrees, the charge, and weighted-degree bookkeeping.
//!
//! Every construction works on coordinates `t^1 .. t^n` carrying rational
//! degrees `d^1 = 1 >= d^2 >= ... >= d^n >= 0` together with a charge `D`.
//! A monomial's weighted degree is the degree-weighted sum of its exponents,
//! and homogeneity of all derived tensors is checked against laws expressed
//! in these weights.
//!
//! Two ring modes exist. In polynomial mode every coordinate is an honest
//! polynomial variable. In elliptic mode the last coordinate has degree zero
//! and never appears as a variable: polynomials in `t^1 .. t^(n-1)` carry
//! truncated series coefficients in the exponential `q` of that coordinate,
//! and differentiating along it becomes the operator `q d/dq` on
//! coefficients.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::rat::Rat;
use crate::error::{Error, Result};

/// Which kind of coordinate ring the construction lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Mode {
    /// All `n` coordinates are polynomial variables.
    Polynomial,
    /// The last coordinate is a degree-zero direction realized through
    /// series coefficients; the polynomial ring has `n - 1` variables.
    Elliptic,
}

/// Coordinate degrees plus the charge of the pairing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeVector {
    degrees: Vec<Rat>,
    charge: Rat,
    mode: Mode,
}

impl DegreeVector {
    /// Validates and builds a degree vector.
    ///
    /// Requirements in both modes: at least one coordinate, `d^1 = 1`, and
    /// weakly decreasing degrees. Polynomial mode additionally requires
    /// every degree positive. Elliptic mode requires the charge to be `1`,
    /// the last degree `0`, and all earlier degrees positive.
    pub fn new(degrees: Vec<Rat>, charge: Rat, mode: Mode) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegreeVector("no coordinates".into()));
        }
        if !degrees[0].is_one() {
            return Err(Error::InvalidDegreeVector(alloc::format!(
                "first degree must be 1, got {}",
                degrees[0]
            )));
        }
        for w in degrees.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidDegreeVector(
                    "degrees must be weakly decreasing".into(),
                ));
            }
        }
        match mode {
            Mode::Polynomial => {
                if degrees.iter().any(|d| d.is_zero() || d.is_negative()) {
                    return Err(Error::InvalidDegreeVector(
                        "polynomial mode needs every degree positive".into(),
                    ));
                }
            }
            Mode::Elliptic => {
                if !charge.is_one() {
                    return Err(Error::InvalidDegreeVector(alloc::format!(
                        "elliptic mode needs charge 1, got {charge}"
                    )));
                }
                let n = degrees.len();
                if !degrees[n - 1].is_zero() {
                    return Err(Error::InvalidDegreeVector(
                        "elliptic mode needs the last degree zero".into(),
                    ));
                }
                if degrees[..n - 1]
                    .iter()
                    .any(|d| d.is_zero() || d.is_negative())
                {
                    return Err(Error::InvalidDegreeVector(
                        "elliptic mode needs every interior degree positive".into(),
                    ));
                }
            }
        }
        Ok(DegreeVector {
            degrees,
            charge,
            mode,
        })
    }

    /// Number of coordinates (including the degree-zero one in elliptic
    /// mode).
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn charge(&self) -> &Rat {
        &self.charge
    }

    /// The degree of coordinate `alpha` (zero-based).
    pub fn degree(&self, alpha: usize) -> &Rat {
        &self.degrees[alpha]
    }

    pub fn degrees(&self) -> &[Rat] {
        &self.degrees
    }

    /// Number of genuine polynomial variables.
    pub fn var_count(&self) -> usize {
        match self.mode {
            Mode::Polynomial => self.degrees.len(),
            Mode::Elliptic => self.degrees.len() - 1,
        }
    }

    /// The rescaling weight `kappa_beta = d^beta + (1 - D)/2` attached to an
    /// upper index of the second metric's connection.
    pub fn kappa(&self, beta: usize) -> Rat {
        let half = Rat::new(1, 2).unwrap();
        self.degrees[beta].clone() + (Rat::one() - self.charge.clone()) * half
    }

    /// Indices whose rescaling weight vanishes (zero-based).
    pub fn degenerate_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&b| self.kappa(b).is_zero()).collect()
    }

    /// Weighted degree of an exponent vector over the polynomial variables.
    pub fn wdeg(&self, exp: &[u32]) -> Rat {
        assert_eq!(exp.len(), self.var_count(), "exponent arity mismatch");
        let mut acc = Rat::zero();
        for (e, d) in exp.iter().zip(&self.degrees) {
            if *e != 0 {
                acc += &(Rat::from_int(*e as i64) * d.clone());
            }
        }
        acc
    }

    /// All exponent vectors over the polynomial variables whose weighted
    /// degree equals `target`. Returns an empty list for negative targets.
    pub fn enumerate_monomials(&self, target: &Rat) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if target.is_negative() {
            return out;
        }
        let nv = self.var_count();
        let mut current = vec![0u32; nv];
        self.enumerate_rec(0, target.clone(), &mut current, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        var: usize,
        remaining: Rat,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if var == self.var_count() {
            if remaining.is_zero() {
                out.push(current.clone());
            }
            return;
        }
        let d = self.degrees[var].clone();
        let mut e: u32 = 0;
        loop {
            let used = Rat::from_int(e as i64) * d.clone();
            if used > remaining {
                break;
            }
            current[var] = e;
            self.enumerate_rec(var + 1, remaining.clone() - used, current, out);
            e += 1;
        }
        current[var] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DegreeVector::new(vec![], Rat::one(), Mode::Polynomial).is_err());
        assert!(DegreeVector::new(vec![r(2, 1)], Rat::one(), Mode::Polynomial).is_err());
        assert!(
            DegreeVector::new(vec![Rat::one(), r(2, 3)], r(5, 3), Mode::Polynomial).is_ok()
        );
        assert!(DegreeVector::new(
            vec![Rat::one(), r(1, 2), Rat::zero()],
            Rat::one(),
            Mode::Elliptic
        )
        .is_ok());
        assert!(DegreeVector::new(
            vec![Rat::one(), r(1, 2), Rat::zero()],
            r(3, 2),
            Mode::Elliptic
        )
        .is_err());
    }

    #[test]
    fn kappa_and_degeneracy() {
        let dv =
            DegreeVector::new(vec![Rat::one(), r(2, 3)], r(5, 3), Mode::Polynomial).unwrap();
        assert_eq!(dv.kappa(0), r(2, 3));
        assert_eq!(dv.kappa(1), r(1, 3));
        assert!(dv.degenerate_set().is_empty());

        let ell = DegreeVector::new(
            vec![Rat::one(), r(1, 2), Rat::zero()],
            Rat::one(),
            Mode::Elliptic,
        )
        .unwrap();
        assert_eq!(ell.kappa(0), Rat::one());
        assert_eq!(ell.degenerate_set(), vec![2]);
        assert_eq!(ell.var_count(), 2);
    }

    #[test]
    fn monomial_enumeration() {
        let dv =
            DegreeVector::new(vec![Rat::one(), r(2, 3)], r(5, 3), Mode::Polynomial).unwrap();
        let ms = dv.enumerate_monomials(&r(2, 1));
        assert_eq!(ms, vec![vec![0, 3], vec![2, 0]]);
        assert!(dv.enumerate_monomials(&r(-1, 1)).is_empty());
        assert_eq!(dv.enumerate_monomials(&Rat::zero()), vec![vec![0, 0]]);
    }
}
