//! The constant companion metric of a pencil.

use alloc::vec::Vec;

use crate::algebra::degree::DegreeVector;
use crate::algebra::linalg::Mat;
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};

/// A constant symmetric nondegenerate bilinear form, stored contravariantly
/// together with its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstMetric {
    upper: Mat,
    lower: Mat,
}

impl ConstMetric {
    /// Builds the metric from its contravariant entries. Errors unless the
    /// matrix is square, symmetric, and invertible.
    pub fn new(entries: Vec<Vec<Rat>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        let upper = Mat::from_rows(entries);
        for a in 0..n {
            for b in a + 1..n {
                if upper.at(a, b) != upper.at(b, a) {
                    return Err(Error::InvalidMetric(alloc::format!(
                        "asymmetric at ({a},{b})"
                    )));
                }
            }
        }
        let lower = upper
            .invert()
            .map_err(|_| Error::InvalidMetric("metric is degenerate".into()))?;
        Ok(ConstMetric { upper, lower })
    }

    pub fn n(&self) -> usize {
        self.upper.rows()
    }

    /// Contravariant entry `eta^{ab}`.
    pub fn upper(&self, a: usize, b: usize) -> &Rat {
        self.upper.at(a, b)
    }

    /// Covariant entry `eta_{ab}`.
    pub fn lower(&self, a: usize, b: usize) -> &Rat {
        self.lower.at(a, b)
    }

    pub fn upper_mat(&self) -> &Mat {
        &self.upper
    }

    pub fn lower_mat(&self) -> &Mat {
        &self.lower
    }

    /// Checks the pairing law: a nonzero entry `eta^{ab}` forces
    /// `d^a + d^b` to equal the charge.
    pub fn check_pairing(&self, degree: &DegreeVector) -> Result<()> {
        if degree.n() != self.n() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "metric has {} coordinates, degrees have {}",
                self.n(),
                degree.n()
            )));
        }
        for a in 0..self.n() {
            for b in 0..self.n() {
                if self.upper(a, b).is_zero() {
                    continue;
                }
                let sum = degree.degree(a).clone() + degree.degree(b).clone();
                if &sum != degree.charge() {
                    return Err(Error::InvalidMetric(alloc::format!(
                        "entry ({},{}) pairs degrees {} + {} != charge {}",
                        a + 1,
                        b + 1,
                        degree.degree(a),
                        degree.degree(b),
                        degree.charge()
                    )));
                }
            }
        }
        Ok(())
    }
}
