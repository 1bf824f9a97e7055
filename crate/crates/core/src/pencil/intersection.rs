//! The polynomial intersection form of a pencil.

use alloc::vec::Vec;

use crate::algebra::degree::DegreeVector;
use crate::algebra::linalg::Mat;
use crate::algebra::poly::{GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::pencil::metric::ConstMetric;

/// A symmetric matrix of graded polynomials obeying the pencil degree law:
/// entry `(a, b)` is homogeneous of weighted degree `d^a + d^b + 1 - D`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionForm {
    entries: Vec<Vec<GradedPoly>>,
}

impl IntersectionForm {
    /// Validates shape, ring consistency, symmetry, and the degree law.
    pub fn new(entries: Vec<Vec<GradedPoly>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        let ring = entries[0][0].ring().clone();
        if ring.degree().n() != n {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{n} rows for {} coordinates",
                ring.degree().n()
            )));
        }
        for row in &entries {
            for p in row {
                if p.ring() != &ring {
                    return Err(Error::RingMismatch(
                        "intersection form entries from different rings".into(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if entries[a][b] != entries[b][a] {
                    return Err(Error::InvalidMetric(alloc::format!(
                        "asymmetric at ({},{})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        let form = IntersectionForm { entries };
        for a in 0..n {
            for b in 0..n {
                let law = form.entry_degree(a, b);
                if !form.entries[a][b].is_homogeneous_of(&law) {
                    return Err(Error::Inhomogeneous(alloc::format!(
                        "entry ({},{}) is not homogeneous of weighted degree {law}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(form)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn ring(&self) -> &RingConfig {
        self.entries[0][0].ring()
    }

    pub fn degree(&self) -> &DegreeVector {
        self.ring().degree()
    }

    pub fn entry(&self, a: usize, b: usize) -> &GradedPoly {
        &self.entries[a][b]
    }

    /// The degree-law value `d^a + d^b + 1 - D` for entry `(a, b)`.
    pub fn entry_degree(&self, a: usize, b: usize) -> Rat {
        let dv = self.degree();
        dv.degree(a).clone() + dv.degree(b).clone() + Rat::one() - dv.charge().clone()
    }

    /// The family member `g + lambda * eta` as a raw matrix (the sum is not
    /// homogeneous, so it is not itself an intersection form).
    pub fn pencil_member(&self, eta: &ConstMetric, lambda: &Rat) -> Result<Vec<Vec<GradedPoly>>> {
        let n = self.n();
        if eta.n() != n {
            return Err(Error::ShapeMismatch(
                "companion metric dimension mismatch".into(),
            ));
        }
        let ring = self.ring();
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let shift = GradedPoly::from_rat(ring, lambda * eta.upper(a, b));
                row.push(&self.entries[a][b] + &shift);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Evaluates the matrix at a rational point.
    pub fn eval_matrix(&self, point: &[Rat], q: Option<&Rat>) -> Result<Mat> {
        let n = self.n();
        let mut m = Mat::zero(n, n);
        for a in 0..n {
            for b in 0..n {
                m.set(a, b, self.entries[a][b].evaluate(point, q)?);
            }
        }
        Ok(m)
    }

    /// Differentiates the first coordinate out of every entry and requires
    /// the result to be a constant metric.
    pub fn derived_companion(&self) -> Result<ConstMetric> {
        let n = self.n();
        let mut rows = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let d = self.entries[a][b].derive(0);
                let mut value = Rat::zero();
                for (e, c) in d.terms() {
                    if e.iter().any(|&k| k != 0) {
                        return Err(Error::InvalidMetric(alloc::format!(
                            "entry ({},{}) does not differentiate to a constant",
                            a + 1,
                            b + 1
                        )));
                    }
                    value = c.as_rat().ok_or_else(|| {
                        Error::InvalidMetric(alloc::format!(
                            "entry ({},{}) differentiates to a non-constant series",
                            a + 1,
                            b + 1
                        ))
                    })?;
                }
                row.push(value);
            }
            rows.push(row);
        }
        ConstMetric::new(rows)
    }
}
