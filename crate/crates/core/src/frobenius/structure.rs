//! Structure constants of the multiplication and the assembled structure.
//!
//! The connection coefficients of a flat pencil are rescaled second
//! derivatives: dividing each column by its rescaling weight yields the
//! structure constants of a commutative associative multiplication with
//! the raised first index. Columns with vanishing weight carry no
//! information in the connection and are reconstructed from the flat
//! metric directly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::degree::{DegreeVector, Mode};
use crate::algebra::poly::{GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::frobenius::potential::Potential;
use crate::pencil::christoffel::Christoffel;
use crate::pencil::intersection::IntersectionForm;
use crate::pencil::metric::ConstMetric;

/// Checks that the set of vanishing rescaling weights is exactly what the
/// mode prescribes: empty for polynomial charts, the last slot alone for
/// elliptic charts. Returns the degenerate slot if there is one.
pub(crate) fn expected_degenerate_slot(dv: &DegreeVector) -> Result<Option<usize>> {
    let found = dv.degenerate_set();
    match dv.mode() {
        Mode::Polynomial => {
            if found.is_empty() {
                Ok(None)
            } else {
                Err(Error::DegenerateIndexSet(format!(
                    "polynomial chart has vanishing rescaling weights at {found:?}"
                )))
            }
        }
        Mode::Elliptic => {
            let z = dv.n() - 1;
            if found == [z] {
                Ok(Some(z))
            } else {
                Err(Error::DegenerateIndexSet(format!(
                    "elliptic chart must degenerate exactly at the last slot, found {found:?}"
                )))
            }
        }
    }
}

/// The tensor `C^{ab}_g` of the multiplication with one index raised by
/// the flat metric: symmetric in the upper pair, associative, with the
/// first coordinate acting as the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    c: Vec<Vec<Vec<GradedPoly>>>,
}

impl StructureConstants {
    /// Wraps a full cubic array after shape and ring validation.
    pub fn new(c: Vec<Vec<Vec<GradedPoly>>>) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("empty structure tensor".into()));
        }
        let ring = c[0][0][0].ring().clone();
        if ring.degree().n() != n {
            return Err(Error::ShapeMismatch(
                "structure tensor size differs from the coordinate count".into(),
            ));
        }
        for plane in &c {
            if plane.len() != n {
                return Err(Error::ShapeMismatch("ragged structure tensor".into()));
            }
            for row in plane {
                if row.len() != n {
                    return Err(Error::ShapeMismatch("ragged structure tensor".into()));
                }
                for entry in row {
                    if entry.ring() != &ring {
                        return Err(Error::RingMismatch(
                            "structure tensor entries use different rings".into(),
                        ));
                    }
                }
            }
        }
        Ok(StructureConstants { c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn ring(&self) -> &RingConfig {
        self.c[0][0][0].ring()
    }

    /// The entry `C^{ab}_g` (all indices zero-based).
    pub fn entry(&self, a: usize, b: usize, g: usize) -> &GradedPoly {
        &self.c[a][b][g]
    }
}

/// Divides each connection column by its rescaling weight. The degenerate
/// column of an elliptic chart must vanish in the connection; its
/// structure constants are multiples of the identity matrix fixed by the
/// flat pairing with the first coordinate.
pub fn structure_constants(
    chr: &Christoffel,
    eta: &ConstMetric,
) -> Result<StructureConstants> {
    let ring = chr.ring().clone();
    let dv = ring.degree().clone();
    let n = dv.n();
    if eta.n() != n {
        return Err(Error::ShapeMismatch(
            "flat metric size differs from the coordinate count".into(),
        ));
    }
    let degenerate = expected_degenerate_slot(&dv)?;

    let mut c = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
    for b in 0..n {
        if degenerate == Some(b) {
            for a in 0..n {
                for g in 0..n {
                    if !chr.entry(a, b, g).is_zero() {
                        return Err(Error::NonzeroDegenerateColumn { alpha: a, gamma: g });
                    }
                }
            }
            let pair = eta.upper(0, b);
            for a in 0..n {
                c[a][b][a] = GradedPoly::from_rat(&ring, pair.clone());
            }
        } else {
            let scale = dv.kappa(b).inv()?;
            for a in 0..n {
                for g in 0..n {
                    c[a][b][g] = chr.entry(a, b, g).scale(&scale);
                }
            }
        }
    }
    StructureConstants::new(c)
}

/// A Frobenius structure in flat coordinates: the constant flat metric,
/// the raised structure constants, the prepotential, and the scale of the
/// identity field relative to the first coordinate direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusStructure {
    pub eta: ConstMetric,
    pub constants: StructureConstants,
    pub potential: Potential,
    /// The identity field is this multiple of the first coordinate
    /// direction. Freshly built structures use one; the scaling action
    /// changes it.
    pub unit_scale: Rat,
}

impl FrobeniusStructure {
    pub fn new(
        eta: ConstMetric,
        constants: StructureConstants,
        potential: Potential,
    ) -> Result<Self> {
        let n = constants.n();
        if eta.n() != n {
            return Err(Error::ShapeMismatch(
                "flat metric size differs from the structure tensor".into(),
            ));
        }
        if potential.ring() != constants.ring() {
            return Err(Error::RingMismatch(
                "potential and structure tensor use different rings".into(),
            ));
        }
        Ok(FrobeniusStructure {
            eta,
            constants,
            potential,
            unit_scale: Rat::one(),
        })
    }

    pub fn n(&self) -> usize {
        self.constants.n()
    }

    pub fn ring(&self) -> &RingConfig {
        self.constants.ring()
    }

    /// Contracts the structure constants with the grading field, giving
    /// back the intersection form the structure came from: multiplication
    /// by the grading field with both indices raised.
    pub fn intersection_form(&self) -> Result<IntersectionForm> {
        let ring = self.ring().clone();
        let dv = ring.degree().clone();
        let n = self.n();
        let mut rows = Vec::with_capacity(n);
        for a in 0..n {
            let mut row = Vec::with_capacity(n);
            for b in 0..n {
                let mut acc = GradedPoly::zero(&ring);
                for g in 0..n {
                    let dg = dv.degree(g);
                    if dg.is_zero() {
                        continue;
                    }
                    let tg = GradedPoly::var(&ring, g);
                    acc = &acc + &(&tg * self.constants.entry(a, b, g)).scale(dg);
                }
                row.push(acc);
            }
            rows.push(row);
        }
        IntersectionForm::new(rows)
    }
}

/// Builds the full structure from a flat pencil's data in one call.
pub fn build_structure(chr: &Christoffel, eta: &ConstMetric) -> Result<FrobeniusStructure> {
    let constants = structure_constants(chr, eta)?;
    let potential = crate::frobenius::potential::build_potential(chr, eta)?;
    FrobeniusStructure::new(eta.clone(), constants, potential)
}
