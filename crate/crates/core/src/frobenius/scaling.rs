//! The scaling action on structures and matching up to it.
//!
//! The axioms determine a structure only up to one multiplicative
//! constant: rescaling the flat pairing by `c`, the potential by the
//! inverse square of `c`, and the identity field by `c` maps verified
//! structures to verified structures. Matching two structures therefore
//! means finding the constant that carries one onto the other and
//! comparing everything else verbatim.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::frobenius::structure::FrobeniusStructure;
use crate::pencil::metric::ConstMetric;

/// Applies the scaling action with constant `c`: the raised pairing and
/// the identity field pick up `c`, the lowered pairing picks up the
/// inverse, the potential picks up the inverse square, and the structure
/// tensor is untouched.
pub fn scale_structure(s: &FrobeniusStructure, c: &Rat) -> Result<FrobeniusStructure> {
    if c.is_zero() {
        return Err(Error::ZeroScale);
    }
    let n = s.n();
    let mut upper = Vec::with_capacity(n);
    for a in 0..n {
        let mut row = Vec::with_capacity(n);
        for b in 0..n {
            row.push(s.eta.upper(a, b).clone() * c.clone());
        }
        upper.push(row);
    }
    let eta = ConstMetric::new(upper)?;
    let inv_sq = c.inv()?.powu(2);
    let mut out = FrobeniusStructure::new(eta, s.constants.clone(), s.potential.scale(&inv_sq))?;
    out.unit_scale = s.unit_scale.clone() * c.clone();
    Ok(out)
}

/// Outcome of matching two structures up to the scaling action.
#[derive(Debug, Clone, PartialEq)]
pub enum MatchResult {
    /// The structures agree after scaling the first by this constant.
    Matched { factor: Rat },
    /// No constant works; the detail names the first disagreement.
    Mismatch { detail: String },
}

/// Finds the constant `c` with `scale(a, c) == b`, if one exists. The
/// candidate is read off the first nonzero entry of the pairings, then
/// every component is compared exactly. Errors when the two structures
/// do not even share a coordinate chart.
pub fn match_up_to_scaling(
    a: &FrobeniusStructure,
    b: &FrobeniusStructure,
) -> Result<MatchResult> {
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch(
            "structures have different coordinate counts".into(),
        ));
    }
    if a.ring().degree() != b.ring().degree() {
        return Err(Error::ShapeMismatch(
            "structures have different degree data".into(),
        ));
    }
    if a.ring() != b.ring() {
        return Err(Error::ShapeMismatch(
            "structures have different coefficient rings".into(),
        ));
    }
    let n = a.n();

    let mut factor = None;
    'scan: for i in 0..n {
        for j in 0..n {
            if !a.eta.upper(i, j).is_zero() {
                if b.eta.upper(i, j).is_zero() {
                    return Ok(MatchResult::Mismatch {
                        detail: format!(
                            "pairing entry ({}, {}) is nonzero on one side only",
                            i + 1,
                            j + 1
                        ),
                    });
                }
                factor = Some(b.eta.upper(i, j).clone() * a.eta.upper(i, j).inv()?);
                break 'scan;
            }
        }
    }
    let Some(factor) = factor else {
        return Err(Error::InvalidMetric("pairing is identically zero".into()));
    };

    let scaled = scale_structure(a, &factor)?;
    for i in 0..n {
        for j in 0..n {
            if scaled.eta.upper(i, j) != b.eta.upper(i, j) {
                return Ok(MatchResult::Mismatch {
                    detail: format!("pairing entry ({}, {}) differs", i + 1, j + 1),
                });
            }
        }
    }
    if scaled.constants != b.constants {
        return Ok(MatchResult::Mismatch {
            detail: "structure tensors differ".into(),
        });
    }
    if scaled.potential != b.potential {
        return Ok(MatchResult::Mismatch {
            detail: "potentials differ".into(),
        });
    }
    if scaled.unit_scale != b.unit_scale {
        return Ok(MatchResult::Mismatch {
            detail: format!(
                "identity scales differ: {} against {}",
                scaled.unit_scale, b.unit_scale
            ),
        });
    }
    Ok(MatchResult::Matched { factor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::degree::{DegreeVector, Mode};
    use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
    use crate::frobenius::structure::build_structure;
    use crate::frobenius::verify::verify_frobenius;
    use crate::pencil::christoffel::Christoffel;
    use crate::pencil::intersection::IntersectionForm;

    fn rank_two_structure() -> FrobeniusStructure {
        let dv = DegreeVector::new(
            vec![Rat::one(), Rat::new(2, 3).unwrap()],
            Rat::new(5, 3).unwrap(),
            Mode::Polynomial,
        )
        .unwrap();
        let ring = RingConfig::new(dv, CoeffKind::Rat);
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let g = IntersectionForm::new(vec![
            vec![(&t2 * &t2).scale(&Rat::from_int(54)), t1.clone()],
            vec![t1, t2.scale(&Rat::new(2, 3).unwrap())],
        ])
        .unwrap();
        let eta = ConstMetric::new(vec![
            vec![Rat::zero(), Rat::one()],
            vec![Rat::one(), Rat::zero()],
        ])
        .unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        build_structure(&chr, &eta).unwrap()
    }

    #[test]
    fn scaling_preserves_every_axiom() {
        let s = rank_two_structure();
        let scaled = scale_structure(&s, &Rat::from_int(3)).unwrap();
        let report = verify_frobenius(&scaled);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn scaling_composes_multiplicatively() {
        let s = rank_two_structure();
        let ab = scale_structure(&scale_structure(&s, &Rat::from_int(3)).unwrap(), &Rat::new(1, 2).unwrap())
            .unwrap();
        let direct = scale_structure(&s, &Rat::new(3, 2).unwrap()).unwrap();
        assert_eq!(ab, direct);
    }

    #[test]
    fn matching_recovers_the_constant() {
        let s = rank_two_structure();
        let scaled = scale_structure(&s, &Rat::from_int(7)).unwrap();
        match match_up_to_scaling(&s, &scaled).unwrap() {
            MatchResult::Matched { factor } => assert_eq!(factor, Rat::from_int(7)),
            MatchResult::Mismatch { detail } => panic!("unexpected mismatch: {detail}"),
        }
    }

    #[test]
    fn genuinely_different_structures_do_not_match() {
        let s = rank_two_structure();
        let mut other = s.clone();
        other.potential = other.potential.scale(&Rat::from_int(5));
        match match_up_to_scaling(&s, &other).unwrap() {
            MatchResult::Matched { .. } => panic!("structures should not match"),
            MatchResult::Mismatch { detail } => assert!(detail.contains("potential")),
        }
    }

    #[test]
    fn zero_scale_is_rejected() {
        assert_eq!(
            scale_structure(&rank_two_structure(), &Rat::zero()),
            Err(Error::ZeroScale)
        );
    }
}
