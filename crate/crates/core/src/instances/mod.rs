//! Ready-made instances: orbit-space charts of finite reflection groups
//! and the rank-three elliptic chart with series coefficients.

pub mod coxeter;
pub mod elliptic;
pub mod flat;
pub mod orbit;

use alloc::vec;

use crate::algebra::degree::{DegreeVector, Mode};
use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::error::Result;
use crate::pencil::intersection::IntersectionForm;
use crate::pencil::metric::ConstMetric;

/// The smallest interesting chart: two coordinates, an antidiagonal
/// pairing, and the cubic potential whose intersection form is linear in
/// the coordinates. The second degree is a free parameter in `(0, 1]`.
pub fn trivial_rank_two(d2: Rat) -> Result<(IntersectionForm, ConstMetric)> {
    let charge = Rat::one() + d2.clone();
    let dv = DegreeVector::new(vec![Rat::one(), d2.clone()], charge, Mode::Polynomial)?;
    let ring = RingConfig::new(dv, CoeffKind::Rat);
    let t1 = GradedPoly::var(&ring, 0);
    let t2 = GradedPoly::var(&ring, 1);
    let zero = GradedPoly::zero(&ring);
    let g = IntersectionForm::new(vec![
        vec![zero, t1.clone()],
        vec![t1, t2.scale(&d2)],
    ])?;
    let eta = ConstMetric::new(vec![
        vec![Rat::zero(), Rat::one()],
        vec![Rat::one(), Rat::zero()],
    ])?;
    Ok((g, eta))
}

/// Everything the orbit-space construction yields for one reflection
/// group: the verified chart of basic invariants, the interpolated form
/// on those invariants, and the flat presentation with its constant
/// pairing.
#[derive(Clone, Debug)]
pub struct CoxeterInstance {
    pub chart: coxeter::ReflectionChart,
    pub orbit_form: IntersectionForm,
    pub flat: flat::FlatChart,
}

/// Runs the orbit-space construction end to end: build and verify the
/// chart, interpolate the form on basic invariants from ambient samples
/// drawn with the given seed, and change to flat coordinates.
pub fn coxeter_instance(
    kind: coxeter::GroupKind,
    rank: usize,
    seed: u64,
) -> Result<CoxeterInstance> {
    let chart = coxeter::ReflectionChart::new(kind, rank)?;
    let orbit_form = orbit::orbit_metric(&chart, seed)?;
    let flat = flat::flat_coordinates(&orbit_form)?;
    Ok(CoxeterInstance { chart, orbit_form, flat })
}

/// Shared helper: the constant antidiagonal pairing of a given size.
pub(crate) fn antidiagonal_metric(n: usize) -> Result<ConstMetric> {
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[n - 1 - i] = Rat::one();
    }
    ConstMetric::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::structure::build_structure;
    use crate::frobenius::verify::verify_frobenius;
    use crate::pencil::christoffel::Christoffel;

    #[test]
    fn rank_two_cubic_instance_passes_the_pipeline() {
        let (g, eta) = trivial_rank_two(Rat::new(1, 2).unwrap()).unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        let s = build_structure(&chr, &eta).unwrap();
        let report = verify_frobenius(&s);
        assert!(report.all_passed(), "{report}");

        let ring = s.ring().clone();
        let mut expected = GradedPoly::zero(&ring);
        expected.add_term(vec![2, 1], ring.lift(Rat::new(1, 2).unwrap()));
        assert_eq!(s.potential.tau_poly().p, expected);
    }
}
