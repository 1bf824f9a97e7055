//! Axiom verification for assembled structures.
//!
//! Every axiom is phrased as a polynomial identity and checked exactly;
//! a failure records the indices and the offending residual. Nothing here
//! samples points: the identities either hold in the ring or they do not.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::algebra::poly::GradedPoly;
use crate::algebra::rat::Rat;
use crate::frobenius::structure::FrobeniusStructure;
use crate::report::{CheckReport, CheckResult, Failure};

/// Runs the full axiom suite and returns one result per axiom:
///
/// - `commutativity`: the structure tensor is symmetric in its upper pair;
/// - `associativity`: the quadratic associativity identities hold;
/// - `unit`: the first coordinate direction, times the stored scale, acts
///   as the identity of the multiplication;
/// - `third_derivatives`: raising two gradients of the potential returns
///   the structure tensor;
/// - `flat_metric`: the stored pairing is symmetric and its two index
///   positions are mutually inverse;
/// - `flat_unit`: the identity field has a nonzero scale;
/// - `homogeneity_product`: each structure entry is homogeneous of the
///   degree its indices prescribe;
/// - `homogeneity_metric`: the pairing couples only coordinates whose
///   degrees sum to the charge;
/// - `euler_potential`: the potential is quasi-homogeneous of degree one
///   plus the charge.
pub fn verify_frobenius(s: &FrobeniusStructure) -> CheckReport {
    let mut report = CheckReport::new();
    let ring = s.ring();
    let dv = ring.degree();
    let n = s.n();

    let mut failures = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for g in 0..n {
                if s.constants.entry(a, b, g) != s.constants.entry(b, a, g) {
                    failures.push(Failure::new(
                        format!("({}, {}; {})", a + 1, b + 1, g + 1),
                        "upper pair is not symmetric".to_string(),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("commutativity", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for d in (b + 1)..n {
                for m in 0..n {
                    let mut res = GradedPoly::zero(ring);
                    for svar in 0..n {
                        res = &res
                            + &(s.constants.entry(a, b, svar) * s.constants.entry(svar, d, m));
                        res = &res
                            - &(s.constants.entry(a, d, svar) * s.constants.entry(svar, b, m));
                    }
                    if !res.is_zero() {
                        failures.push(Failure::new(
                            format!("({}, {}, {}; {})", a + 1, b + 1, d + 1, m + 1),
                            format!("residual {res}"),
                        ));
                    }
                }
            }
        }
    }
    report.push(CheckResult::from_failures("associativity", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for g in 0..n {
            let mut res = GradedPoly::zero(ring);
            for b in 0..n {
                let e = s.eta.lower(0, b);
                if e.is_zero() {
                    continue;
                }
                res = &res + &s.constants.entry(a, b, g).scale(e);
            }
            res = res.scale(&s.unit_scale);
            if a == g {
                res = &res - &GradedPoly::one(ring);
            }
            if !res.is_zero() {
                failures.push(Failure::new(
                    format!("({}; {})", a + 1, g + 1),
                    format!("residual {res}"),
                ));
            }
        }
    }
    report.push(CheckResult::from_failures("unit", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let mut raised = GradedPoly::zero(ring);
                for e in 0..n {
                    let ua = s.eta.upper(a, e);
                    if ua.is_zero() {
                        continue;
                    }
                    for m in 0..n {
                        let ub = s.eta.upper(b, m);
                        if ub.is_zero() {
                            continue;
                        }
                        raised = &raised
                            + &s
                                .potential
                                .third_derivative(e, m, g)
                                .scale(&(ua.clone() * ub.clone()));
                    }
                }
                if &raised != s.constants.entry(a, b, g) {
                    let res = &raised - s.constants.entry(a, b, g);
                    failures.push(Failure::new(
                        format!("({}, {}; {})", a + 1, b + 1, g + 1),
                        format!("residual {res}"),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("third_derivatives", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if s.eta.upper(a, b) != s.eta.upper(b, a) {
                failures.push(Failure::new(
                    format!("({}, {})", a + 1, b + 1),
                    "pairing is not symmetric".to_string(),
                ));
            }
            let mut acc = Rat::zero();
            for k in 0..n {
                acc += &(s.eta.upper(a, k).clone() * s.eta.lower(k, b).clone());
            }
            let expect = if a == b { Rat::one() } else { Rat::zero() };
            if acc != expect {
                failures.push(Failure::new(
                    format!("({}, {})", a + 1, b + 1),
                    "index positions are not mutually inverse".to_string(),
                ));
            }
        }
    }
    report.push(CheckResult::from_failures("flat_metric", failures));

    let mut failures = Vec::new();
    if s.unit_scale.is_zero() {
        failures.push(Failure::new(
            "unit scale".to_string(),
            "identity field has scale zero".to_string(),
        ));
    }
    report.push(CheckResult::from_failures("flat_unit", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let w = dv.degree(a).clone() + dv.degree(b).clone() - dv.degree(g).clone()
                    + Rat::one()
                    - dv.charge().clone();
                if !s.constants.entry(a, b, g).is_homogeneous_of(&w) {
                    failures.push(Failure::new(
                        format!("({}, {}; {})", a + 1, b + 1, g + 1),
                        format!("entry is not homogeneous of degree {w}"),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("homogeneity_product", failures));

    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if s.eta.upper(a, b).is_zero() {
                continue;
            }
            let sum = dv.degree(a).clone() + dv.degree(b).clone();
            if &sum != dv.charge() {
                failures.push(Failure::new(
                    format!("({}, {})", a + 1, b + 1),
                    format!("degrees sum to {sum}, charge is {}", dv.charge()),
                ));
            }
        }
    }
    report.push(CheckResult::from_failures("homogeneity_metric", failures));

    let mut failures = Vec::new();
    let res = s.potential.euler_residual();
    if !res.is_zero() {
        failures.push(Failure::new(
            "potential".to_string(),
            format!("grading residual has ordinary part {} and logarithmic part {}", res.p, res.tau),
        ));
    }
    report.push(CheckResult::from_failures("euler_potential", failures));

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::degree::{DegreeVector, Mode};
    use crate::algebra::poly::{CoeffKind, RingConfig};
    use crate::frobenius::structure::build_structure;
    use crate::pencil::christoffel::Christoffel;
    use crate::pencil::intersection::IntersectionForm;
    use crate::pencil::metric::ConstMetric;

    #[test]
    fn rank_two_structure_satisfies_every_axiom() {
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
        let s = build_structure(&chr, &eta).unwrap();
        let report = verify_frobenius(&s);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn broken_potential_fails_third_derivatives_only_there() {
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
        let mut s = build_structure(&chr, &eta).unwrap();
        s.potential = s.potential.scale(&Rat::from_int(2));
        let report = verify_frobenius(&s);
        assert!(!report.find("third_derivatives").unwrap().passed());
        assert!(report.find("associativity").unwrap().passed());
        assert!(report.find("unit").unwrap().passed());
    }
}
