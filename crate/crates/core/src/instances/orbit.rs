//! Pushing the ambient flat form onto the orbit space.
//!
//! The pairing of invariant differentials is itself invariant, hence a
//! polynomial in the basic invariants. Its expression in the invariant
//! chart is found by exact interpolation at sampled rational points and
//! then verified at held-out points, so a wrong ambient form or basis
//! cannot slip through.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::linalg::Mat;
use crate::algebra::rat::Rat;
use crate::algebra::rng::Rng;
use crate::error::{Error, Result};
use crate::instances::coxeter::ReflectionChart;
use crate::pencil::intersection::IntersectionForm;

/// Determinant of a small square matrix of polynomials by minor
/// expansion along the first row.
pub(crate) fn det_poly(m: &[Vec<GradedPoly>]) -> GradedPoly {
    let n = m.len();
    let ring = m[0][0].ring();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = GradedPoly::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GradedPoly>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &det_poly(&minor);
        if j % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Adjugate of a small square matrix of polynomials: the transpose of
/// the cofactor matrix, so that matrix times adjugate is the determinant
/// times the identity.
pub(crate) fn adjugate_poly(m: &[Vec<GradedPoly>]) -> Vec<Vec<GradedPoly>> {
    let n = m.len();
    let ring = m[0][0].ring();
    if n == 1 {
        return vec![vec![GradedPoly::one(ring)]];
    }
    let mut out = vec![vec![GradedPoly::zero(ring); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<GradedPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let d = det_poly(&minor);
            out[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    out
}

/// The constant value of a polynomial, if it is constant.
pub(crate) fn constant_value(p: &GradedPoly) -> Option<Rat> {
    if p.is_zero() {
        return Some(Rat::zero());
    }
    if p.term_count() != 1 {
        return None;
    }
    let (e, c) = p.terms().next()?;
    if e.iter().any(|&k| k != 0) {
        return None;
    }
    c.as_rat()
}

struct Sample {
    s_vals: Vec<Rat>,
    direct: Rat,
}

/// Expresses the orbit pairing of one entry in the invariant chart by
/// interpolation, given closures for sampling.
fn interpolate_entry(
    ring: &RingConfig,
    target: &Rat,
    mut sample: impl FnMut() -> Result<Sample>,
) -> Result<GradedPoly> {
    let dv = ring.degree();
    let monos = dv.enumerate_monomials(target);
    if monos.is_empty() {
        for _ in 0..3 {
            let s = sample()?;
            if !s.direct.is_zero() {
                return Err(Error::Interpolation(format!(
                    "no invariant monomial has degree {target} but the pairing is nonzero"
                )));
            }
        }
        return Ok(GradedPoly::zero(ring));
    }

    let m = monos.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let mut budget = m + 3;
    let coeffs = loop {
        while rows.len() < budget {
            let s = sample()?;
            let row: Vec<Rat> = monos
                .iter()
                .map(|e| {
                    let mut acc = Rat::one();
                    for (k, v) in e.iter().zip(&s.s_vals) {
                        acc = acc * v.powu(*k);
                    }
                    acc
                })
                .collect();
            rows.push(row);
            rhs.push(s.direct);
        }
        let mat = Mat::from_rows(rows.clone());
        match mat.solve_unique(&rhs) {
            Ok(c) => break c,
            Err(Error::UnsolvableSystem(d)) if d.contains("underdetermined") => {
                if budget > 8 * m {
                    return Err(Error::Interpolation(
                        "sampled points never separated the candidate monomials".into(),
                    ));
                }
                budget *= 2;
            }
            Err(_) => {
                return Err(Error::Interpolation(
                    "pairing values are not consistent with any polynomial of the \
                     prescribed degree"
                        .into(),
                ));
            }
        }
    };

    let mut poly = GradedPoly::zero(ring);
    for (e, c) in monos.into_iter().zip(coeffs) {
        if !c.is_zero() {
            poly.add_term(e, ring.lift(c));
        }
    }

    for _ in 0..10 {
        let s = sample()?;
        if poly.evaluate(&s.s_vals, None)? != s.direct {
            return Err(Error::Interpolation(
                "interpolated entry fails at a held-out point".into(),
            ));
        }
    }
    Ok(poly)
}

/// The orbit-space expression of the ambient flat form: entry `(i, j)`
/// is the pairing of the differentials of the `i`-th and `j`-th basic
/// invariants, written as a polynomial in the invariants themselves.
pub fn orbit_metric(chart: &ReflectionChart, seed: u64) -> Result<IntersectionForm> {
    let n = chart.rank();
    let ring = RingConfig::new(chart.chart_degree().clone(), CoeffKind::Rat);
    let dv = ring.degree().clone();
    let form = chart.ambient_form().clone();

    let dbasis: Vec<Vec<GradedPoly>> = chart
        .basis()
        .iter()
        .map(|b| (0..n).map(|a| b.derive(a)).collect())
        .collect();

    let mut rng = Rng::new(seed);
    let mut entries = vec![vec![GradedPoly::zero(&ring); n]; n];
    for i in 0..n {
        for j in i..n {
            let target = dv.degree(i).clone() + dv.degree(j).clone() + Rat::one()
                - dv.charge().clone();
            let di = &dbasis[i];
            let dj = &dbasis[j];
            let entry = interpolate_entry(&ring, &target, || {
                let p = rng.point(n);
                let s_vals = chart.evaluate_basis(&p)?;
                let mut direct = Rat::zero();
                for a in 0..n {
                    let va = di[a].evaluate(&p, None)?;
                    if va.is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        let w = form.at(a, b);
                        if w.is_zero() {
                            continue;
                        }
                        direct += &(w.clone() * va.clone() * dj[b].evaluate(&p, None)?);
                    }
                }
                Ok(Sample { s_vals, direct })
            })?;
            entries[i][j] = entry.clone();
            entries[j][i] = entry;
        }
    }
    IntersectionForm::new(entries)
}

/// Derivative of the orbit form along the top-degree invariant. For the
/// groups handled here this second form is flat; its determinant must be
/// a nonzero constant, which is verified before returning.
pub fn saito_form(g: &IntersectionForm) -> Result<Vec<Vec<GradedPoly>>> {
    let n = g.n();
    let entries: Vec<Vec<GradedPoly>> = (0..n)
        .map(|i| (0..n).map(|j| g.entry(i, j).derive(0)).collect())
        .collect();
    let det = det_poly(&entries);
    match constant_value(&det) {
        Some(v) if !v.is_zero() => Ok(entries),
        Some(_) => Err(Error::SingularMatrix(
            "derivative of the orbit form along the top invariant is singular".into(),
        )),
        None => Err(Error::VerificationFailed(
            "determinant of the derived form is not constant".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::coxeter::GroupKind;

    #[test]
    fn rank_one_orbit_metric_is_linear() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 1).unwrap();
        let g = orbit_metric(&chart, 11).unwrap();
        let ring = g.ring().clone();
        let s = GradedPoly::var(&ring, 0);
        assert_eq!(g.entry(0, 0), &s.scale(&Rat::from_int(4)));
    }

    #[test]
    fn rank_two_orbit_metric_matches_known_values() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 2).unwrap();
        let g = orbit_metric(&chart, 5).unwrap();
        let ring = g.ring().clone();
        let s1 = GradedPoly::var(&ring, 0);
        let s2 = GradedPoly::var(&ring, 1);
        assert_eq!(g.entry(0, 0), &(&s2 * &s2).scale(&Rat::new(3, 2).unwrap()));
        assert_eq!(g.entry(0, 1), &s1.scale(&Rat::from_int(6)));
        assert_eq!(g.entry(1, 1), &s2.scale(&Rat::from_int(4)));
    }

    #[test]
    fn type_b_orbit_metric_matches_known_values() {
        let chart = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        let g = orbit_metric(&chart, 23).unwrap();
        let ring = g.ring().clone();
        let s1 = GradedPoly::var(&ring, 0);
        let s2 = GradedPoly::var(&ring, 1);
        let expected00 =
            &(&s1 * &s2).scale(&Rat::from_int(24)) - &poly_cube(&s2).scale(&Rat::from_int(8));
        assert_eq!(g.entry(0, 0), &expected00);
        assert_eq!(g.entry(0, 1), &s1.scale(&Rat::from_int(8)));
        assert_eq!(g.entry(1, 1), &s2.scale(&Rat::from_int(4)));
    }

    fn poly_cube(p: &GradedPoly) -> GradedPoly {
        &(p * p) * p
    }

    #[test]
    fn interpolation_is_seed_independent() {
        let chart = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        let a = orbit_metric(&chart, 1).unwrap();
        let b = orbit_metric(&chart, 0xfeed_beef).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn derived_form_of_the_rank_two_chart_is_antidiagonal() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 2).unwrap();
        let g = orbit_metric(&chart, 5).unwrap();
        let j = saito_form(&g).unwrap();
        let ring = g.ring().clone();
        assert!(j[0][0].is_zero());
        assert_eq!(j[0][1], GradedPoly::from_rat(&ring, Rat::from_int(6)));
        assert_eq!(j[1][0], GradedPoly::from_rat(&ring, Rat::from_int(6)));
        assert!(j[1][1].is_zero());
    }
}
