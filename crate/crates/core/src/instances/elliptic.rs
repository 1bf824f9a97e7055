//! The rank-three elliptic chart and the order-by-order series oracle.
//!
//! In the elliptic chart the degenerate coordinate enters only through
//! its exponential, so everything lives over truncated series
//! coefficients. The associativity identity collapses to a third-order
//! differential relation on one series; its coefficients satisfy a
//! quadratic recursion once the constant term and the scale of the
//! linear term are fixed. The oracle solves the same problem without
//! knowing the recursion: order by order, it linearizes the full
//! associativity residual and solves for each layer, with seed data
//! supplying the order-zero correction and pinning the gauge.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::degree::{DegreeVector, Mode};
use crate::algebra::linalg::Mat;
use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};
use crate::frobenius::potential::{Potential, TauPoly};
use crate::instances::antidiagonal_metric;
use crate::pencil::intersection::IntersectionForm;
use crate::pencil::metric::ConstMetric;

/// Coefficients of the series governing the rank-three chart: constant
/// term `-1/96`, linear coefficient one, and the rest determined by the
/// quadratic recursion that associativity forces.
pub fn elliptic_coefficients(truncation: usize) -> QSeries {
    let mut a = vec![Rat::zero(); truncation];
    if !a.is_empty() {
        a[0] = Rat::new(-1, 96).unwrap();
    }
    if a.len() > 1 {
        a[1] = Rat::one();
    }
    for k in 2..a.len() {
        let mut rhs = Rat::zero();
        for i in 1..k {
            let j = k - i;
            let w = Rat::from_int(144 * (i as i64) * (j as i64) - 96 * (j as i64) * (j as i64));
            rhs += &(w * a[i].clone() * a[j].clone());
        }
        let den = Rat::from_int((k * k * (k - 1)) as i64);
        a[k] = rhs * den.inv().unwrap();
    }
    QSeries::from_coeffs(a)
}

/// The rank-three elliptic intersection form and its flat pairing, with
/// series coefficients truncated at the given order.
pub fn elliptic_rank_three(truncation: usize) -> Result<(IntersectionForm, ConstMetric)> {
    if truncation == 0 {
        return Err(Error::SeedData("truncation must be positive".into()));
    }
    let dv = DegreeVector::new(
        vec![Rat::one(), Rat::new(1, 2).unwrap(), Rat::zero()],
        Rat::one(),
        Mode::Elliptic,
    )?;
    let ring = RingConfig::new(dv, CoeffKind::Ser { truncation });
    let f = elliptic_coefficients(truncation);
    let fp = f.d_b();
    let fpp = fp.d_b();

    let ser = |s: &QSeries, num: i64| crate::algebra::coeff::Coeff::Ser(s.scale(&Rat::from_int(num)));
    let t1 = GradedPoly::var(&ring, 0);
    let t2 = GradedPoly::var(&ring, 1);

    let g11 = GradedPoly::monomial(&ring, vec![0, 4], ser(&fpp, 2));
    let g12 = GradedPoly::monomial(&ring, vec![0, 3], ser(&fp, 6));
    let g13 = t1.clone();
    let g22 = &t1 + &GradedPoly::monomial(&ring, vec![0, 2], ser(&f, 12));
    let g23 = t2.scale(&Rat::new(1, 2).unwrap());
    let g33 = GradedPoly::zero(&ring);

    let g = IntersectionForm::new(vec![
        vec![g11, g12.clone(), g13.clone()],
        vec![g12, g22, g23.clone()],
        vec![g13, g23, g33],
    ])?;
    let eta = antidiagonal_metric(3)?;
    Ok((g, eta))
}

/// Raised third derivatives of a potential: the candidate structure
/// tensor it induces.
fn raised_thirds(pot: &Potential, eta: &ConstMetric) -> Vec<Vec<Vec<GradedPoly>>> {
    let ring = pot.ring().clone();
    let n = ring.degree().n();
    let mut out = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let mut acc = GradedPoly::zero(&ring);
                for e in 0..n {
                    let ua = eta.upper(a, e);
                    if ua.is_zero() {
                        continue;
                    }
                    for m in 0..n {
                        let ub = eta.upper(b, m);
                        if ub.is_zero() {
                            continue;
                        }
                        acc = &acc
                            + &pot.third_derivative(e, m, g).scale(&(ua.clone() * ub.clone()));
                    }
                }
                out[a][b][g] = acc;
            }
        }
    }
    out
}

/// All associativity residuals of a potential, indexed by the two outer
/// slots and the antisymmetric inner pair. Every entry is zero exactly
/// when the multiplication induced by the potential associates.
pub fn wdvv_residuals(pot: &Potential, eta: &ConstMetric) -> Vec<GradedPoly> {
    let ring = pot.ring().clone();
    let n = ring.degree().n();
    let t = raised_thirds(pot, eta);
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in (b + 1)..n {
                for d in 0..n {
                    let mut res = GradedPoly::zero(&ring);
                    for s in 0..n {
                        res = &res + &(&t[a][b][s] * &t[s][c][d]);
                        res = &res - &(&t[a][c][s] * &t[s][b][d]);
                    }
                    out.push(res);
                }
            }
        }
    }
    out
}

/// Seed data for the series oracle: the order-zero correction beyond the
/// cubic normal form, and coefficients pinned at chosen orders to fix
/// the scaling gauges the equations leave free.
#[derive(Clone, Debug)]
pub struct SeriesSeed {
    /// Added to the potential at series order zero. No dependence on the
    /// first coordinate is allowed.
    pub q0_extra: GradedPoly,
    /// `(order, exponents, value)` triples fixing single coefficients.
    pub pinned: Vec<(usize, Vec<u32>, Rat)>,
}

/// The seed reproducing the rank-three chart: order-zero correction
/// `-1/96` times the fourth power of the middle coordinate, and the
/// first-order coefficient of that monomial pinned to one.
pub fn rank_three_seed(ring: &RingConfig) -> SeriesSeed {
    SeriesSeed {
        q0_extra: GradedPoly::monomial(ring, vec![0, 4], ring.lift(Rat::new(-1, 96).unwrap())),
        pinned: vec![(1, vec![0, 4], Rat::one())],
    }
}

/// The cubic normal form of the chart: the part of the potential the
/// unit axiom determines outright.
fn cubic_base(ring: &RingConfig, eta: &ConstMetric) -> TauPoly {
    let n = ring.degree().n();
    let z = n - 1;
    let half = Rat::new(1, 2).unwrap();
    let mut p = GradedPoly::zero(ring);
    for b in 1..z {
        for c in 1..z {
            let e = eta.lower(b, c);
            if e.is_zero() {
                continue;
            }
            let mut exp = vec![0u32; ring.var_count()];
            exp[0] += 1;
            exp[b] += 1;
            exp[c] += 1;
            let mut term = GradedPoly::zero(ring);
            term.add_term(exp, ring.lift(half.clone() * e.clone()));
            p = &p + &term;
        }
    }
    let mut tau = GradedPoly::zero(ring);
    let e = eta.lower(0, z);
    if !e.is_zero() {
        let mut exp = vec![0u32; ring.var_count()];
        exp[0] = 2;
        tau.add_term(exp, ring.lift(half * e.clone()));
    }
    TauPoly { p, tau }
}

/// Solves for a potential order by order in the series variable: at each
/// order the associativity residual is linear in that order's unknown
/// coefficients, and the seed pins whatever the equations leave free.
/// The result is verified in full before it is returned.
pub fn series_fixture(
    ring: &RingConfig,
    eta: &ConstMetric,
    seed: &SeriesSeed,
) -> Result<Potential> {
    let dv = ring.degree().clone();
    if dv.mode() != Mode::Elliptic {
        return Err(Error::SeedData("series oracle requires an elliptic chart".into()));
    }
    let CoeffKind::Ser { truncation } = ring.kind() else {
        return Err(Error::SeedData("series oracle requires series coefficients".into()));
    };
    let n = dv.n();
    if eta.n() != n {
        return Err(Error::ShapeMismatch(
            "flat metric size differs from the coordinate count".into(),
        ));
    }
    let weight = Rat::one() + dv.charge().clone();

    if seed.q0_extra.ring() != ring {
        return Err(Error::SeedData("order-zero correction uses a different ring".into()));
    }
    if !seed.q0_extra.is_homogeneous_of(&weight) {
        return Err(Error::SeedData(
            "order-zero correction is not homogeneous of the potential degree".into(),
        ));
    }
    for (e, c) in seed.q0_extra.terms() {
        if e[0] != 0 {
            return Err(Error::SeedData(
                "order-zero correction may not involve the first coordinate".into(),
            ));
        }
        let crate::algebra::coeff::Coeff::Ser(s) = c else {
            return Err(Error::SeedData("order-zero correction has a non-series coefficient".into()));
        };
        if (1..truncation).any(|k| !s.coeff(k).is_zero()) {
            return Err(Error::SeedData(
                "order-zero correction has terms beyond series order zero".into(),
            ));
        }
    }

    let monos: Vec<Vec<u32>> = dv
        .enumerate_monomials(&weight)
        .into_iter()
        .filter(|e| e[0] == 0)
        .collect();

    let mut fw = cubic_base(ring, eta).add(&TauPoly::from_poly(seed.q0_extra.clone()));

    for k in 1..truncation {
        let mut pinned_here: Vec<Vec<u32>> = Vec::new();
        for (ord, e, v) in &seed.pinned {
            if *ord != k {
                continue;
            }
            if !monos.contains(e) {
                return Err(Error::SeedData(format!(
                    "pinned exponent {e:?} is not an admissible monomial"
                )));
            }
            let mut q = QSeries::zero(truncation);
            q.set_coeff(k, v.clone());
            fw.p.add_term(e.clone(), crate::algebra::coeff::Coeff::Ser(q));
            pinned_here.push(e.clone());
        }
        let unknowns: Vec<Vec<u32>> = monos
            .iter()
            .filter(|e| !pinned_here.contains(e))
            .cloned()
            .collect();

        let base = wdvv_residuals(&Potential::new(fw.clone()), eta);
        let base_layers: Vec<GradedPoly> = base.iter().map(|r| r.q_layer(k)).collect();

        let mut row_ids: BTreeMap<(usize, Vec<u32>), usize> = BTreeMap::new();
        let mut cols: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(unknowns.len());
        let mut rhs_entries: Vec<(usize, Rat)> = Vec::new();
        for (ridx, r) in base_layers.iter().enumerate() {
            for (e, c) in r.terms() {
                let next = row_ids.len();
                let id = *row_ids.entry((ridx, e.clone())).or_insert(next);
                rhs_entries.push((id, -c.as_rat().expect("layer is rational")));
            }
        }
        for e in &unknowns {
            let mut q = QSeries::zero(truncation);
            q.set_coeff(k, Rat::one());
            let mut bumped = fw.clone();
            bumped.p.add_term(e.clone(), crate::algebra::coeff::Coeff::Ser(q));
            let res = wdvv_residuals(&Potential::new(bumped), eta);
            let mut col = Vec::new();
            for (ridx, r) in res.iter().enumerate() {
                let delta = &r.q_layer(k) - &base_layers[ridx];
                for (exp, c) in delta.terms() {
                    let next = row_ids.len();
                    let id = *row_ids.entry((ridx, exp.clone())).or_insert(next);
                    col.push((id, c.as_rat().expect("layer is rational")));
                }
            }
            cols.push(col);
        }

        let rows_total = row_ids.len();
        let mut mat = Mat::zero(rows_total, unknowns.len());
        for (cidx, col) in cols.iter().enumerate() {
            for (rid, v) in col {
                mat.set(*rid, cidx, v.clone());
            }
        }
        let mut rhs = vec![Rat::zero(); rows_total];
        for (rid, v) in rhs_entries {
            rhs[rid] = v;
        }
        let solution = mat.solve_unique(&rhs).map_err(|err| match err {
            Error::UnsolvableSystem(d) if d.contains("underdetermined") => Error::SeedData(
                format!("series order {k} leaves a gauge unfixed; pin more coefficients"),
            ),
            _ => Error::SeedData(format!(
                "series order {k} admits no solution; the seed data is inconsistent"
            )),
        })?;
        for (e, v) in unknowns.iter().zip(solution) {
            if v.is_zero() {
                continue;
            }
            let mut q = QSeries::zero(truncation);
            q.set_coeff(k, v);
            fw.p.add_term(e.clone(), crate::algebra::coeff::Coeff::Ser(q));
        }
    }

    let pot = Potential::new(fw).normalized();
    for r in wdvv_residuals(&pot, eta) {
        if !r.is_zero() {
            return Err(Error::VerificationFailed(
                "solved potential fails associativity".into(),
            ));
        }
    }
    if !pot.euler_residual().is_zero() {
        return Err(Error::VerificationFailed(
            "solved potential is not quasi-homogeneous".into(),
        ));
    }
    for b in 0..n {
        for g in 0..n {
            let third = pot.third_derivative(0, b, g);
            if third != GradedPoly::from_rat(ring, eta.lower(b, g).clone()) {
                return Err(Error::VerificationFailed(
                    "solved potential breaks the unit normalization".into(),
                ));
            }
        }
    }
    Ok(pot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::potential::build_potential;
    use crate::pencil::christoffel::Christoffel;

    #[test]
    fn recursion_matches_frozen_coefficients() {
        let f = elliptic_coefficients(5);
        assert_eq!(f.coeff(0), Rat::new(-1, 96).unwrap());
        assert_eq!(f.coeff(1), Rat::one());
        assert_eq!(f.coeff(2), Rat::from_int(12));
        assert_eq!(f.coeff(3), Rat::from_int(64));
        assert_eq!(f.coeff(4), Rat::from_int(448));
    }

    #[test]
    fn oracle_reproduces_the_recursion() {
        let (g, eta) = elliptic_rank_three(6).unwrap();
        let ring = g.ring().clone();
        let seed = rank_three_seed(&ring);
        let pot = series_fixture(&ring, &eta, &seed).unwrap();

        let f = elliptic_coefficients(6);
        let half = Rat::new(1, 2).unwrap();
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let mut expected_p = (&t1 * &(&t2 * &t2)).scale(&half);
        expected_p.add_term(vec![0, 4], crate::algebra::coeff::Coeff::Ser(f));
        let mut expected_tau = GradedPoly::zero(&ring);
        expected_tau.add_term(vec![2, 0], ring.lift(half));
        assert_eq!(pot.tau_poly().p, expected_p);
        assert_eq!(pot.tau_poly().tau, expected_tau);
    }

    #[test]
    fn pipeline_reproduces_the_fixture_potential() {
        let (g, eta) = elliptic_rank_three(6).unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        let from_pencil = build_potential(&chr, &eta).unwrap();
        let ring = g.ring().clone();
        let from_oracle = series_fixture(&ring, &eta, &rank_three_seed(&ring)).unwrap();
        assert_eq!(from_pencil, from_oracle);
    }

    #[test]
    fn wrong_order_zero_correction_is_rejected() {
        let (g, eta) = elliptic_rank_three(4).unwrap();
        let ring = g.ring().clone();
        let mut seed = rank_three_seed(&ring);
        seed.q0_extra = GradedPoly::monomial(&ring, vec![0, 4], ring.lift(Rat::new(-1, 97).unwrap()));
        let err = series_fixture(&ring, &eta, &seed).unwrap_err();
        assert!(matches!(err, Error::SeedData(_)));
    }

    #[test]
    fn missing_pin_leaves_the_gauge_free() {
        let (g, eta) = elliptic_rank_three(4).unwrap();
        let ring = g.ring().clone();
        let mut seed = rank_three_seed(&ring);
        seed.pinned.clear();
        let err = series_fixture(&ring, &eta, &seed).unwrap_err();
        assert!(matches!(err, Error::SeedData(_)));
    }
}
