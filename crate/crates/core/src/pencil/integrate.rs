//! Recovering the vector potentials of a connection.
//!
//! For every coordinate slot `beta` outside the degenerate set, the
//! connection coefficients of a flat pencil are second derivatives of a
//! single homogeneous polynomial: `Gamma^{ab}_s = eta^{ae} d_e d_s f^b`.
//! Homogeneity makes the integration constructive: contracting with the
//! grading vector field turns differentiation into exact division by known
//! positive rationals. The result is verified by re-differentiating before
//! it is returned.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::poly::GradedPoly;
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::pencil::christoffel::Christoffel;
use crate::pencil::metric::ConstMetric;

/// Integrates the connection twice along the grading field, returning one
/// potential per coordinate. Slots in the degenerate set (those whose
/// rescaling weight vanishes) are returned as zero; their information
/// lives at the potential layer instead. Errors when a slot is not the
/// second-derivative family of any polynomial.
pub fn integrate_vector_potential(
    chr: &Christoffel,
    eta: &ConstMetric,
) -> Result<Vec<GradedPoly>> {
    let n = chr.n();
    let ring = chr.ring().clone();
    let dv = ring.degree().clone();
    if eta.n() != n {
        return Err(Error::ShapeMismatch(
            "companion metric dimension mismatch".into(),
        ));
    }
    let degenerate = dv.degenerate_set();
    let mut out = vec![GradedPoly::zero(&ring); n];

    for beta in 0..n {
        if degenerate.contains(&beta) {
            continue;
        }
        let mut p_sigma = Vec::with_capacity(n);
        for s in 0..n {
            let mut g_s = GradedPoly::zero(&ring);
            for e in 0..dv.var_count() {
                let mut inner = GradedPoly::zero(&ring);
                for a in 0..n {
                    if eta.lower(e, a).is_zero() {
                        continue;
                    }
                    inner = &inner + &chr.entry(a, beta, s).scale(eta.lower(e, a));
                }
                if inner.is_zero() {
                    continue;
                }
                let te = GradedPoly::var(&ring, e).scale(dv.degree(e));
                g_s = &g_s + &(&te * &inner);
            }
            let div = Rat::one() + dv.degree(beta).clone() - dv.degree(s).clone();
            if div.is_zero() {
                return Err(Error::NotIntegrable(alloc::format!(
                    "zero degree divisor at slot {} direction {}",
                    beta + 1,
                    s + 1
                )));
            }
            p_sigma.push(g_s.scale(&div.inv()?));
        }

        let mut f = GradedPoly::zero(&ring);
        for s in 0..dv.var_count() {
            if dv.degree(s).is_zero() {
                continue;
            }
            let ts = GradedPoly::var(&ring, s).scale(dv.degree(s));
            f = &f + &(&ts * &p_sigma[s]);
        }
        let total = Rat::one() + dv.degree(beta).clone();
        f = f.scale(&total.inv()?);

        for a in 0..n {
            for s in 0..n {
                let mut rhs = GradedPoly::zero(&ring);
                for e in 0..n {
                    if eta.upper(a, e).is_zero() {
                        continue;
                    }
                    rhs = &rhs + &f.derive(e).derive(s).scale(eta.upper(a, e));
                }
                if &rhs != chr.entry(a, beta, s) {
                    return Err(Error::NotIntegrable(alloc::format!(
                        "slot {} fails re-differentiation at alpha={} sigma={}",
                        beta + 1,
                        a + 1,
                        s + 1
                    )));
                }
            }
        }
        out[beta] = f;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::degree::{DegreeVector, Mode};
    use crate::algebra::poly::RingConfig;
    use crate::pencil::intersection::IntersectionForm;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    fn a2_ring() -> RingConfig {
        let dv =
            DegreeVector::new(vec![Rat::one(), r(2, 3)], r(5, 3), Mode::Polynomial).unwrap();
        RingConfig::rational(dv)
    }

    #[test]
    fn forward_oracle_roundtrip() {
        let ring = a2_ring();
        let eta = ConstMetric::new(vec![
            vec![Rat::zero(), Rat::one()],
            vec![Rat::one(), Rat::zero()],
        ])
        .unwrap();
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let f1 = &(&t1 * &t1).scale(&r(3, 1)) + &(&(&t2 * &t2) * &t2).scale(&r(9, 2));
        let f2 = (&t1 * &t2).scale(&r(-5, 7));
        let fs = [f1.clone(), f2.clone()];

        let n = 2;
        let mut coeffs = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for s in 0..n {
                    let mut acc = GradedPoly::zero(&ring);
                    for e in 0..n {
                        if eta.upper(a, e).is_zero() {
                            continue;
                        }
                        acc = &acc + &fs[b].derive(e).derive(s).scale(eta.upper(a, e));
                    }
                    coeffs[a][b][s] = acc;
                }
            }
        }
        let chr = Christoffel::new(coeffs).unwrap();
        let recovered = integrate_vector_potential(&chr, &eta).unwrap();
        assert_eq!(recovered[0], f1);
        assert_eq!(recovered[1], f2);
    }

    #[test]
    fn integrates_the_rank_two_example() {
        let ring = a2_ring();
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let g11 = (&t2 * &t2).scale(&r(54, 1));
        let g12 = t1.clone();
        let g22 = t2.scale(&r(2, 3));
        let g = IntersectionForm::new(vec![vec![g11, g12.clone()], vec![g12, g22]]).unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        let eta = g.derived_companion().unwrap();
        let fs = integrate_vector_potential(&chr, &eta).unwrap();
        assert!(fs[0].is_homogeneous_of(&r(2, 1)));
        assert!(fs[1].is_homogeneous_of(&r(5, 3)));
        assert!(!fs[0].is_zero());
        assert!(!fs[1].is_zero());
    }
}
