//! Flat coordinates of the derived form on an orbit chart.
//!
//! The derivative of the orbit form along the top invariant is flat for
//! the groups handled here. Its flat functions of each invariant degree
//! form a space whose dimension equals the multiplicity of that degree;
//! solving the covariant Hessian equation over a homogeneous ansatz,
//! then normalizing leading terms and the cross pairings, produces a
//! triangular polynomial chart in which the form becomes constant. The
//! chart is inverted exactly and the orbit form is rewritten in it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::linalg::Mat;
use crate::algebra::poly::GradedPoly;
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::instances::orbit::{adjugate_poly, constant_value, det_poly, saito_form};
use crate::pencil::intersection::IntersectionForm;
use crate::pencil::metric::ConstMetric;

/// A flat chart for the derived form: the coordinates in both
/// directions, the constant pairing, and the orbit form rewritten in the
/// flat chart.
#[derive(Clone, Debug)]
pub struct FlatChart {
    /// Flat coordinates as polynomials in the invariant chart.
    pub t_of_s: Vec<GradedPoly>,
    /// Invariant coordinates as polynomials in the flat chart.
    pub s_of_t: Vec<GradedPoly>,
    /// The derived form in the flat chart: constant.
    pub eta: ConstMetric,
    /// The orbit form rewritten in the flat chart.
    pub g_flat: IntersectionForm,
}

/// Solves for the flat chart of the derived form of `g` and transports
/// `g` into it.
pub fn flat_coordinates(g: &IntersectionForm) -> Result<FlatChart> {
    let ring = g.ring().clone();
    let dv = ring.degree().clone();
    let n = g.n();

    let upper = saito_form(g)?;
    let det = constant_value(&det_poly(&upper)).expect("determinant verified constant");
    let det_inv = det.inv()?;
    let adj = adjugate_poly(&upper);
    let lower: Vec<Vec<GradedPoly>> = adj
        .iter()
        .map(|row| row.iter().map(|p| p.scale(&det_inv)).collect())
        .collect();

    let half = Rat::new(1, 2).unwrap();
    let mut gamma = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = GradedPoly::zero(&ring);
                for k in 0..n {
                    if upper[l][k].is_zero() {
                        continue;
                    }
                    let first = &(&lower[j][k].derive(i) + &lower[i][k].derive(j))
                        - &lower[i][j].derive(k);
                    acc = &acc + &(&upper[l][k] * &first);
                }
                gamma[l][i][j] = acc.scale(&half);
            }
        }
    }

    let mut raw: Vec<GradedPoly> = Vec::with_capacity(n);
    for beta in 0..n {
        let target = dv.degree(beta).clone();
        let monos = dv.enumerate_monomials(&target);
        let peers: Vec<usize> = (0..n).filter(|&b| dv.degree(b) == &target).collect();

        let mut row_ids: BTreeMap<(usize, usize, Vec<u32>), usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, Rat)>> = Vec::with_capacity(monos.len());
        for e in &monos {
            let cand = GradedPoly::monomial(&ring, e.clone(), ring.lift(Rat::one()));
            let mut col = Vec::new();
            for i in 0..n {
                for j in i..n {
                    let mut r = cand.derive(i).derive(j);
                    for l in 0..n {
                        if gamma[l][i][j].is_zero() {
                            continue;
                        }
                        r = &r - &(&gamma[l][i][j] * &cand.derive(l));
                    }
                    for (exp, c) in r.terms() {
                        let next = row_ids.len();
                        let id = *row_ids
                            .entry((i, j, exp.clone()))
                            .or_insert(next);
                        col.push((id, c.as_rat().expect("rational chart")));
                    }
                }
            }
            columns.push(col);
        }
        let mut mat = Mat::zero(row_ids.len(), monos.len());
        for (cidx, col) in columns.iter().enumerate() {
            for (rid, v) in col {
                mat.set(*rid, cidx, v.clone());
            }
        }
        let null = mat.nullspace();
        if null.len() != peers.len() {
            return Err(Error::Normalization(format!(
                "flat functions of degree {target} form a space of dimension {}, expected {}",
                null.len(),
                peers.len()
            )));
        }

        let pure_pos = |b: usize| -> Result<usize> {
            let mut e = vec![0u32; n];
            e[b] = 1;
            monos
                .iter()
                .position(|m| m == &e)
                .ok_or_else(|| Error::Normalization("pure invariant monomial missing".into()))
        };
        let mut cmat = Mat::zero(peers.len(), null.len());
        let mut rhs = vec![Rat::zero(); peers.len()];
        for (r, &peer) in peers.iter().enumerate() {
            let pos = pure_pos(peer)?;
            for (c, v) in null.iter().enumerate() {
                cmat.set(r, c, v[pos].clone());
            }
            if peer == beta {
                rhs[r] = Rat::one();
            }
        }
        let combo = cmat.solve_unique(&rhs).map_err(|_| {
            Error::Normalization(
                "leading coefficients cannot be normalized within the flat functions".into(),
            )
        })?;

        let mut poly = GradedPoly::zero(&ring);
        for (vec_idx, x) in combo.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (pos, e) in monos.iter().enumerate() {
                let c = null[vec_idx][pos].clone() * x.clone();
                if !c.is_zero() {
                    poly.add_term(e.clone(), ring.lift(c));
                }
            }
        }
        raw.push(poly);
    }

    let mut pairing = Mat::zero(n, n);
    for b in 0..n {
        for c in b..n {
            let mut acc = GradedPoly::zero(&ring);
            for i in 0..n {
                for j in 0..n {
                    if upper[i][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&raw[b].derive(i) * &raw[c].derive(j)) * &upper[i][j]);
                }
            }
            match constant_value(&acc) {
                Some(v) => {
                    pairing.set(b, c, v.clone());
                    pairing.set(c, b, v);
                }
                None => {
                    return Err(Error::Normalization(format!(
                        "candidate coordinates {} and {} do not flatten the derived form",
                        b + 1,
                        c + 1
                    )));
                }
            }
        }
    }

    for b in 0..n {
        let dual = n - 1 - b;
        if b >= dual {
            continue;
        }
        let factor = pairing.at(b, dual).clone();
        if factor.is_zero() {
            return Err(Error::Normalization(format!(
                "coordinates {} and {} do not pair",
                b + 1,
                dual + 1
            )));
        }
        let inv = factor.inv()?;
        raw[dual] = raw[dual].scale(&inv);
        for k in 0..n {
            let v = pairing.at(dual, k).clone() * inv.clone();
            pairing.set(dual, k, v);
        }
        for k in 0..n {
            let v = pairing.at(k, dual).clone() * inv.clone();
            pairing.set(k, dual, v);
        }
    }

    let eta_rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| pairing.at(i, j).clone()).collect())
        .collect();
    let eta = ConstMetric::new(eta_rows)?;

    let mut s_of_t: Vec<Option<GradedPoly>> = vec![None; n];
    for beta in (0..n).rev() {
        let mut lambda = Rat::zero();
        let mut rest = GradedPoly::zero(&ring);
        let mut pure = vec![0u32; n];
        pure[beta] = 1;
        for (e, c) in raw[beta].terms() {
            if e == &pure {
                lambda = c.as_rat().expect("rational chart");
                continue;
            }
            if e.iter().take(beta + 1).any(|&k| k != 0) {
                return Err(Error::Normalization(format!(
                    "flat coordinate {} is not triangular over the invariants",
                    beta + 1
                )));
            }
            rest.add_term(e.clone(), c.clone());
        }
        if lambda.is_zero() {
            return Err(Error::Normalization(format!(
                "flat coordinate {} has no leading invariant term",
                beta + 1
            )));
        }
        let subs: Vec<GradedPoly> = (0..n)
            .map(|k| {
                if k > beta {
                    s_of_t[k].clone().expect("filled in descending order")
                } else {
                    GradedPoly::zero(&ring)
                }
            })
            .collect();
        let rest_t = rest.substitute(&subs)?;
        let tvar = GradedPoly::var(&ring, beta);
        s_of_t[beta] = Some((&tvar - &rest_t).scale(&lambda.inv()?));
    }
    let s_of_t: Vec<GradedPoly> = s_of_t.into_iter().map(|p| p.unwrap()).collect();

    for beta in 0..n {
        let forward = raw[beta].substitute(&s_of_t)?;
        let backward = s_of_t[beta].substitute(&raw)?;
        let var = GradedPoly::var(&ring, beta);
        if forward != var || backward != var {
            return Err(Error::VerificationFailed(
                "chart inversion does not round-trip".into(),
            ));
        }
    }

    let mut gt = vec![vec![GradedPoly::zero(&ring); n]; n];
    for b in 0..n {
        for c in b..n {
            let mut acc = GradedPoly::zero(&ring);
            for i in 0..n {
                for j in 0..n {
                    if g.entry(i, j).is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&raw[b].derive(i) * &raw[c].derive(j)) * g.entry(i, j));
                }
            }
            let e = acc.substitute(&s_of_t)?;
            gt[b][c] = e.clone();
            gt[c][b] = e;
        }
    }
    let g_flat = IntersectionForm::new(gt)?;

    Ok(FlatChart {
        t_of_s: raw,
        s_of_t,
        eta,
        g_flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::coxeter::{GroupKind, ReflectionChart};
    use crate::instances::orbit::orbit_metric;

    #[test]
    fn adjugate_inverts_the_derived_form() {
        let chart = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        let g = orbit_metric(&chart, 3).unwrap();
        let upper = saito_form(&g).unwrap();
        let det = constant_value(&det_poly(&upper)).unwrap();
        let adj = adjugate_poly(&upper);
        let ring = g.ring().clone();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = GradedPoly::zero(&ring);
                for k in 0..2 {
                    acc = &acc + &(&upper[i][k] * &adj[k][j]);
                }
                let expect = if i == j {
                    GradedPoly::from_rat(&ring, det.clone())
                } else {
                    GradedPoly::zero(&ring)
                };
                assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn rank_two_flat_chart_matches_known_values() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 2).unwrap();
        let g = orbit_metric(&chart, 5).unwrap();
        let flat = flat_coordinates(&g).unwrap();
        let ring = g.ring().clone();

        let s1 = GradedPoly::var(&ring, 0);
        let s2 = GradedPoly::var(&ring, 1);
        assert_eq!(flat.t_of_s[0], s1);
        assert_eq!(flat.t_of_s[1], s2.scale(&Rat::new(1, 6).unwrap()));
        assert_eq!(flat.eta.upper(0, 1), &Rat::one());
        assert_eq!(flat.eta.upper(0, 0), &Rat::zero());

        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        assert_eq!(
            flat.g_flat.entry(0, 0),
            &(&t2 * &t2).scale(&Rat::from_int(54))
        );
        assert_eq!(flat.g_flat.entry(0, 1), &t1);
        assert_eq!(
            flat.g_flat.entry(1, 1),
            &t2.scale(&Rat::new(2, 3).unwrap())
        );
    }

    #[test]
    fn type_b_flat_chart_matches_known_values() {
        let chart = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        let g = orbit_metric(&chart, 9).unwrap();
        let flat = flat_coordinates(&g).unwrap();
        let ring = g.ring().clone();

        let s1 = GradedPoly::var(&ring, 0);
        let s2 = GradedPoly::var(&ring, 1);
        let expected_t1 = &s1 - &(&s2 * &s2).scale(&Rat::new(3, 4).unwrap());
        assert_eq!(flat.t_of_s[0], expected_t1);
        assert_eq!(flat.t_of_s[1], s2.scale(&Rat::new(1, 8).unwrap()));

        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let t2cube = &(&t2 * &t2) * &t2;
        assert_eq!(
            flat.g_flat.entry(0, 0),
            &t2cube.scale(&Rat::from_int(512))
        );
        assert_eq!(flat.g_flat.entry(0, 1), &t1);
        assert_eq!(
            flat.g_flat.entry(1, 1),
            &t2.scale(&Rat::new(1, 2).unwrap())
        );
    }
}
