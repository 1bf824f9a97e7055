//! Contravariant connection coefficients of an intersection form.
//!
//! The coefficients are determined by two linear identities: the metric
//! identity, which fixes the symmetric part, and the torsion identity,
//! which ties the antisymmetric part to the form itself. Over a
//! nondegenerate form the pair has at most one solution, so the solver
//! posits the most general homogeneous polynomial of the right weighted
//! degree for every coefficient and solves the resulting exact linear
//! system, layer by layer in the series coefficients when present.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::coeff::Coeff;
use crate::algebra::linalg::Mat;
use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};
use crate::pencil::intersection::IntersectionForm;

/// The coefficients `Gamma^{ab}_c`, indexed upper-upper-lower.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Christoffel {
    coeffs: Vec<Vec<Vec<GradedPoly>>>,
}

fn exp_sub(big: &[u32], small: &[u32]) -> Option<Vec<u32>> {
    big.iter()
        .zip(small)
        .map(|(x, y)| x.checked_sub(*y))
        .collect()
}

impl Christoffel {
    /// Wraps explicit coefficients, checking shape and ring consistency.
    pub fn new(coeffs: Vec<Vec<Vec<GradedPoly>>>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("no coefficients".into()));
        }
        let ring = coeffs[0][0][0].ring().clone();
        if ring.degree().n() != n {
            return Err(Error::ShapeMismatch(
                "coefficient count does not match the coordinate count".into(),
            ));
        }
        for plane in &coeffs {
            if plane.len() != n {
                return Err(Error::ShapeMismatch("ragged coefficient array".into()));
            }
            for row in plane {
                if row.len() != n {
                    return Err(Error::ShapeMismatch("ragged coefficient array".into()));
                }
                for p in row {
                    if p.ring() != &ring {
                        return Err(Error::RingMismatch(
                            "coefficients from different rings".into(),
                        ));
                    }
                }
            }
        }
        Ok(Christoffel { coeffs })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ring(&self) -> &RingConfig {
        self.coeffs[0][0][0].ring()
    }

    /// The coefficient `Gamma^{ab}_c`.
    pub fn entry(&self, a: usize, b: usize, c: usize) -> &GradedPoly {
        &self.coeffs[a][b][c]
    }

    /// `Gamma^{ab}_c + Gamma^{ba}_c - d_c g^{ab}`; zero when the metric
    /// identity holds at these indices.
    pub fn metric_residual(&self, g: &IntersectionForm, a: usize, b: usize, c: usize) -> GradedPoly {
        let sym = &self.coeffs[a][b][c] + &self.coeffs[b][a][c];
        &sym - &g.entry(a, b).derive(c)
    }

    /// The contraction `sum_s g^{as} Gamma^{bc}_s - g^{bs} Gamma^{ac}_s`;
    /// zero when the torsion identity holds at these indices.
    pub fn torsion_residual(
        &self,
        g: &IntersectionForm,
        a: usize,
        b: usize,
        c: usize,
    ) -> GradedPoly {
        let n = self.n();
        let mut acc = GradedPoly::zero(self.ring());
        for s in 0..n {
            acc = &acc + &(g.entry(a, s) * &self.coeffs[b][c][s]);
            acc = &acc - &(g.entry(b, s) * &self.coeffs[a][c][s]);
        }
        acc
    }

    /// Same contraction against an arbitrary constant metric lifted into
    /// the ring.
    pub fn torsion_residual_const(
        &self,
        eta: &crate::pencil::metric::ConstMetric,
        a: usize,
        b: usize,
        c: usize,
    ) -> GradedPoly {
        let n = self.n();
        let mut acc = GradedPoly::zero(self.ring());
        for s in 0..n {
            acc = &acc + &self.coeffs[b][c][s].scale(eta.upper(a, s));
            acc = &acc - &self.coeffs[a][c][s].scale(eta.upper(b, s));
        }
        acc
    }

    /// Evaluates every coefficient at a rational point.
    pub fn eval_at(&self, point: &[Rat], q: Option<&Rat>) -> Result<Vec<Vec<Vec<Rat>>>> {
        let n = self.n();
        let mut out = vec![vec![vec![Rat::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out[a][b][c] = self.coeffs[a][b][c].evaluate(point, q)?;
                }
            }
        }
        Ok(out)
    }

    /// Solves the metric and torsion identities for the coefficients of
    /// `g`, requiring a unique homogeneous polynomial solution, and
    /// re-substitutes the result into both identities before returning.
    pub fn solve(g: &IntersectionForm) -> Result<Christoffel> {
        let n = g.n();
        let ring = g.ring().clone();
        let dv = ring.degree().clone();

        let all_const = (0..n).all(|a| {
            (0..n).all(|b| {
                g.entry(a, b)
                    .terms()
                    .all(|(e, _)| e.iter().all(|&k| k == 0))
            })
        });
        if all_const {
            let zero = GradedPoly::zero(&ring);
            let coeffs = vec![vec![vec![zero; n]; n]; n];
            return Christoffel::new(coeffs);
        }

        let layers = match ring.kind() {
            CoeffKind::Rat => 1,
            CoeffKind::Ser { truncation } => truncation,
        };

        let mut monos: Vec<Vec<Vec<Vec<Vec<u32>>>>> = vec![vec![vec![Vec::new(); n]; n]; n];
        let mut offsets: Vec<Vec<Vec<usize>>> = vec![vec![vec![0; n]; n]; n];
        let mut total = 0usize;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let w = dv.degree(a).clone() + dv.degree(b).clone() - dv.degree(c).clone()
                        + Rat::one()
                        - dv.charge().clone();
                    monos[a][b][c] = dv.enumerate_monomials(&w);
                    offsets[a][b][c] = total;
                    total += monos[a][b][c].len();
                }
            }
        }

        let rat_ring = RingConfig::rational(dv.clone());
        let g_layers: Vec<Vec<Vec<GradedPoly>>> = (0..layers)
            .map(|k| {
                (0..n)
                    .map(|a| (0..n).map(|b| g.entry(a, b).q_layer(k)).collect())
                    .collect()
            })
            .collect();
        let dg: Vec<Vec<Vec<GradedPoly>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).map(|c| g.entry(a, b).derive(c)).collect())
                    .collect()
            })
            .collect();

        let rat_of = |c: Coeff| -> Rat { c.as_rat().expect("rational-layer coefficient") };

        let mut gamma_layers: Vec<Vec<Vec<Vec<GradedPoly>>>> = Vec::with_capacity(layers);
        for k in 0..layers {
            let mut rows: Vec<Vec<Rat>> = Vec::new();
            let mut rhs: Vec<Rat> = Vec::new();

            for a in 0..n {
                for b in a..n {
                    for c in 0..n {
                        let rhs_poly = dg[a][b][c].q_layer(k);
                        for (i, e) in monos[a][b][c].iter().enumerate() {
                            let mut row = vec![Rat::zero(); total];
                            row[offsets[a][b][c] + i] += &Rat::one();
                            row[offsets[b][a][c] + i] += &Rat::one();
                            rows.push(row);
                            rhs.push(rat_of(rhs_poly.coeff(e)));
                        }
                    }
                }
            }

            for a in 0..n {
                for b in a + 1..n {
                    for c in 0..n {
                        let w = dv.degree(a).clone()
                            + dv.degree(b).clone()
                            + dv.degree(c).clone()
                            + Rat::from_int(2)
                            - dv.charge().clone()
                            - dv.charge().clone();
                        let support = dv.enumerate_monomials(&w);
                        if support.is_empty() {
                            continue;
                        }
                        let mut known = GradedPoly::zero(&rat_ring);
                        for j in 0..k {
                            for s in 0..n {
                                known = &known
                                    + &(&g_layers[k - j][a][s] * &gamma_layers[j][b][c][s]);
                                known = &known
                                    - &(&g_layers[k - j][b][s] * &gamma_layers[j][a][c][s]);
                            }
                        }
                        for cap_e in &support {
                            let mut row = vec![Rat::zero(); total];
                            for s in 0..n {
                                for (i, e) in monos[b][c][s].iter().enumerate() {
                                    if let Some(diff) = exp_sub(cap_e, e) {
                                        let gc = rat_of(g_layers[0][a][s].coeff(&diff));
                                        row[offsets[b][c][s] + i] += &gc;
                                    }
                                }
                                for (i, e) in monos[a][c][s].iter().enumerate() {
                                    if let Some(diff) = exp_sub(cap_e, e) {
                                        let gc = rat_of(g_layers[0][b][s].coeff(&diff));
                                        row[offsets[a][c][s] + i] -= &gc;
                                    }
                                }
                            }
                            rows.push(row);
                            rhs.push(-rat_of(known.coeff(cap_e)));
                        }
                    }
                }
            }

            let mat = if rows.is_empty() {
                Mat::zero(0, total)
            } else {
                Mat::from_rows(rows)
            };
            let x = mat.solve_unique(&rhs).map_err(|e| {
                Error::UnsolvableSystem(alloc::format!(
                    "connection coefficients at series order {k}: {e}"
                ))
            })?;

            let mut layer = vec![vec![vec![GradedPoly::zero(&rat_ring); n]; n]; n];
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut p = GradedPoly::zero(&rat_ring);
                        for (i, e) in monos[a][b][c].iter().enumerate() {
                            p.add_term(e.clone(), Coeff::Rat(x[offsets[a][b][c] + i].clone()));
                        }
                        layer[a][b][c] = p;
                    }
                }
            }
            gamma_layers.push(layer);
        }

        let mut coeffs = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut p = GradedPoly::zero(&ring);
                    for e in &monos[a][b][c] {
                        let coeff = match ring.kind() {
                            CoeffKind::Rat => {
                                gamma_layers[0][a][b][c].coeff(e)
                            }
                            CoeffKind::Ser { truncation } => {
                                let vals: Vec<Rat> = (0..truncation)
                                    .map(|k| rat_of(gamma_layers[k][a][b][c].coeff(e)))
                                    .collect();
                                Coeff::Ser(QSeries::from_coeffs(vals))
                            }
                        };
                        p.add_term(e.clone(), coeff);
                    }
                    coeffs[a][b][c] = p;
                }
            }
        }

        let chr = Christoffel::new(coeffs)?;
        chr.verify_defining_identities(g)?;
        Ok(chr)
    }

    /// Re-substitutes the coefficients into the metric and torsion
    /// identities, erroring on any nonzero residual.
    pub fn verify_defining_identities(&self, g: &IntersectionForm) -> Result<()> {
        let n = self.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !self.metric_residual(g, a, b, c).is_zero() {
                        return Err(Error::VerificationFailed(alloc::format!(
                            "metric identity residual at ({},{},{})",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                    if !self.torsion_residual(g, a, b, c).is_zero() {
                        return Err(Error::VerificationFailed(alloc::format!(
                            "torsion identity residual at ({},{},{})",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
