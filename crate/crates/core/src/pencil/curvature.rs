//! Curvature of a contravariant metric, symbolically and at sample points.
//!
//! Two independent routes are provided. The symbolic residual expresses the
//! curvature of a metric through its contravariant connection coefficients;
//! it is exactly the doubly-raised classical curvature tensor whenever the
//! metric and torsion identities hold, so its vanishing certifies flatness.
//! The point oracle ignores the solved coefficients entirely: it assembles
//! the classical curvature tensor from the metric and its first and second
//! derivatives at a rational point, giving an independent cross-check.
//!
//! The point oracle evaluates only the genuine variables and keeps the
//! coefficient domain symbolic: over a series ring every scalar stays a
//! truncated series, so the answer is exact modulo the truncation order. A
//! rational ring is the special case of truncation length one.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::coeff::Coeff;
use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::algebra::series::QSeries;
use crate::error::Result;
use crate::pencil::christoffel::Christoffel;

/// The symbolic flatness residual
/// `sum_s g^{as} (d_d Gamma^{bc}_s - d_s Gamma^{bc}_d)
///  + sum_s (Gamma^{ab}_s Gamma^{sc}_d - Gamma^{ac}_s Gamma^{sb}_d)`.
///
/// When the metric and torsion identities hold for `(gm, chr)` this equals
/// the classical curvature tensor of the covariant inverse with its first
/// two lower indices raised, so vanishing for all index choices is
/// equivalent to flatness.
pub fn symbolic_curvature_residual(
    gm: &[Vec<GradedPoly>],
    chr: &Christoffel,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> GradedPoly {
    let n = chr.n();
    let ring = chr.ring();
    let mut acc = GradedPoly::zero(ring);
    for s in 0..n {
        let grad = &chr.entry(b, c, s).derive(d) - &chr.entry(b, c, d).derive(s);
        acc = &acc + &(&gm[a][s] * &grad);
        acc = &acc + &(chr.entry(a, b, s) * chr.entry(s, c, d));
        acc = &acc - &(chr.entry(a, c, s) * chr.entry(s, b, d));
    }
    acc
}

fn ring_truncation(ring: &RingConfig) -> usize {
    match ring.kind() {
        CoeffKind::Rat => 1,
        CoeffKind::Ser { truncation } => truncation,
    }
}

fn as_series(c: Coeff, trunc: usize) -> QSeries {
    match c {
        Coeff::Rat(r) => QSeries::constant(r, trunc),
        Coeff::Ser(s) => s,
    }
}

/// Square matrices of truncated series, row-major.
fn sm_mul(a: &[QSeries], b: &[QSeries], n: usize, trunc: usize) -> Vec<QSeries> {
    let mut out = vec![QSeries::zero(trunc); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = out[i * n + j].add(&aik.mul(&b[k * n + j]));
            }
        }
    }
    out
}

fn sm_neg(a: &[QSeries]) -> Vec<QSeries> {
    a.iter().map(QSeries::neg).collect()
}

/// Exact inverse over the truncated-series ring; `None` when the matrix is
/// not a unit (its value at `q = 0` is singular).
fn sm_invert(m: &[QSeries], n: usize, trunc: usize) -> Option<Vec<QSeries>> {
    let mut a = m.to_vec();
    let mut inv = vec![QSeries::zero(trunc); n * n];
    for (i, e) in inv.iter_mut().enumerate() {
        if i % (n + 1) == 0 {
            *e = QSeries::one(trunc);
        }
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r * n + col].coeff(0).is_zero())?;
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let pinv = a[col * n + col].invert().ok()?;
        for c in 0..n {
            a[col * n + c] = a[col * n + c].mul(&pinv);
            inv[col * n + c] = inv[col * n + c].mul(&pinv);
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for c in 0..n {
                a[r * n + c] = a[r * n + c].sub(&f.mul(&a[col * n + c]));
                inv[r * n + c] = inv[r * n + c].sub(&f.mul(&inv[col * n + c]));
            }
        }
    }
    Some(inv)
}

fn eval_series_matrix(
    gm: &[Vec<GradedPoly>],
    derivs: &[usize],
    point: &[Rat],
    trunc: usize,
) -> Result<Vec<QSeries>> {
    let n = gm.len();
    let mut out = Vec::with_capacity(n * n);
    for row in gm {
        for p in row {
            let mut d = p.clone();
            for &i in derivs {
                d = d.derive(i);
            }
            out.push(as_series(d.evaluate_coeff(point)?, trunc));
        }
    }
    Ok(out)
}

struct PointFrame {
    trunc: usize,
    upper: Vec<QSeries>,
    gamma: Vec<Vec<Vec<QSeries>>>,
    dgamma: Vec<Vec<Vec<Vec<QSeries>>>>,
}

fn point_frame(gm: &[Vec<GradedPoly>], point: &[Rat]) -> Result<Option<PointFrame>> {
    let n = gm.len();
    let ring = gm[0][0].ring();
    let trunc = ring_truncation(ring);
    let ncoords = ring.degree().n();

    let upper = eval_series_matrix(gm, &[], point, trunc)?;
    let Some(lower) = sm_invert(&upper, n, trunc) else {
        return Ok(None);
    };

    let mut d_upper = Vec::with_capacity(ncoords);
    for i in 0..ncoords {
        d_upper.push(eval_series_matrix(gm, &[i], point, trunc)?);
    }
    let mut dd_upper = Vec::with_capacity(ncoords);
    for i in 0..ncoords {
        let mut row_i = Vec::with_capacity(ncoords);
        for j in 0..ncoords {
            row_i.push(eval_series_matrix(gm, &[i, j], point, trunc)?);
        }
        dd_upper.push(row_i);
    }

    let d_lower: Vec<Vec<QSeries>> = d_upper
        .iter()
        .map(|d| sm_neg(&sm_mul(&sm_mul(&lower, d, n, trunc), &lower, n, trunc)))
        .collect();
    let mut dd_lower = Vec::with_capacity(ncoords);
    for i in 0..ncoords {
        let mut row_i = Vec::with_capacity(ncoords);
        for j in 0..ncoords {
            let part1 = sm_mul(&sm_mul(&d_lower[i], &d_upper[j], n, trunc), &lower, n, trunc);
            let part2 = sm_mul(
                &sm_mul(&lower, &dd_upper[i][j], n, trunc),
                &lower,
                n,
                trunc,
            );
            let part3 = sm_mul(&sm_mul(&lower, &d_upper[j], n, trunc), &d_lower[i], n, trunc);
            let sum: Vec<QSeries> = (0..n * n)
                .map(|x| part1[x].add(&part2[x]).add(&part3[x]))
                .collect();
            row_i.push(sm_neg(&sum));
        }
        dd_lower.push(row_i);
    }

    let half = Rat::new(1, 2).expect("nonzero denominator");
    let mut gamma = vec![vec![vec![QSeries::zero(trunc); ncoords]; ncoords]; ncoords];
    for l in 0..ncoords {
        for j in 0..ncoords {
            for k in 0..ncoords {
                let mut acc = QSeries::zero(trunc);
                for m in 0..n {
                    let bracket = d_lower[j][m * n + k]
                        .add(&d_lower[k][m * n + j])
                        .sub(&d_lower[m][j * n + k]);
                    acc = acc.add(&upper[l * n + m].mul(&bracket));
                }
                gamma[l][j][k] = acc.scale(&half);
            }
        }
    }

    let mut dgamma =
        vec![vec![vec![vec![QSeries::zero(trunc); ncoords]; ncoords]; ncoords]; ncoords];
    for i in 0..ncoords {
        for l in 0..ncoords {
            for j in 0..ncoords {
                for k in 0..ncoords {
                    let mut acc = QSeries::zero(trunc);
                    for m in 0..n {
                        let bracket = d_lower[j][m * n + k]
                            .add(&d_lower[k][m * n + j])
                            .sub(&d_lower[m][j * n + k]);
                        acc = acc.add(&d_upper[i][l * n + m].mul(&bracket));
                        let dbracket = dd_lower[i][j][m * n + k]
                            .add(&dd_lower[i][k][m * n + j])
                            .sub(&dd_lower[i][m][j * n + k]);
                        acc = acc.add(&upper[l * n + m].mul(&dbracket));
                    }
                    dgamma[i][l][j][k] = acc.scale(&half);
                }
            }
        }
    }

    Ok(Some(PointFrame {
        trunc,
        upper,
        gamma,
        dgamma,
    }))
}

/// The classical curvature tensor `R^l_{kij}` of the covariant inverse of
/// `gm`, assembled from scratch at a rational point of the variables. The
/// scalars are truncated series (length one over a rational ring), so the
/// result is exact modulo the truncation. Returns `None` when the matrix
/// is singular at the point.
pub fn classical_curvature_at(
    gm: &[Vec<GradedPoly>],
    point: &[Rat],
) -> Result<Option<Vec<Vec<Vec<Vec<QSeries>>>>>> {
    let Some(frame) = point_frame(gm, point)? else {
        return Ok(None);
    };
    let ncoords = frame.gamma.len();
    let trunc = frame.trunc;
    let mut out = vec![vec![vec![vec![QSeries::zero(trunc); ncoords]; ncoords]; ncoords]; ncoords];
    for l in 0..ncoords {
        for k in 0..ncoords {
            for i in 0..ncoords {
                for j in 0..ncoords {
                    let mut acc = frame.dgamma[i][l][j][k].sub(&frame.dgamma[j][l][i][k]);
                    for s in 0..ncoords {
                        acc = acc.add(&frame.gamma[l][i][s].mul(&frame.gamma[s][j][k]));
                        acc = acc.sub(&frame.gamma[l][j][s].mul(&frame.gamma[s][i][k]));
                    }
                    out[l][k][i][j] = acc;
                }
            }
        }
    }
    Ok(Some(out))
}

/// The contravariant connection coefficients of `gm` at a point, assembled
/// classically: `Gamma^{ab}_c = -sum_s g^{as} Gamma^b_{sc}`. Returns
/// `None` when the matrix is singular at the point.
pub fn classical_christoffel_at(
    gm: &[Vec<GradedPoly>],
    point: &[Rat],
) -> Result<Option<Vec<Vec<Vec<QSeries>>>>> {
    let n = gm.len();
    let Some(frame) = point_frame(gm, point)? else {
        return Ok(None);
    };
    let trunc = frame.trunc;
    let mut out = vec![vec![vec![QSeries::zero(trunc); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc = QSeries::zero(trunc);
                for s in 0..n {
                    acc = acc.sub(&frame.upper[a * n + s].mul(&frame.gamma[b][s][c]));
                }
                out[a][b][c] = acc;
            }
        }
    }
    Ok(Some(out))
}
