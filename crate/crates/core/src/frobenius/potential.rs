//! Prepotentials, including the logarithmic slot of degenerate charts.
//!
//! A prepotential is recovered from connection data in two independent
//! ways: by integrating the per-slot vector potentials a third time along
//! the grading field, and by contracting the structure constants with the
//! grading field twice. Both routes verify themselves by exact
//! re-differentiation, and both end in the same normalization so their
//! outputs can be compared verbatim.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::degree::Mode;
use crate::algebra::poly::{GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use crate::frobenius::structure::{expected_degenerate_slot, StructureConstants};
use crate::pencil::christoffel::Christoffel;
use crate::pencil::integrate::integrate_vector_potential;
use crate::pencil::metric::ConstMetric;

/// A polynomial together with one formal multiple of the logarithmic
/// coordinate: the value `p + tau * s`, where `tau` stands for the
/// degenerate coordinate itself (the one whose exponential is the series
/// variable). Ordinary coordinates never produce such a summand; it exists
/// only at the potential layer, where the degenerate direction is
/// integrated once.
///
/// Differentiating along the degenerate coordinate acts on coefficients
/// (each series coefficient `a_k q^k` picks up the factor `k`) and lowers
/// the formal slot into the ordinary one. In polynomial mode the slot is
/// identically zero and every operation is slot-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct TauPoly {
    /// Ordinary part.
    pub p: GradedPoly,
    /// Coefficient of the logarithmic coordinate.
    pub tau: GradedPoly,
}

impl TauPoly {
    pub fn zero(ring: &RingConfig) -> Self {
        TauPoly {
            p: GradedPoly::zero(ring),
            tau: GradedPoly::zero(ring),
        }
    }

    /// Embeds an ordinary polynomial with a zero logarithmic slot.
    pub fn from_poly(p: GradedPoly) -> Self {
        let tau = GradedPoly::zero(p.ring());
        TauPoly { p, tau }
    }

    pub fn ring(&self) -> &RingConfig {
        self.p.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.tau.is_zero()
    }

    pub fn add(&self, rhs: &TauPoly) -> TauPoly {
        TauPoly {
            p: &self.p + &rhs.p,
            tau: &self.tau + &rhs.tau,
        }
    }

    pub fn sub(&self, rhs: &TauPoly) -> TauPoly {
        TauPoly {
            p: &self.p - &rhs.p,
            tau: &self.tau - &rhs.tau,
        }
    }

    pub fn scale(&self, r: &Rat) -> TauPoly {
        TauPoly {
            p: self.p.scale(r),
            tau: self.tau.scale(r),
        }
    }

    /// Multiplies both slots by an ordinary polynomial.
    pub fn mul_poly(&self, m: &GradedPoly) -> TauPoly {
        TauPoly {
            p: &self.p * m,
            tau: &self.tau * m,
        }
    }

    /// Partial derivative along coordinate `alpha` (zero-based, over all
    /// `n` coordinates). Along the degenerate coordinate the product rule
    /// gives `d(p + tau*s) = (Dp + s) + tau*(Ds)` with `D` the
    /// coefficient-level derivative.
    pub fn derive(&self, alpha: usize) -> TauPoly {
        let ring = self.p.ring();
        let n = ring.degree().n();
        if ring.mode() == Mode::Elliptic && alpha == n - 1 {
            TauPoly {
                p: &self.p.derive(alpha) + &self.tau,
                tau: self.tau.derive(alpha),
            }
        } else {
            TauPoly {
                p: self.p.derive(alpha),
                tau: self.tau.derive(alpha),
            }
        }
    }

    /// The grading operator. The logarithmic coordinate has weight zero,
    /// so the operator acts slot-wise.
    pub fn euler(&self) -> TauPoly {
        TauPoly {
            p: self.p.euler(),
            tau: self.tau.euler(),
        }
    }
}

/// A verified prepotential. The stored value is normalized: the ordinary
/// slot carries no multiple of the square of the first coordinate, which
/// fixes the one term the defining identities do not constrain.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    f: TauPoly,
}

impl Potential {
    pub fn new(f: TauPoly) -> Self {
        Potential { f }
    }

    pub fn tau_poly(&self) -> &TauPoly {
        &self.f
    }

    pub fn ring(&self) -> &RingConfig {
        self.f.ring()
    }

    /// Third partial derivative, which is always an ordinary polynomial:
    /// the logarithmic slot of a prepotential is quadratic in the first
    /// coordinate with constant coefficients, so three derivatives
    /// annihilate it.
    pub fn third_derivative(&self, a: usize, b: usize, c: usize) -> GradedPoly {
        let d = self.f.derive(a).derive(b).derive(c);
        assert!(
            d.tau.is_zero(),
            "third derivative of a prepotential has a logarithmic remainder"
        );
        d.p
    }

    /// Difference between the grading action on the potential and the
    /// scaling the charge prescribes; zero exactly when the potential is
    /// quasi-homogeneous of degree `1 + D`.
    pub fn euler_residual(&self) -> TauPoly {
        let w = Rat::one() + self.ring().degree().charge().clone();
        self.f.euler().sub(&self.f.scale(&w))
    }

    pub fn scale(&self, r: &Rat) -> Potential {
        Potential {
            f: self.f.scale(r),
        }
    }

    /// Removes the multiple of the square of the first coordinate from the
    /// ordinary slot. That term has the degree of the potential only when
    /// the charge is one, and no identity pins its coefficient; dropping
    /// it makes independently built potentials comparable verbatim.
    pub fn normalized(mut self) -> Potential {
        let vc = self.f.p.ring().var_count();
        let mut exp = vec![0u32; vc];
        exp[0] = 2;
        let c = self.f.p.coeff(&exp);
        if !c.is_zero() {
            self.f.p.add_term(exp, c.neg());
        }
        self
    }
}

/// Builds the sheet attached to the degenerate slot: one half of the
/// lowered-metric quadratic form, scaled by the pairing between the first
/// and the degenerate coordinate. Splitting off the terms containing the
/// degenerate coordinate itself yields the two slots.
fn degenerate_sheet(ring: &RingConfig, eta: &ConstMetric) -> Result<TauPoly> {
    let n = ring.degree().n();
    let z = n - 1;
    let pair = eta.upper(0, z);
    if pair.is_zero() {
        return Err(Error::InvalidMetric(format!(
            "the flat metric does not pair coordinate 1 with the degenerate coordinate {}",
            z + 1
        )));
    }
    if !eta.lower(z, z).is_zero() {
        return Err(Error::InvalidMetric(
            "the lowered flat metric has a nonzero entry at the degenerate diagonal".into(),
        ));
    }
    let half = Rat::new(1, 2).unwrap();
    let mut p = GradedPoly::zero(ring);
    for a in 0..z {
        for b in 0..z {
            let e = eta.lower(a, b);
            if e.is_zero() {
                continue;
            }
            let mut exp = vec![0u32; ring.var_count()];
            exp[a] += 1;
            exp[b] += 1;
            let c = half.clone() * pair.clone() * e.clone();
            let mut term = GradedPoly::zero(ring);
            term.add_term(exp, ring.lift(c));
            p = &p + &term;
        }
    }
    let mut tau = GradedPoly::zero(ring);
    for b in 0..z {
        let e = eta.lower(z, b);
        if e.is_zero() {
            continue;
        }
        let mut exp = vec![0u32; ring.var_count()];
        exp[b] = 1;
        let mut term = GradedPoly::zero(ring);
        term.add_term(exp, ring.lift(pair.clone() * e.clone()));
        tau = &tau + &term;
    }
    Ok(TauPoly { p, tau })
}

/// Recovers the prepotential from a connection by integrating each sheet
/// and contracting the family with the grading field. Every sheet is the
/// per-slot vector potential divided by its rescaling weight; the
/// degenerate slot, whose weight vanishes, gets the metric quadratic form
/// instead. The sheet identities and the grading law are re-verified
/// exactly before the normalized potential is returned.
pub fn build_potential(chr: &Christoffel, eta: &ConstMetric) -> Result<Potential> {
    let ring = chr.ring().clone();
    let dv = ring.degree().clone();
    let n = dv.n();
    if eta.n() != n {
        return Err(Error::ShapeMismatch(
            "flat metric size differs from the coordinate count".into(),
        ));
    }
    let degenerate = expected_degenerate_slot(&dv)?;

    let fs = integrate_vector_potential(chr, eta)?;
    let mut sheets: Vec<TauPoly> = Vec::with_capacity(n);
    for beta in 0..n {
        if degenerate == Some(beta) {
            sheets.push(degenerate_sheet(&ring, eta)?);
        } else {
            let k = dv.kappa(beta);
            sheets.push(TauPoly::from_poly(fs[beta].scale(&k.inv()?)));
        }
    }

    let weight = Rat::one() + dv.charge().clone();
    let mut f = TauPoly::zero(&ring);
    for mu in 0..n {
        let dmu = dv.degree(mu);
        if dmu.is_zero() {
            continue;
        }
        let mut row = TauPoly::zero(&ring);
        for (beta, sheet) in sheets.iter().enumerate() {
            let e = eta.lower(mu, beta);
            if e.is_zero() {
                continue;
            }
            row = row.add(&sheet.scale(e));
        }
        let tmu = GradedPoly::var(&ring, mu);
        f = f.add(&row.mul_poly(&tmu).scale(dmu));
    }
    f = f.scale(&weight.inv()?);

    for (beta, sheet) in sheets.iter().enumerate() {
        let mut lhs = TauPoly::zero(&ring);
        for mu in 0..n {
            let e = eta.upper(beta, mu);
            if e.is_zero() {
                continue;
            }
            lhs = lhs.add(&f.derive(mu).scale(e));
        }
        if lhs != *sheet {
            return Err(Error::NotIntegrable(format!(
                "raising the gradient of the assembled potential does not reproduce sheet {}",
                beta + 1
            )));
        }
    }
    let pot = Potential::new(f);
    if !pot.euler_residual().is_zero() {
        return Err(Error::NotIntegrable(
            "assembled potential is not quasi-homogeneous of the prescribed degree".into(),
        ));
    }
    Ok(pot.normalized())
}

/// Recovers the prepotential from structure constants alone: lowering
/// both upper indices gives the third-derivative tensor, and contracting
/// with the grading field three times undoes the three differentiations
/// by exact division. The slot whose division is ungoverned (both
/// directions of weight one) exists only at charge one; its second
/// derivative is forced up to a constant, which is chosen deliberately
/// and removed again by the final normalization. The result is checked by
/// exact re-differentiation against the input.
pub fn build_potential_from_structure(
    sc: &StructureConstants,
    eta: &ConstMetric,
) -> Result<Potential> {
    let ring = sc.ring().clone();
    let dv = ring.degree().clone();
    let n = dv.n();
    if eta.n() != n {
        return Err(Error::ShapeMismatch(
            "flat metric size differs from the coordinate count".into(),
        ));
    }
    let degenerate = expected_degenerate_slot(&dv)?;
    let weight = Rat::one() + dv.charge().clone();

    let mut lowered = vec![vec![vec![GradedPoly::zero(&ring); n]; n]; n];
    for s in 0..n {
        for m in 0..n {
            for g in 0..n {
                let mut acc = GradedPoly::zero(&ring);
                for a in 0..n {
                    let ea = eta.lower(s, a);
                    if ea.is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        let eb = eta.lower(m, b);
                        if eb.is_zero() {
                            continue;
                        }
                        acc = &acc + &sc.entry(a, b, g).scale(&(ea.clone() * eb.clone()));
                    }
                }
                lowered[s][m][g] = acc;
            }
        }
    }

    let mut hessian = vec![vec![TauPoly::zero(&ring); n]; n];
    for m in 0..n {
        for g in 0..n {
            let divisor = weight.clone() - dv.degree(m).clone() - dv.degree(g).clone();
            if divisor.is_zero() {
                if m != 0 || g != 0 || degenerate.is_none() {
                    return Err(Error::Normalization(format!(
                        "second derivative at slot ({}, {}) is not determined by the grading",
                        m + 1,
                        g + 1
                    )));
                }
                let z = n - 1;
                hessian[m][g] = TauPoly {
                    p: GradedPoly::one(&ring),
                    tau: GradedPoly::from_rat(&ring, eta.lower(0, z).clone()),
                };
                continue;
            }
            let mut acc = GradedPoly::zero(&ring);
            for s in 0..n {
                let ds = dv.degree(s);
                if ds.is_zero() {
                    continue;
                }
                let ts = GradedPoly::var(&ring, s);
                acc = &acc + &(&ts * &lowered[s][m][g]).scale(ds);
            }
            hessian[m][g] = TauPoly::from_poly(acc.scale(&divisor.inv()?));
        }
    }

    let mut gradient = vec![TauPoly::zero(&ring); n];
    for g in 0..n {
        let divisor = weight.clone() - dv.degree(g).clone();
        let mut acc = TauPoly::zero(&ring);
        for m in 0..n {
            let dm = dv.degree(m);
            if dm.is_zero() {
                continue;
            }
            let tm = GradedPoly::var(&ring, m);
            acc = acc.add(&hessian[m][g].mul_poly(&tm).scale(dm));
        }
        gradient[g] = acc.scale(&divisor.inv()?);
    }

    let mut f = TauPoly::zero(&ring);
    for g in 0..n {
        let dg = dv.degree(g);
        if dg.is_zero() {
            continue;
        }
        let tg = GradedPoly::var(&ring, g);
        f = f.add(&gradient[g].mul_poly(&tg).scale(dg));
    }
    let pot = Potential::new(f.scale(&weight.inv()?)).normalized();

    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                let mut raised = GradedPoly::zero(&ring);
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
                        raised = &raised
                            + &pot.third_derivative(e, m, g).scale(&(ua.clone() * ub.clone()));
                    }
                }
                if &raised != sc.entry(a, b, g) {
                    return Err(Error::NotIntegrable(format!(
                        "structure constants are not third derivatives of a potential at \
                         ({}, {}; {})",
                        a + 1,
                        b + 1,
                        g + 1
                    )));
                }
            }
        }
    }
    Ok(pot)
}
