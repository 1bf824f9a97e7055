//! Ambient invariant theory of the reflection groups of types A and B.
//!
//! Each chart consists of a basis of basic invariant polynomials in a
//! flat ambient coordinate system, the constant contravariant form of
//! that system, and the group generators as substitutions. Construction
//! verifies invariance symbolically and algebraic independence through
//! the rank of the Jacobian at sampled rational points.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::degree::{DegreeVector, Mode};
use crate::algebra::linalg::Mat;
use crate::algebra::poly::{CoeffKind, GradedPoly, RingConfig};
use crate::algebra::rat::Rat;
use crate::algebra::rng::Rng;
use crate::error::{Error, Result};

/// Supported families of finite reflection groups.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    /// The symmetric group on `rank + 1` letters acting on the sum-zero
    /// hyperplane, parametrized by the first `rank` ambient coordinates.
    TypeA,
    /// Signed permutations of `rank` coordinates.
    TypeB,
}

/// A basis of basic invariants with the data needed to push the ambient
/// flat form onto the orbit space.
#[derive(Clone, Debug)]
pub struct ReflectionChart {
    kind: GroupKind,
    rank: usize,
    ambient: RingConfig,
    basis: Vec<GradedPoly>,
    degrees: Vec<u32>,
    ambient_form: Mat,
    generators: Vec<Vec<GradedPoly>>,
    chart_degree: DegreeVector,
}

fn poly_pow(p: &GradedPoly, k: u32) -> GradedPoly {
    let mut out = GradedPoly::one(p.ring());
    for _ in 0..k {
        out = &out * p;
    }
    out
}

/// True when the polynomial is fixed by every generator substitution.
pub fn is_invariant(p: &GradedPoly, generators: &[Vec<GradedPoly>]) -> Result<bool> {
    for g in generators {
        if &p.substitute(g)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of the Jacobian of the basis at one ambient point.
pub fn jacobian_rank_at(basis: &[GradedPoly], point: &[Rat]) -> Result<usize> {
    let rows = basis.len();
    let cols = point.len();
    let mut m = Mat::zero(rows, cols);
    for (i, b) in basis.iter().enumerate() {
        for a in 0..cols {
            m.set(i, a, b.derive(a).evaluate(point, None)?);
        }
    }
    Ok(m.rank())
}

impl ReflectionChart {
    /// Builds the chart of basic invariants for the given family and
    /// rank, verifying invariance and independence before returning.
    pub fn new(kind: GroupKind, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::UnsupportedGroup("rank must be positive".into()));
        }
        let ambient_degree = DegreeVector::new(
            vec![Rat::one(); rank],
            Rat::from_int(2),
            Mode::Polynomial,
        )?;
        let ambient = RingConfig::new(ambient_degree, CoeffKind::Rat);
        let vars: Vec<GradedPoly> = (0..rank).map(|i| GradedPoly::var(&ambient, i)).collect();

        let (basis, degrees, ambient_form, generators) = match kind {
            GroupKind::TypeA => {
                let mut minus_sum = GradedPoly::zero(&ambient);
                for v in &vars {
                    minus_sum = &minus_sum - v;
                }
                let mut coords = vars.clone();
                coords.push(minus_sum.clone());

                let mut basis = Vec::with_capacity(rank);
                let mut degrees = Vec::with_capacity(rank);
                for k in (2..=rank as u32 + 1).rev() {
                    let mut p = GradedPoly::zero(&ambient);
                    for x in &coords {
                        p = &p + &poly_pow(x, k);
                    }
                    basis.push(p);
                    degrees.push(k);
                }

                let denom = Rat::from_int(rank as i64 + 1);
                let mut form = Mat::zero(rank, rank);
                for a in 0..rank {
                    for b in 0..rank {
                        let mut v = Rat::zero() - denom.inv()?;
                        if a == b {
                            v += &Rat::one();
                        }
                        form.set(a, b, v);
                    }
                }

                let mut generators = Vec::new();
                for i in 0..rank.saturating_sub(1) {
                    let mut subs = vars.clone();
                    subs.swap(i, i + 1);
                    generators.push(subs);
                }
                let mut subs = vars.clone();
                subs[rank - 1] = minus_sum;
                generators.push(subs);

                (basis, degrees, form, generators)
            }
            GroupKind::TypeB => {
                let mut basis = Vec::with_capacity(rank);
                let mut degrees = Vec::with_capacity(rank);
                for k in (1..=rank as u32).rev() {
                    let mut p = GradedPoly::zero(&ambient);
                    for x in &vars {
                        p = &p + &poly_pow(x, 2 * k);
                    }
                    basis.push(p);
                    degrees.push(2 * k);
                }

                let mut generators = Vec::new();
                for i in 0..rank.saturating_sub(1) {
                    let mut subs = vars.clone();
                    subs.swap(i, i + 1);
                    generators.push(subs);
                }
                let mut subs = vars.clone();
                subs[rank - 1] = vars[rank - 1].neg();
                generators.push(subs);

                (basis, degrees, Mat::identity(rank), generators)
            }
        };

        for (i, b) in basis.iter().enumerate() {
            if !is_invariant(b, &generators)? {
                return Err(Error::VerificationFailed(alloc::format!(
                    "invariant {} is not fixed by the group",
                    i + 1
                )));
            }
        }

        let mut rng = Rng::new(0x0c0e7e12);
        let mut independent = false;
        for _ in 0..8 {
            let point = rng.point(rank);
            if jacobian_rank_at(&basis, &point)? == rank {
                independent = true;
                break;
            }
        }
        if !independent {
            return Err(Error::VerificationFailed(
                "invariant basis looks algebraically dependent".into(),
            ));
        }

        let top = Rat::from_int(degrees[0] as i64);
        let chart_degrees: Vec<Rat> = degrees
            .iter()
            .map(|&c| Rat::from_int(c as i64) * top.inv().unwrap())
            .collect();
        let charge = Rat::one() + Rat::from_int(2) * top.inv().unwrap();
        let chart_degree = DegreeVector::new(chart_degrees, charge, Mode::Polynomial)?;

        Ok(ReflectionChart {
            kind,
            rank,
            ambient,
            basis,
            degrees,
            ambient_form,
            generators,
            chart_degree,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_ring(&self) -> &RingConfig {
        &self.ambient
    }

    /// Basic invariants in descending ambient degree.
    pub fn basis(&self) -> &[GradedPoly] {
        &self.basis
    }

    /// Ambient degrees of the basis, descending; the first is the top
    /// degree of the group.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Constant contravariant form of the ambient chart.
    pub fn ambient_form(&self) -> &Mat {
        &self.ambient_form
    }

    /// Group generators as substitution lists over the ambient variables.
    pub fn generators(&self) -> &[Vec<GradedPoly>] {
        &self.generators
    }

    /// Degree data of the invariant chart: normalized degrees and charge.
    pub fn chart_degree(&self) -> &DegreeVector {
        &self.chart_degree
    }

    /// Values of the invariant basis at an ambient point.
    pub fn evaluate_basis(&self, point: &[Rat]) -> Result<Vec<Rat>> {
        self.basis
            .iter()
            .map(|b| b.evaluate(point, None))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_chart_is_twice_the_square() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 1).unwrap();
        assert_eq!(chart.degrees(), &[2]);
        let ring = chart.ambient_ring().clone();
        let u = GradedPoly::var(&ring, 0);
        assert_eq!(chart.basis()[0], (&u * &u).scale(&Rat::from_int(2)));
        assert_eq!(chart.ambient_form().at(0, 0), &Rat::new(1, 2).unwrap());
    }

    #[test]
    fn chart_degrees_and_charges_match_the_families() {
        let a2 = ReflectionChart::new(GroupKind::TypeA, 2).unwrap();
        assert_eq!(a2.degrees(), &[3, 2]);
        assert_eq!(a2.chart_degree().charge(), &Rat::new(5, 3).unwrap());
        let b2 = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        assert_eq!(b2.degrees(), &[4, 2]);
        assert_eq!(b2.chart_degree().charge(), &Rat::new(3, 2).unwrap());
        let a3 = ReflectionChart::new(GroupKind::TypeA, 3).unwrap();
        assert_eq!(a3.degrees(), &[4, 3, 2]);
        assert_eq!(a3.chart_degree().charge(), &Rat::new(3, 2).unwrap());
        let b3 = ReflectionChart::new(GroupKind::TypeB, 3).unwrap();
        assert_eq!(b3.degrees(), &[6, 4, 2]);
        assert_eq!(b3.chart_degree().charge(), &Rat::new(4, 3).unwrap());
    }

    #[test]
    fn coordinates_are_not_invariant() {
        let chart = ReflectionChart::new(GroupKind::TypeA, 2).unwrap();
        let u = GradedPoly::var(chart.ambient_ring(), 0);
        assert!(!is_invariant(&u, chart.generators()).unwrap());
        for b in chart.basis() {
            assert!(is_invariant(b, chart.generators()).unwrap());
        }
    }

    #[test]
    fn dependent_family_has_deficient_jacobian() {
        let chart = ReflectionChart::new(GroupKind::TypeB, 2).unwrap();
        let s2 = chart.basis()[1].clone();
        let dependent = vec![&s2 * &s2, s2];
        let mut rng = Rng::new(7);
        for _ in 0..4 {
            let p = rng.point(2);
            assert!(jacobian_rank_at(&dependent, &p).unwrap() < 2);
        }
    }
}
