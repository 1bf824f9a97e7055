//! Multivariate polynomials with graded variables and exact coefficients.
//!
//! A polynomial is a sparse map from exponent vectors to nonzero
//! coefficients, tied to a ring configuration fixing the variable degrees,
//! the coordinate mode, and the coefficient kind. In elliptic mode the last
//! coordinate is not a variable: differentiating along it applies `q d/dq`
//! to every coefficient instead of touching exponents.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::algebra::coeff::Coeff;
use crate::algebra::degree::{DegreeVector, Mode};
use crate::algebra::rat::Rat;
use crate::algebra::series::QSeries;
use crate::error::{Error, Result};

/// Coefficient kind shared by every polynomial of a ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CoeffKind {
    /// Plain rational coefficients.
    Rat,
    /// Truncated `q`-series coefficients with the given length.
    Ser { truncation: usize },
}

/// The ambient ring: variable degrees, mode, and coefficient kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingConfig {
    degree: DegreeVector,
    kind: CoeffKind,
}

impl RingConfig {
    pub fn new(degree: DegreeVector, kind: CoeffKind) -> Self {
        if let CoeffKind::Ser { truncation } = kind {
            assert!(truncation > 0, "truncation length must be positive");
        }
        RingConfig { degree, kind }
    }

    pub fn rational(degree: DegreeVector) -> Self {
        RingConfig::new(degree, CoeffKind::Rat)
    }

    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn mode(&self) -> Mode {
        self.degree.mode()
    }

    pub fn var_count(&self) -> usize {
        self.degree.var_count()
    }

    /// Embeds a rational into this ring's coefficient domain.
    pub fn lift(&self, r: Rat) -> Coeff {
        match self.kind {
            CoeffKind::Rat => Coeff::Rat(r),
            CoeffKind::Ser { truncation } => Coeff::Ser(QSeries::constant(r, truncation)),
        }
    }

    pub fn zero_coeff(&self) -> Coeff {
        self.lift(Rat::zero())
    }

    /// Checks that a coefficient belongs to this ring's domain.
    pub fn admits(&self, c: &Coeff) -> bool {
        match (self.kind, c) {
            (CoeffKind::Rat, Coeff::Rat(_)) => true,
            (CoeffKind::Ser { truncation }, Coeff::Ser(s)) => s.truncation() == truncation,
            _ => false,
        }
    }
}

/// A sparse graded polynomial over a fixed ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedPoly {
    ring: RingConfig,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl GradedPoly {
    pub fn zero(ring: &RingConfig) -> Self {
        GradedPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingConfig) -> Self {
        GradedPoly::from_rat(ring, Rat::one())
    }

    /// The constant polynomial with a rational value.
    pub fn from_rat(ring: &RingConfig, r: Rat) -> Self {
        let mut p = GradedPoly::zero(ring);
        p.add_term(alloc::vec![0; ring.var_count()], ring.lift(r));
        p
    }

    /// The constant polynomial with an arbitrary coefficient.
    pub fn from_coeff(ring: &RingConfig, c: Coeff) -> Self {
        let mut p = GradedPoly::zero(ring);
        p.add_term(alloc::vec![0; ring.var_count()], c);
        p
    }

    /// The variable `t^(idx+1)`. Panics if `idx` is not a genuine variable.
    pub fn var(ring: &RingConfig, idx: usize) -> Self {
        assert!(idx < ring.var_count(), "not a polynomial variable");
        let mut exp = alloc::vec![0; ring.var_count()];
        exp[idx] = 1;
        let mut p = GradedPoly::zero(ring);
        p.add_term(exp, ring.lift(Rat::one()));
        p
    }

    /// A single term. The exponent arity must match the ring.
    pub fn monomial(ring: &RingConfig, exp: Vec<u32>, c: Coeff) -> Self {
        let mut p = GradedPoly::zero(ring);
        p.add_term(exp, c);
        p
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of an exponent vector (zero if absent).
    pub fn coeff(&self, exp: &[u32]) -> Coeff {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.ring.zero_coeff())
    }

    /// Adds `c` to the coefficient of `exp`, dropping the term if it
    /// cancels to zero.
    pub fn add_term(&mut self, exp: Vec<u32>, c: Coeff) {
        assert_eq!(exp.len(), self.ring.var_count(), "exponent arity mismatch");
        assert!(self.ring.admits(&c), "coefficient outside the ring");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, c);
            }
            Some(old) => {
                let sum = old.add(&c);
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
        }
    }

    fn assert_same_ring(&self, rhs: &GradedPoly) {
        assert!(
            self.ring == rhs.ring,
            "polynomials from different rings combined"
        );
    }

    /// Ring-checked addition.
    pub fn checked_add(&self, rhs: &GradedPoly) -> Result<GradedPoly> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch(
                "polynomials from different rings combined".into(),
            ));
        }
        Ok(self + rhs)
    }

    pub fn neg(&self) -> GradedPoly {
        GradedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, r: &Rat) -> GradedPoly {
        if r.is_zero() {
            return GradedPoly::zero(&self.ring);
        }
        GradedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(r)))
                .collect(),
        }
    }

    /// Multiplies every coefficient by a ring coefficient.
    pub fn scale_coeff(&self, c: &Coeff) -> GradedPoly {
        assert!(self.ring.admits(c), "coefficient outside the ring");
        let mut out = GradedPoly::zero(&self.ring);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul(c));
        }
        out
    }

    /// Partial derivative along coordinate `alpha` (zero-based). In
    /// elliptic mode the last coordinate applies `q d/dq` to every
    /// coefficient.
    pub fn derive(&self, alpha: usize) -> GradedPoly {
        let n = self.ring.degree().n();
        assert!(alpha < n, "coordinate index out of range");
        if self.ring.mode() == Mode::Elliptic && alpha == n - 1 {
            let mut out = GradedPoly::zero(&self.ring);
            for (e, c) in &self.terms {
                out.add_term(e.clone(), c.d_b());
            }
            return out;
        }
        let mut out = GradedPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            let k = e[alpha];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[alpha] = k - 1;
            out.add_term(e2, c.scale(&Rat::from_int(k as i64)));
        }
        out
    }

    /// The grading operator: each term scaled by its weighted degree.
    pub fn euler(&self) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            let w = self.ring.degree().wdeg(e);
            out.add_term(e.clone(), c.scale(&w));
        }
        out
    }

    /// The sub-sum of terms with weighted degree `w`.
    pub fn homogeneous_part(&self, w: &Rat) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            if &self.ring.degree().wdeg(e) == w {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// True when every term has weighted degree `w` (vacuously for zero).
    pub fn is_homogeneous_of(&self, w: &Rat) -> bool {
        self.terms.keys().all(|e| &self.ring.degree().wdeg(e) == w)
    }

    /// The common weighted degree of all terms, if one exists (zero
    /// polynomials report none).
    pub fn homogeneous_degree(&self) -> Option<Rat> {
        let mut it = self.terms.keys();
        let first = self.ring.degree().wdeg(it.next()?);
        for e in it {
            if self.ring.degree().wdeg(e) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Evaluates the variables at a rational point, leaving the
    /// coefficient domain symbolic: a rational for rational rings, a
    /// truncated series for series rings.
    pub fn evaluate_coeff(&self, point: &[Rat]) -> Result<Coeff> {
        if point.len() != self.ring.var_count() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "point has {} entries, ring has {} variables",
                point.len(),
                self.ring.var_count()
            )));
        }
        let mut caches: Vec<Vec<Rat>> = point
            .iter()
            .map(|x| alloc::vec![Rat::one(), x.clone()])
            .collect();
        let mut acc = self.ring.zero_coeff();
        for (e, c) in &self.terms {
            let mut mono = Rat::one();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut caches[i];
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap() * &point[i];
                    cache.push(next);
                }
                mono *= &cache[k as usize];
            }
            acc = acc.add(&c.scale(&mono));
        }
        Ok(acc)
    }

    /// Evaluates at a rational point, with `q` supplied when the ring has
    /// series coefficients.
    pub fn evaluate(&self, point: &[Rat], q: Option<&Rat>) -> Result<Rat> {
        self.evaluate_coeff(point)?.eval_q(q)
    }

    /// Substitutes polynomials for the variables. All substituents must
    /// share one ring, and their count must match this ring's variables.
    /// Series coefficients can only be substituted into a ring of the same
    /// truncation.
    pub fn substitute(&self, subs: &[GradedPoly]) -> Result<GradedPoly> {
        if subs.len() != self.ring.var_count() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{} substituents for {} variables",
                subs.len(),
                self.ring.var_count()
            )));
        }
        let target = match subs.first() {
            Some(p) => p.ring().clone(),
            None => self.ring.clone(),
        };
        for p in subs {
            if p.ring() != &target {
                return Err(Error::RingMismatch(
                    "substituents from different rings".into(),
                ));
            }
        }
        let mut caches: Vec<Vec<GradedPoly>> = subs
            .iter()
            .map(|p| alloc::vec![GradedPoly::one(&target), p.clone()])
            .collect();
        let mut acc = GradedPoly::zero(&target);
        for (e, c) in &self.terms {
            let lifted = match (c, target.kind()) {
                (Coeff::Rat(r), _) => target.lift(r.clone()),
                (Coeff::Ser(s), CoeffKind::Ser { truncation })
                    if s.truncation() == truncation =>
                {
                    c.clone()
                }
                _ => {
                    return Err(Error::RingMismatch(
                        "series coefficient does not fit the target ring".into(),
                    ))
                }
            };
            let mut term = GradedPoly::from_coeff(&target, lifted);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let cache = &mut caches[i];
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap() * &subs[i];
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Shortens every series coefficient to `m` retained orders, adjusting
    /// the ring. Errors on rational-coefficient rings.
    pub fn truncate_series(&self, m: usize) -> Result<GradedPoly> {
        match self.ring.kind() {
            CoeffKind::Rat => Err(Error::RingMismatch(
                "cannot truncate rational coefficients".into(),
            )),
            CoeffKind::Ser { .. } => {
                let ring = RingConfig::new(self.ring.degree().clone(), CoeffKind::Ser {
                    truncation: m,
                });
                let mut out = GradedPoly::zero(&ring);
                for (e, c) in &self.terms {
                    if let Coeff::Ser(s) = c {
                        out.add_term(e.clone(), Coeff::Ser(s.prefix(m)));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Extracts the coefficient of `q^k` from every term, producing a
    /// rational-coefficient polynomial over the same degrees.
    pub fn q_layer(&self, k: usize) -> GradedPoly {
        let ring = RingConfig::rational(self.ring.degree().clone());
        let mut out = GradedPoly::zero(&ring);
        for (e, c) in &self.terms {
            let r = match c {
                Coeff::Rat(r) => {
                    if k == 0 {
                        r.clone()
                    } else {
                        Rat::zero()
                    }
                }
                Coeff::Ser(s) => s.coeff(k),
            };
            out.add_term(e.clone(), Coeff::Rat(r));
        }
        out
    }

    /// Rebuilds the polynomial with every coefficient mapped.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Coeff) -> Coeff) -> GradedPoly {
        let mut out = GradedPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.assert_same_ring(rhs);
        let mut out = GradedPoly::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca.mul(cb));
            }
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly::neg(self)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut head = String::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !head.is_empty() {
                    head.push('*');
                }
                if k == 1 {
                    head.push_str(&alloc::format!("t{}", i + 1));
                } else {
                    head.push_str(&alloc::format!("t{}^{}", i + 1, k));
                }
            }
            if head.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{head}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::degree::Mode;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    fn ring2() -> RingConfig {
        let dv = DegreeVector::new(vec![Rat::one(), r(2, 3)], r(5, 3), Mode::Polynomial).unwrap();
        RingConfig::rational(dv)
    }

    #[test]
    fn arithmetic_and_grading() {
        let ring = ring2();
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let p = &(&t1 * &t1) + &(&t2 * &t2).scale(&r(3, 1));
        assert_eq!(p.term_count(), 2);
        assert!(!p.is_homogeneous_of(&r(2, 1)));
        assert_eq!(
            p.homogeneous_part(&r(2, 1)),
            &t1 * &t1
        );
        let dp = p.derive(1);
        assert_eq!(dp, t2.scale(&r(6, 1)));
        let e = p.euler();
        let expected = &(&t1 * &t1).scale(&r(2, 1)) + &(&t2 * &t2).scale(&r(4, 1));
        assert_eq!(e, expected);
    }

    #[test]
    fn evaluation_and_substitution() {
        let ring = ring2();
        let t1 = GradedPoly::var(&ring, 0);
        let t2 = GradedPoly::var(&ring, 1);
        let p = &(&t1 * &t2) + &GradedPoly::from_rat(&ring, r(7, 1));
        let v = p.evaluate(&[r(2, 1), r(3, 1)], None).unwrap();
        assert_eq!(v, r(13, 1));
        let q = p.substitute(&[t2.clone(), t1.clone()]).unwrap();
        let w = q.evaluate(&[r(2, 1), r(3, 1)], None).unwrap();
        assert_eq!(w, r(13, 1));
    }

    #[test]
    fn elliptic_derivative_acts_on_series() {
        let dv = DegreeVector::new(
            vec![Rat::one(), r(1, 2), Rat::zero()],
            Rat::one(),
            Mode::Elliptic,
        )
        .unwrap();
        let ring = RingConfig::new(dv, CoeffKind::Ser { truncation: 3 });
        let f = QSeries::from_coeffs(vec![r(1, 1), r(2, 1), r(3, 1)]);
        let p = GradedPoly::monomial(&ring, vec![0, 4], Coeff::Ser(f));
        let dp = p.derive(2);
        let expect = QSeries::from_coeffs(vec![r(0, 1), r(2, 1), r(6, 1)]);
        assert_eq!(dp.coeff(&[0, 4]), Coeff::Ser(expect));
        assert_eq!(p.derive(0), GradedPoly::zero(&ring));
        assert_eq!(p.q_layer(1).coeff(&[0, 4]), Coeff::Rat(r(2, 1)));
    }
}
