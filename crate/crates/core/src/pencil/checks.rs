//! The full verification suite for a flat pencil.
//!
//! Given an intersection form, the driver solves for its connection
//! coefficients and then certifies, identity by identity, that the form
//! and its constant companion are a flat pencil. Checks are symbolic
//! wherever the identity is polynomial in the unknowns; flatness of the
//! whole family is additionally spot-checked by assembling the classical
//! curvature tensor at random rational points for several family members,
//! through a route that never looks at the solved coefficients.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::algebra::degree::Mode;
use crate::algebra::poly::GradedPoly;
use crate::algebra::rat::Rat;
use crate::algebra::rng::Rng;
use crate::error::{Error, Result};
use crate::pencil::christoffel::Christoffel;
use crate::pencil::curvature::{classical_curvature_at, symbolic_curvature_residual};
use crate::pencil::intersection::IntersectionForm;
use crate::pencil::metric::ConstMetric;
use crate::report::{CheckReport, CheckResult, Failure};

/// Tunables for the pencil verification suite.
#[derive(Clone, Debug)]
pub struct PencilCheckOptions {
    /// Seed for the deterministic point sampler.
    pub seed: u64,
    /// Sample points per family member for the curvature spot-check.
    pub points: usize,
    /// Family parameters checked for flatness.
    pub lambdas: Vec<Rat>,
    /// Also run the full symbolic flatness residual for every family
    /// member (slower, but a complete proof rather than a spot-check).
    pub symbolic_curvature: bool,
}

impl Default for PencilCheckOptions {
    fn default() -> Self {
        PencilCheckOptions {
            seed: 0xf1a7_5eed,
            points: 20,
            lambdas: alloc::vec![
                Rat::zero(),
                Rat::one(),
                Rat::from_int(-1),
                Rat::from_int(2),
                Rat::new(1, 3).expect("nonzero denominator"),
            ],
            symbolic_curvature: false,
        }
    }
}

/// Everything the verification produces: the report plus the solved
/// objects, so later stages can reuse them.
#[derive(Clone, Debug)]
pub struct PencilCheckOutcome {
    pub report: CheckReport,
    pub christoffel: Christoffel,
    pub companion: ConstMetric,
}

fn format_point(point: &[Rat]) -> alloc::string::String {
    let mut s = alloc::string::String::from("(");
    for (i, x) in point.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&x.to_string());
    }
    s.push(')');
    s
}

/// Runs every pencil check against `g`.
///
/// The companion metric is taken from `eta` when provided and compared
/// against the derivative of `g` along the first coordinate; without an
/// explicit companion the derivative itself is used and must be a constant
/// nondegenerate metric. Errors are reserved for inputs on which the
/// checks cannot even be posed (no solvable connection, no companion);
/// every failed identity is reported, not raised.
pub fn check_pencil(
    g: &IntersectionForm,
    eta: Option<&ConstMetric>,
    opts: &PencilCheckOptions,
) -> Result<PencilCheckOutcome> {
    let n = g.n();
    let chr = Christoffel::solve(g)?;
    let mut report = CheckReport::new();

    let derived = g.derived_companion();
    let mut b_failures = Vec::new();
    let companion = match (&derived, eta) {
        (Ok(d), Some(e)) => {
            for a in 0..n {
                for b in 0..n {
                    if d.upper(a, b) != e.upper(a, b) {
                        b_failures.push(Failure::new(
                            format!("entry ({},{})", a + 1, b + 1),
                            format!(
                                "derivative gives {}, companion has {}",
                                d.upper(a, b),
                                e.upper(a, b)
                            ),
                        ));
                    }
                }
            }
            e.clone()
        }
        (Ok(d), None) => d.clone(),
        (Err(err), Some(e)) => {
            b_failures.push(Failure::new("derivative", err.to_string()));
            e.clone()
        }
        (Err(_), None) => {
            return Err(derived.unwrap_err());
        }
    };

    let mut a_failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if !g.entry(a, b).derive(0).derive(0).is_zero() {
                a_failures.push(Failure::new(
                    format!("form entry ({},{})", a + 1, b + 1),
                    "second derivative along the first coordinate is nonzero",
                ));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !chr.entry(a, b, c).derive(0).derive(0).is_zero() {
                    a_failures.push(Failure::new(
                        format!("connection entry ({},{},{})", a + 1, b + 1, c + 1),
                        "second derivative along the first coordinate is nonzero",
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("unit_linearity", a_failures));
    report.push(CheckResult::from_failures("companion_derivative", b_failures));

    let mut c_failures = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                let res = chr.torsion_residual(g, a, b, c);
                if !res.is_zero() {
                    c_failures.push(Failure::new(
                        format!("alpha={} beta={} gamma={}", a + 1, b + 1, c + 1),
                        format!("{res}"),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("torsion_identity", c_failures));

    let mut d_failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for d in b + 1..n {
                for m in 0..n {
                    let mut res = GradedPoly::zero(g.ring());
                    for s in 0..n {
                        res = &res + &(chr.entry(a, b, s) * chr.entry(s, d, m));
                        res = &res - &(chr.entry(a, d, s) * chr.entry(s, b, m));
                    }
                    if !res.is_zero() {
                        d_failures.push(Failure::new(
                            format!(
                                "alpha={} beta={} delta={} mu={}",
                                a + 1,
                                b + 1,
                                d + 1,
                                m + 1
                            ),
                            format!("{res}"),
                        ));
                    }
                }
            }
        }
    }
    report.push(CheckResult::from_failures("quadratic_identity", d_failures));

    let mut e_failures = Vec::new();
    if g.degree().mode() == Mode::Elliptic {
        let z = n - 1;
        let pair = companion.upper(0, z).clone();
        for a in 0..n {
            let expected = if a < g.degree().var_count() {
                GradedPoly::var(g.ring(), a).scale(&(pair.clone() * g.degree().degree(a).clone()))
            } else {
                GradedPoly::zero(g.ring())
            };
            if g.entry(z, a) != &expected {
                e_failures.push(Failure::new(
                    format!("form entry ({},{})", z + 1, a + 1),
                    format!("expected {expected}, found {}", g.entry(z, a)),
                ));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !chr.entry(a, z, b).is_zero() {
                    e_failures.push(Failure::new(
                        format!("connection entry ({},{},{})", a + 1, z + 1, b + 1),
                        format!("expected 0, found {}", chr.entry(a, z, b)),
                    ));
                }
                let expected = if a == b {
                    GradedPoly::from_rat(
                        g.ring(),
                        pair.clone() * g.degree().degree(a).clone(),
                    )
                } else {
                    GradedPoly::zero(g.ring())
                };
                if chr.entry(z, a, b) != &expected {
                    e_failures.push(Failure::new(
                        format!("connection entry ({},{},{})", z + 1, a + 1, b + 1),
                        format!("expected {expected}, found {}", chr.entry(z, a, b)),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("degenerate_rows", e_failures));

    let mut g_failures = Vec::new();
    for b in 0..n {
        for e in 0..n {
            for c in e + 1..n {
                let mut res = GradedPoly::zero(g.ring());
                for a in 0..n {
                    res = &res + &chr.entry(a, b, c).scale(companion.lower(e, a));
                    res = &res - &chr.entry(a, b, e).scale(companion.lower(c, a));
                }
                if !res.is_zero() {
                    g_failures.push(Failure::new(
                        format!("beta={} epsilon={} gamma={}", b + 1, e + 1, c + 1),
                        format!("{res}"),
                    ));
                }
            }
        }
    }
    report.push(CheckResult::from_failures("lowered_symmetry", g_failures));

    let mut f_failures = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                let res = chr.torsion_residual_const(&companion, a, b, c);
                if !res.is_zero() {
                    f_failures.push(Failure::new(
                        format!(
                            "companion torsion alpha={} beta={} gamma={}",
                            a + 1,
                            b + 1,
                            c + 1
                        ),
                        format!("{res}"),
                    ));
                }
            }
        }
    }
    let mut rng = Rng::new(opts.seed);
    let nvars = g.degree().var_count();
    for lambda in &opts.lambdas {
        let gm = g.pencil_member(&companion, lambda)?;
        let mut found = 0usize;
        let mut attempts = 0usize;
        while found < opts.points && attempts < opts.points.saturating_mul(50).max(50) {
            attempts += 1;
            let point = rng.point(nvars);
            let Some(tensor) = classical_curvature_at(&gm, &point)? else {
                continue;
            };
            found += 1;
            'scan: for l in 0..n {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if !tensor[l][k][i][j].is_zero() {
                                f_failures.push(Failure::new(
                                    format!(
                                        "lambda={} point={}",
                                        lambda,
                                        format_point(&point)
                                    ),
                                    format!(
                                        "curvature component ({},{},{},{}) = {}",
                                        l + 1,
                                        k + 1,
                                        i + 1,
                                        j + 1,
                                        tensor[l][k][i][j]
                                    ),
                                ));
                                break 'scan;
                            }
                        }
                    }
                }
            }
        }
        if found < opts.points {
            f_failures.push(Failure::new(
                format!("lambda={lambda}"),
                format!(
                    "only {found} of {} nonsingular sample points found",
                    opts.points
                ),
            ));
        }
        if opts.symbolic_curvature {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let res = symbolic_curvature_residual(&gm, &chr, a, b, c, d);
                            if !res.is_zero() {
                                f_failures.push(Failure::new(
                                    format!(
                                        "lambda={} indices ({},{},{},{})",
                                        lambda,
                                        a + 1,
                                        b + 1,
                                        c + 1,
                                        d + 1
                                    ),
                                    format!("{res}"),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(CheckResult::from_failures("pencil_flatness", f_failures));

    Ok(PencilCheckOutcome {
        report,
        christoffel: chr,
        companion,
    })
}

/// Convenience guard used before adopting a coordinate as the unit
/// direction: the candidate must scale invertibly and the form must be at
/// most linear along it.
pub fn unit_candidate_check(g: &IntersectionForm, candidate: &GradedPoly) -> Result<bool> {
    if candidate.ring() != g.ring() {
        return Err(Error::RingMismatch("candidate from a different ring".into()));
    }
    let invertible = candidate
        .terms()
        .next()
        .map(|(e, c)| e.iter().all(|&k| k == 0) && c.invert().is_ok())
        .unwrap_or(false)
        && candidate.term_count() == 1;
    if !invertible {
        return Ok(false);
    }
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            if !g.entry(a, b).derive(0).derive(0).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
