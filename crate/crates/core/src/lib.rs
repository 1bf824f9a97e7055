//! Exact symbolic construction and verification of Frobenius manifold
//! structures arising from flat pencils of metrics.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: exact rationals, truncated q-series coefficients, graded
//!   sparse multivariate polynomials, dense exact linear algebra, and a
//!   deterministic rational point sampler.
//! - [`pencil`]: contravariant Christoffel symbols of an intersection form,
//!   an independent pointwise Levi-Civita oracle, curvature assembly, the
//!   flat-pencil condition checks, and integration of the vector potential.
//! - [`frobenius`]: structure constants, prepotential integration, the full
//!   axiom verifier, the intersection-form round trip, and the scaling
//!   (uniqueness) action.
//! - [`instances`]: finite Coxeter orbit-space charts with flat coordinates,
//!   and an order-by-order WDVV series oracle for q-series fixtures.
//!
//! All arithmetic is exact; there is no floating point anywhere.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod frobenius;
pub mod instances;
pub mod pencil;
pub mod report;

pub use algebra::coeff::Coeff;
pub use algebra::degree::{DegreeVector, Mode};
pub use algebra::poly::{CoeffKind, GradedPoly, RingConfig};
pub use algebra::rat::Rat;
pub use algebra::series::QSeries;
pub use error::{Error, Result};
pub use frobenius::potential::{build_potential, build_potential_from_structure, Potential, TauPoly};
pub use frobenius::scaling::{match_up_to_scaling, scale_structure, MatchResult};
pub use frobenius::structure::{
    build_structure, structure_constants, FrobeniusStructure, StructureConstants,
};
pub use frobenius::verify::verify_frobenius;
pub use instances::coxeter::{GroupKind, ReflectionChart};
pub use instances::elliptic::{
    elliptic_coefficients, elliptic_rank_three, rank_three_seed, series_fixture, wdvv_residuals,
    SeriesSeed,
};
pub use instances::flat::{flat_coordinates, FlatChart};
pub use instances::orbit::{orbit_metric, saito_form};
pub use instances::{coxeter_instance, trivial_rank_two, CoxeterInstance};
pub use pencil::christoffel::Christoffel;
pub use pencil::intersection::IntersectionForm;
pub use pencil::metric::ConstMetric;
pub use report::{CheckReport, CheckResult, CheckStatus, Failure};
