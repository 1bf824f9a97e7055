//! Exact coefficient rings, graded sparse polynomials, and supporting
//! numeric machinery.

pub mod coeff;
pub mod degree;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod rng;
pub mod series;
