//! Flat pencils of contravariant metrics and their verification.
//!
//! The objects here are a polynomial intersection form `g`, a constant
//! companion metric obtained as its derivative along the first coordinate,
//! and the contravariant connection coefficients tying the two together.
//! The checks certify flatness of the whole family `g + lambda * eta` and
//! the compatibility identities that make the pair a flat pencil.

pub mod checks;
pub mod christoffel;
pub mod curvature;
pub mod integrate;
pub mod intersection;
pub mod metric;
