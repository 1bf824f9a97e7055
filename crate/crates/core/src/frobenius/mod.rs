//! Frobenius structures built from flat pencils.
//!
//! This layer turns verified pencil data into a multiplication, a
//! potential, and a unit, and certifies the defining axioms of the
//! resulting structure as exact polynomial identities.

pub mod potential;
pub mod scaling;
pub mod structure;
pub mod verify;
