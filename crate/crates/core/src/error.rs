//! Error type shared across the library.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while building or checking a structure.
///
/// Mathematical check failures are not errors: they are recorded in reports.
/// Errors signal misuse (bad indices, mismatched rings) or inputs outside the
/// constructions' preconditions (non-integrable connections, singular
/// systems, malformed degree data).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two values from incompatible ring configurations were combined.
    RingMismatch(String),
    /// A coordinate index outside 1..=n was used.
    IndexOutOfRange { index: usize, n: usize },
    /// A series-coefficient evaluation was requested without a value for q.
    MissingQValue,
    /// A matrix that must be invertible is singular.
    SingularMatrix(String),
    /// A degree vector violates the mode's invariants.
    InvalidDegreeVector(String),
    /// A constant metric is not symmetric or not invertible.
    InvalidMetric(String),
    /// An input tensor entry is not homogeneous of the required degree.
    Inhomogeneous(String),
    /// A linear system was inconsistent or rank-deficient.
    UnsolvableSystem(String),
    /// A connection failed the exact re-differentiation check.
    NotIntegrable(String),
    /// The set of degenerate indices differs from what the mode requires.
    DegenerateIndexSet(String),
    /// A degenerate column of the Christoffel tensor is nonzero.
    NonzeroDegenerateColumn { alpha: usize, gamma: usize },
    /// The scaling action requires a nonzero constant.
    ZeroScale,
    /// Tensor shapes or dimensions do not agree.
    ShapeMismatch(String),
    /// Unsupported Coxeter type or rank.
    UnsupportedGroup(String),
    /// Interpolation of an orbit metric failed.
    Interpolation(String),
    /// Flat-coordinate normalization failed.
    Normalization(String),
    /// Series-oracle seed data is inconsistent or leaves a gauge unfixed.
    SeedData(String),
    /// An exact internal verification failed for an input assumed valid.
    VerificationFailed(String),
    /// A value could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch(d) => write!(f, "ring configuration mismatch: {d}"),
            Error::IndexOutOfRange { index, n } => {
                write!(f, "coordinate index {index} out of range 1..={n}")
            }
            Error::MissingQValue => write!(f, "series evaluation requires a value for q"),
            Error::SingularMatrix(d) => write!(f, "singular matrix: {d}"),
            Error::InvalidDegreeVector(d) => write!(f, "invalid degree vector: {d}"),
            Error::InvalidMetric(d) => write!(f, "invalid constant metric: {d}"),
            Error::Inhomogeneous(d) => write!(f, "inhomogeneous input: {d}"),
            Error::UnsolvableSystem(d) => write!(f, "unsolvable linear system: {d}"),
            Error::NotIntegrable(d) => write!(f, "connection is not integrable: {d}"),
            Error::DegenerateIndexSet(d) => write!(f, "degenerate index set mismatch: {d}"),
            Error::NonzeroDegenerateColumn { alpha, gamma } => write!(
                f,
                "degenerate Christoffel column is nonzero at alpha={alpha}, gamma={gamma}"
            ),
            Error::ZeroScale => write!(f, "scaling constant must be nonzero"),
            Error::ShapeMismatch(d) => write!(f, "shape mismatch: {d}"),
            Error::UnsupportedGroup(d) => write!(f, "unsupported group: {d}"),
            Error::Interpolation(d) => write!(f, "interpolation failed: {d}"),
            Error::Normalization(d) => write!(f, "normalization failed: {d}"),
            Error::SeedData(d) => write!(f, "invalid seed data: {d}"),
            Error::VerificationFailed(d) => write!(f, "internal verification failed: {d}"),
            Error::Parse(d) => write!(f, "parse error: {d}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
