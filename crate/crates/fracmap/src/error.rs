//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Result`]. The variants
//! are deliberately fine-grained: numerical code fails in ways that are
//! only diagnosable if the error says *which* invariant broke and by how
//! much, so most variants carry the offending quantity.

use thiserror::Error;

/// Alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid construction was asked for an unsupported discretisation.
    #[error(
        "unsupported grid: dimension must be 1 or 3 and points per axis even and >= 8 \
         (got n = {n}, points_per_axis = {points})"
    )]
    BadGrid { n: usize, points: usize },

    /// A Fourier multiplier produced a spectrum that is not conjugate
    /// symmetric, i.e. its inverse transform would not be a real field.
    #[error(
        "multiplier output is not conjugate-symmetric at frequency {frequency:?} \
         (relative deviation {deviation:.3e}); refusing to fake a real field"
    )]
    NonHermitianSymbol { frequency: [i64; 3], deviation: f64 },

    /// A negative-order operator was applied to a field with nonzero mean.
    #[error(
        "operation of negative order needs a mean-zero field: |mean| = {mean:.3e} \
         exceeds {limit:.3e} relative to the field size"
    )]
    MeanNotZero { mean: f64, limit: f64 },

    /// Mixed partial derivatives are only supported up to total order 8.
    #[error("derivative order {order} too high (total order must be <= {max})")]
    OrderTooHigh { order: usize, max: usize },

    /// The dyadic ladder on this grid has too few shells to be useful.
    #[error(
        "grid too small for a dyadic partition: top shell index {j_max} but at \
         least {required} is needed (use >= 16 points per axis)"
    )]
    GridTooSmall { j_max: usize, required: usize },

    /// A shell index outside `0..=j_max` was requested.
    #[error("shell index {j} out of range (partition has shells 0..={j_max})")]
    ShellOutOfRange { j: usize, j_max: usize },

    /// Two fields (or a field and a partition) live on different grids.
    #[error(
        "grid mismatch: expected n = {expected_n}, {expected_points} points per axis, \
         got n = {got_n}, {got_points}"
    )]
    GridMismatch {
        expected_n: usize,
        expected_points: usize,
        got_n: usize,
        got_points: usize,
    },

    /// A pointwise ratio was requested against an identically zero field.
    #[error("division by zero in {context}")]
    DivisionByZero { context: &'static str },

    /// An integrability exponent outside the admissible range.
    #[error("bad exponent: {detail}")]
    BadExponent { detail: String },

    /// Normalising a vector that is numerically zero.
    #[error(
        "cannot project a near-zero vector to the sphere: |w| = {magnitude:.3e} \
         is below {limit:.3e}"
    )]
    NearZeroVector { magnitude: f64, limit: f64 },

    /// Two objects whose ambient dimensions must agree do not.
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A multivector operation was applied to grades it is not defined for.
    #[error("grade error: {detail}")]
    GradeError { detail: String },

    /// A map claimed to take values on the unit sphere strays from it.
    #[error(
        "map leaves the target sphere: max ||u(x)| - 1| = {deviation:.3e} \
         exceeds {limit:.3e}"
    )]
    OffManifold { deviation: f64, limit: f64 },

    /// The frame handed to a projector constructor is not orthonormal.
    #[error(
        "frame is not orthonormal: max |<e_i, e_j> - delta_ij| = {deviation:.3e} \
         exceeds {limit:.3e}"
    )]
    NonOrthonormalFrame { deviation: f64, limit: f64 },

    /// An operation restricted to a specific domain dimension was called
    /// on the wrong one.
    #[error("operation defined only for dimension {expected}, called with {got}")]
    WrongDimension { expected: usize, got: usize },

    /// The pseudo-differential commutator requires an order-zero symbol.
    #[error("symbol is not of order zero: {detail}")]
    NonZeroOrder { detail: String },

    /// Taylor expansions are supported up to degree 16.
    #[error("expansion degree {degree} too high (must be <= {max})")]
    DegreeTooHigh { degree: usize, max: usize },

    /// An estimate id that is not in the registry.
    #[error("unknown estimate id {id:?}; run with a registered id")]
    UnknownEstimate { id: String },

    /// The line search in a flow step could not find a non-increasing step.
    #[error(
        "flow step failed: energy still increases after {backtracks} backtracks \
         (last step size {tau:.3e})"
    )]
    StepFailure { backtracks: usize, tau: f64 },

    /// Configuration file problems (unknown keys, bad values, parse errors).
    #[error("config error: {detail}")]
    ConfigError { detail: String },

    /// Wrapped I/O failure.
    #[error("i/o error: {0}")]
    IoError(#[from] std::io::Error),
}

impl Error {
    /// Helper for serde failures so callers see the offending key/position.
    pub fn config(detail: impl Into<String>) -> Self {
        Error::ConfigError {
            detail: detail.into(),
        }
    }
}
