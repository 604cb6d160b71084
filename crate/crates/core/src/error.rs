//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. Each variant belongs to one of
//! three [`ErrorKind`]s, which the CLI maps onto process exit codes:
//! validation failures (bad input shape or violated type invariants),
//! numeric-domain failures (degenerate forms, touching curves, non-finite
//! values), and bounds failures (requests beyond configured limits).

use std::path::PathBuf;

use thiserror::Error;

/// Coarse classification of an [`Error`], used for exit-code mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or violated structural invariant.
    Validation,
    /// Input is structurally fine but numerically outside the domain.
    NumericDomain,
    /// Request exceeds a configured or hard limit.
    Bounds,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // -- validation ---------------------------------------------------------
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid isomorphism: {0}")]
    InvalidIsomorphism(String),

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {max_asym:.3e} exceeds {tol:.3e}")]
    NotSymmetric { max_asym: f64, tol: f64 },

    #[error("tensor entry index ({i}, {j}, {k}) out of range for dimension {dim}")]
    TensorIndexOutOfRange { i: usize, j: usize, k: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    // -- numeric domain -----------------------------------------------------
    #[error("degenerate quadratic form: |det Q| = {det:.3e} is below the floor {floor:.3e}")]
    DegenerateForm { det: f64, floor: f64 },

    #[error("the euclidean variant requires a positive-definite form (signature {plus}+/{minus}-)")]
    NotPositiveDefinite { plus: usize, minus: usize },

    #[error("matrix is not invertible within tolerance")]
    NotInvertible,

    #[error("curves touch or nearly touch: minimum segment separation {sep:.3e}")]
    CurvesTouch { sep: f64 },

    #[error("curve self-intersects: minimum nonadjacent segment separation {sep:.3e}")]
    SelfIntersecting { sep: f64 },

    #[error("framing offset {offset} produces a parallel that touches the curve")]
    OffsetTooLarge { offset: f64 },

    #[error("no generic projection direction found after {0} attempts")]
    NoGenericProjection(usize),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parameter outside its domain: {0}")]
    ParameterDomain(String),

    // -- bounds -------------------------------------------------------------
    #[error("loop order {requested} is out of range 1..={max}")]
    LoopOrderOutOfRange { requested: usize, max: usize },

    #[error("pairing degree {degree} exceeds the limit {max}")]
    PairingDegreeTooLarge { degree: usize, max: usize },

    #[error("pairing degree {0} is odd; only even degrees admit perfect matchings")]
    OddPairingDegree(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidGraph(_) | InvalidIsomorphism(_) | InvalidOrientation(_)
            | NotSymmetric { .. } | TensorIndexOutOfRange { .. } | DimensionMismatch(_)
            | InvalidLieData(_) | InvalidCurve(_) | InvalidConfig(_) | Io { .. }
            | Parse { .. } => ErrorKind::Validation,

            DegenerateForm { .. } | NotPositiveDefinite { .. } | NotInvertible
            | CurvesTouch { .. } | SelfIntersecting { .. } | OffsetTooLarge { .. }
            | NoGenericProjection(_) | NonFinite(_) | ParameterDomain(_) => {
                ErrorKind::NumericDomain
            }

            LoopOrderOutOfRange { .. } | PairingDegreeTooLarge { .. }
            | OddPairingDegree(_) | IndexOutOfRange { .. } => ErrorKind::Bounds,
        }
    }
}
