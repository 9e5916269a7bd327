use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller violated an internal contract (e.g. trivial factorization of a
    /// block with more than four columns).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A correction matrix that must be rank one numerically was not.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    /// A factor entry fell below the negativity abort threshold.
    #[error("nonnegativity violation: entry {value:.3e} at ({row}, {col}) in {context}")]
    Negativity {
        context: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },

    /// The assembled factorization failed its final residual check.
    #[error(
        "construction error for n = {n}: relative residual {max_rel:.3e} at ({row}, {col}) exceeds {tol:.1e}"
    )]
    Construction {
        n: usize,
        max_rel: f64,
        row: usize,
        col: usize,
        tol: f64,
    },

    /// Matrix and factorization shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimensions(String),

    /// The lifted-system slack identity failed for a polygon vertex.
    #[error("slack identity violated at vertex {vertex}: |b - A x - U V[:,j]| = {deviation:.3e}")]
    VertexSlack { vertex: usize, deviation: f64 },

    /// A support pattern is too large for exact enumeration.
    #[error("pattern too large: {0}")]
    TooLarge(String),

    /// A dump file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
