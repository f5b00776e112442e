use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the harmonic-analysis routines.
///
/// The variants distinguish *caller* problems (bad group string, parameters
/// outside the mathematical domain, grids too coarse for the requested
/// frequencies) from *internal* invariant violations, which always indicate a
/// bug in this crate rather than in calling code.
#[derive(Debug, Error)]
pub enum Error {
    /// The group specification string or (family, rank) pair is not admissible.
    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    /// A parameter lies outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested frequency exceeds the Nyquist limit of the sampling grid.
    /// Raise the grid resolution or lower the weight cutoff.
    #[error("grid too coarse: {0}")]
    Nyquist(String),

    /// Evaluation was requested at a point where the Weyl denominator
    /// vanishes (or nearly vanishes) and the result would be meaningless.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// The operation is not defined for this configuration (e.g. lattice-sum
    /// norms on an abelian torus factor, reflections in a rank-0 Weyl group).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Underlying I/O failure while importing or exporting sampled data.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A serialized sampled-function file does not match the documented layout.
    #[error("format error: {0}")]
    Format(String),

    /// An internal invariant was violated; this is a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
