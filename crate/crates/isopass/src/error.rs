use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument: out-of-range radius, mismatched grids, bad config values.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The two fields live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Exact LP evaluation refused: instance too large.
    #[error("LP size exceeded: {atoms} atoms > {limit} (downsample or use the kernel bound)")]
    LpTooLarge { atoms: usize, limit: usize },

    /// Inner LP solver failed (should not happen on feasible instances).
    #[error("LP solver: {0}")]
    LpSolver(String),

    /// A node of a path cannot reach the requested volume by the chosen mechanism.
    #[error("unreachable volume at node {node}: deficit {deficit:.6e}")]
    UnreachableVolume { node: usize, deficit: f64 },

    /// Companion bisection could not balance volume at a path step.
    #[error("companion bisection failed at step {step}: volume range insufficient ({detail})")]
    CompanionFailure { step: usize, detail: String },

    /// Numerical routine made no progress.
    #[error("stalled: {0}")]
    Stalled(String),

    /// Too few boundary atoms for the requested operation.
    #[error("too few atoms: have {have}, need {need}")]
    TooFewAtoms { have: usize, need: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
