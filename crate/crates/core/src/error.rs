use thiserror::Error;

/// Errors raised while building networks or running dynamics on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid branching: a hub needs at least 2 children, got {0}")]
    InvalidBranching(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("branch has exactly one child; extend its segment instead")]
    SingleChild,
    #[error("depth mismatch: leaves sit at columns {min}..={max}")]
    DepthMismatch { min: usize, max: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid chain length {0}: need at least 2 sites")]
    InvalidLength(usize),
    #[error("invalid coupling scale {0}: alpha must be positive and finite")]
    InvalidScale(f64),
    #[error("incomplete network: edge {parent}-{child} has no coupling")]
    IncompleteNetwork { parent: usize, child: usize },
    #[error("matrix is not symmetric: |H[{row},{col}] - H[{col},{row}]| = {gap:e}")]
    SymmetryViolation { row: usize, col: usize, gap: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid node {node} for a network of {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },
    #[error("pi-on-half freezing needs an even number of outputs, got {0}")]
    Parity(usize),
    #[error("impossible measurement branch: outcome probability {0:e}")]
    ImpossibleBranch(f64),
    #[error("events are not sorted by time")]
    UnsortedEvents,
    #[error("sample times are not ascending")]
    UnsortedSamples,
    #[error("invalid time {0}: times must be finite and non-negative")]
    InvalidTime(f64),
    #[error("unsupported W variant for {0} outputs")]
    UnsupportedVariant(usize),
    #[error("concurrence needs two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid sample count {0}: need at least 2")]
    InvalidSampleCount(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
