use crate::geometry::Point2;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("segment from {0} to {1} leaves the domain")]
    NoClearance(Point2, Point2),
    #[error("empty graph: the box meets the domain in a region too thin for eps={eps}")]
    EmptyGraph { eps: f64 },
    #[error("node budget exceeded ({budget} nodes); raise eps or the budget")]
    NodeBudget { budget: usize },
    #[error("time budget exceeded")]
    TimeBudget,
    #[error("point {0} does not snap to any graph node")]
    SnapFailed(Point2),
    #[error("disconnected: endpoints lie in different graph components")]
    Disconnected,
    #[error("degenerate path: identical endpoints")]
    DegeneratePath,
    #[error("mismatched endpoints")]
    MismatchedEndpoints,
    #[error("unknown gallery id `{0}`")]
    UnknownGallery(String),
    #[error("counterexample n={0} exceeds double-precision desk-scale budget")]
    DeskScale(u32),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
