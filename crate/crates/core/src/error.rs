use thiserror::Error;

/// Errors raised by the kinematics and workspace pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("carriage state out of limits for group {group}: {detail}")]
    LimitViolation { group: usize, detail: String },

    #[error("near-singular Jacobian (condition number {condition:.3e}) at position {position:?}, euler {euler:?}")]
    Singular {
        condition: f64,
        position: [f64; 3],
        euler: [f64; 3],
    },

    #[error("degenerate configuration: leg ({group}, {leg}) has zero length")]
    Degenerate { group: usize, leg: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("voxel budget exceeded: {needed} voxels requested, budget is {budget}")]
    Budget { needed: usize, budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
