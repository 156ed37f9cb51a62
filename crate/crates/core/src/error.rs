use thiserror::Error;

/// Errors raised by region construction, planning and simulation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid antenna configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex enumeration supports at most {max} dimensions, got {got}")]
    DimensionGuard { max: usize, got: usize },

    #[error("region is unbounded along coordinate {0}")]
    Unbounded(usize),

    #[error("scheme needs N2 < M (got M = {m}, N2 = {n2}); use no-CSIT time sharing instead")]
    RegimeViolation { m: u32, n2: u32 },

    #[error("phase-II antenna count undefined: M = {m} is below N1 = {n1}")]
    PhaseTwoUndefined { m: u32, n1: u32 },

    #[error(
        "target {point} lies outside the delayed-CSIT region: violates halfspace {index} ({halfspace}), lhs = {lhs}"
    )]
    OutsideRegion {
        point: String,
        index: usize,
        halfspace: String,
        lhs: String,
    },

    #[error("decoding condition violated at receiver {receiver}: deficit {deficit} > phase-II supply {supply}")]
    DecodingViolation { receiver: usize, deficit: u64, supply: u64 },

    #[error("phase-II budget exceeded: {needed} order-K entries > B*T = {capacity}")]
    PhaseTwoBudget { needed: u64, capacity: u64 },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("plan has zero total duration")]
    EmptyPlan,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
