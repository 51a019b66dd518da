use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a divisor class: {0}")]
    NotADivisor(String),

    #[error("gluing matrix needs weight cap >= 2, got {0}")]
    CapTooSmall(u32),

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("degree {0} is missing from the invariant table")]
    MissingDegree(u32),

    #[error("tail polynomial for degree {0} has not been computed")]
    MissingTail(u32),

    #[error("degree {degree}: y200-derivative of order {order} reads below the stored tail (needs order >= {min})")]
    OutsideTail { degree: u32, order: u32, min: u32 },

    #[error("degree {degree}: invariant {label} = {value} is not an integer")]
    NonIntegral {
        degree: u32,
        label: &'static str,
        value: String,
    },

    #[error("degree {degree}: tail polynomial is malformed: {reason}")]
    MalformedTail { degree: u32, reason: String },

    #[error("divisor prefactors do not cancel for split {d1}+{d2}")]
    PrefactorMismatch { d1: u32, d2: u32 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("condition count r + s + 2t = {got} but degree {degree} needs {want}")]
    DimensionMismatch { degree: u32, got: u32, want: u32 },

    #[error("unsupported profile (needs {points} >= 3d-3 = {min_points} point conditions); missing invariants: {}", missing.join(", "))]
    UnsupportedProfile {
        points: u32,
        min_points: u32,
        missing: Vec<String>,
    },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("cache validation failed: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
