use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size must be positive")]
    EmptyGround,

    #[error("ground set size {0} exceeds the supported maximum of {max}", max = crate::mask::MAX_GROUND)]
    GroundTooLarge(usize),

    #[error("element {element} out of range for ground set [{n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("cardinality {r} exceeds ground set size {n}")]
    CardinalityTooLarge { r: usize, n: usize },

    #[error("undefined for empty family")]
    EmptyFamily,

    #[error("family is not uniform")]
    NonUniform,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("malformed header at line {line}: {reason}")]
    MalformedHeader { line: usize, reason: String },

    #[error("malformed member at line {line}: {reason}")]
    MalformedMember { line: usize, reason: String },

    #[error("unsorted line {line}")]
    UnsortedLine { line: usize },

    #[error("duplicate member at line {line}")]
    DuplicateMember { line: usize },

    #[error("feasibility cap exceeded: universe has {members} members, cap is {cap}")]
    FeasibilityCapExceeded { members: String, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
