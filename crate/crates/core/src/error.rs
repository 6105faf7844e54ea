use thiserror::Error;

/// Errors raised by the group machinery, the analyses and the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("generator list is empty")]
    NoGenerators,

    #[error("group order {order} exceeds cap {cap}")]
    OrderExceedsCap { order: u128, cap: u128 },

    #[error("coset index {index} exceeds cap {cap}")]
    IndexExceedsCap { index: u128, cap: u128 },

    #[error("group is not transitive")]
    IntransitiveGroup,

    #[error("group is primitive")]
    PrimitiveGroup,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("subgroup generator {0} is not a member of the group")]
    NotASubgroup(String),

    #[error("element {0} is not central in the group")]
    NotCentral(String),

    #[error("element does not have prime order {prime}")]
    NotPrimeOrder { prime: u64 },

    #[error("degree {0} is odd; no regular dihedral subgroup is possible")]
    OddDegree(usize),

    #[error("arc ({0}, {0}) lies on the diagonal")]
    DiagonalArc(usize),

    #[error("orbital graph is not connected")]
    DisconnectedGraph,

    #[error("group does not act regularly")]
    NotRegular,

    #[error("connection set contains the identity")]
    IdentityInS,

    #[error("element {0} is not in the group")]
    NotInGroup(String),

    #[error("group has no regular dihedral subgroup")]
    NotDGroup,

    #[error("group is primitive; classification needs an imprimitive group")]
    PrimitiveInput,

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("unsupported field order {0}")]
    UnsupportedOrder(u64),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
