use thiserror::Error;

/// Errors shared across the crate.
///
/// `DivisionByZero` and `NonPositivePartitionFunction` are semantic results,
/// not crashes: hitting a zero of the partition function means the fugacity
/// sits on (or past) the boundary of the admissible disc.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate polymer `{0}`")]
    DuplicatePolymer(String),
    #[error("unknown polymer `{0}`")]
    UnknownPolymer(String),
    #[error("pair references unknown polymer `{0}`")]
    UnknownPolymerInPair(String),
    #[error("incompatibility graph is not connected")]
    DisconnectedSystem,
    #[error("polymer vector is empty")]
    EmptyVector,
    #[error("enumeration size {size} exceeds cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("graph is not a connected spanning subgraph")]
    Disconnected,
    #[error("partition function vanished (fugacity on the boundary of the admissible disc)")]
    DivisionByZero,
    #[error("partition function is not positive")]
    NonPositivePartitionFunction,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("scheme needs polymer labels but none are available")]
    MissingLabels,
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("internal: non-tree edge ({0},{1}) matched no partition case")]
    UnclassifiedEdge(usize, usize),
    #[error("operation not defined for this scheme kind")]
    WrongKind,
    #[error("polymer `{0}` has no incompatible neighbour distinct from itself")]
    NoIncompatibleNeighbour(String),
    #[error("tree-operator truncation cap {0} reached with non-zero weight")]
    TruncationExceeded(usize),
    #[error("behaviour vector is missing escape pair ({0},{1})")]
    UnknownPair(String, String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("ratio mu/phi(mu) is not unimodal on the bracket")]
    NonUnimodal,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
