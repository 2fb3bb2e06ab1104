use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tournament order must be at least 1")]
    EmptyTournament,
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("both orientations of pair ({0}, {1}) present")]
    ConflictingPair(usize, usize),
    #[error("pair ({0}, {1}) has no orientation")]
    MissingPair(usize, usize),
    #[error("beats() called with the same vertex {0} twice")]
    SameVertex(usize),

    #[error("invalid modulus {p}: {reason}")]
    InvalidModulus { p: u64, reason: &'static str },
    #[error("residue {x} out of range for modulus {p}")]
    ResidueOutOfRange { x: u64, p: u64 },
    #[error("offset {0} appears more than once")]
    DuplicateOffset(u64),
    #[error("character sum needs 1 <= r < p offsets, got r = {r} for p = {p}")]
    OffsetCount { r: usize, p: u64 },

    #[error("pattern size k = {k} is not admissible for order {order}")]
    PatternTooLarge { k: usize, order: usize },
    #[error("target {0} appears more than once")]
    DuplicateTarget(usize),
    #[error("sign vector length {signs} does not match {targets} targets")]
    SignLength { targets: usize, signs: usize },
    #[error("multiplicity m must be at least 1")]
    ZeroMultiplicity,

    #[error("concept {index} has {len} entries, domain size is {domain}")]
    ConceptLength { index: usize, len: usize, domain: usize },
    #[error("concepts {0} and {1} are identical")]
    DuplicateConcept(usize, usize),
    #[error("concept index {index} out of range for class of size {size}")]
    ConceptOutOfRange { index: usize, size: usize },
    #[error("concept class is empty")]
    EmptyClass,
    #[error("teaching dimension exceeds cap {cap}")]
    CapExceeded { cap: usize },
    #[error("teacher assigns {assigned} sets for {concepts} concepts")]
    MissingAssignment { assigned: usize, concepts: usize },
    #[error("instance {instance} out of range for domain size {domain}")]
    InstanceOutOfRange { instance: usize, domain: usize },

    #[error("domain error: {0}")]
    DomainError(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
