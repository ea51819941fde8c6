use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("a group needs at least one generator")]
    EmptyGenerators,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("{what} exceeds the bound {bound} (size {size})")]
    BoundExceeded {
        what: &'static str,
        size: u128,
        bound: u128,
    },

    #[error("element {0} does not lie in the group")]
    NotInGroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("generator images do not define a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("operation needs a nontrivial group")]
    TrivialGroup,

    #[error("group is not simple")]
    NotSimple,

    #[error("group is not solvable")]
    NotSolvable,

    #[error("simple types agree on order and fingerprint but isomorphism was not decided")]
    Ambiguous,

    #[error("tower map {level} is not a homomorphism: {reason}")]
    InvalidMap { level: usize, reason: String },

    #[error("tower map {level} is not surjective")]
    NotSurjective { level: usize },

    #[error("closed subgroup is incompatible with the tower: {0}")]
    IncompatibleSubgroup(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
