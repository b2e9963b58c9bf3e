use thiserror::Error;

#[derive(Debug, Error)]
pub enum EqError {
    #[error("group too large: order exceeds cap {cap}")]
    GroupTooLarge { cap: usize },
    #[error("inconsistent permutation degrees: {0}")]
    InconsistentDegree(String),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("unknown group or table: {0}")]
    Unknown(String),
    #[error("character inconsistent with table")]
    CharacterInconsistent,
    #[error("not a character")]
    NotACharacter,
    #[error("table does not match group: {0}")]
    TableMismatch(String),
    #[error("irreducible {0} is not of real type")]
    NotRealType(String),
    #[error("reversibility violated: mu_j != mu_(m-j) for component {0}")]
    SymmetryViolation(String),
    #[error("linearization not scalar on an isotypic component: {0}")]
    NotScalar(String),
    #[error("s = {s} rejected: resonant mode {k} = {odd}*{s}")]
    ResonantS { s: u32, k: u32, odd: u32 },
    #[error("spectral degeneracy: 0 in spectrum at modes {0:?}")]
    Degenerate(Vec<u32>),
    #[error("recurrence inconsistency: {0}")]
    Recurrence(String),
    #[error("lattice mismatch")]
    LatticeMismatch,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, EqError>;
