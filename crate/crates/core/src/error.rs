use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid braid letter `{0}`")]
    InvalidToken(String),
    #[error("0 is not a braid generator")]
    ZeroLetter,
    #[error("generator σ_{index} does not exist on {strands} strands")]
    LetterOutOfRange { index: usize, strands: usize },
    #[error("cannot infer the strand count of an empty braid word")]
    EmptyBraid,
    #[error("strand counts differ ({0} vs {1})")]
    StrandMismatch(usize, usize),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator index {index} is out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("incompatible coefficient groups")]
    GroupMismatch,
    #[error("incompatible dimensions: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("t must be a positive real number, got {0}")]
    NonPositiveT(f64),
    #[error("closure of the braid has {0} components, a knot is required")]
    NotAKnot(usize),
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("{method} backend cannot handle coefficient group {group}")]
    UnsupportedGroup { method: &'static str, group: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
