use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid zonotope: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("tilings belong to different zonotopes ({0} vs {1})")]
    SpecMismatch(String, String),
    #[error("triangle {0} is not inclusion-minimal, flip forbidden")]
    NotFlippable(String),
    #[error("pseudoline {0} is one of the two crossing pseudolines")]
    DegenerateSide(String),
    #[error("placements do not form a tiling: {0}")]
    NotATiling(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("tilings are identical")]
    IdenticalTilings,
    #[error("proof file rejected: {0}")]
    InvalidProof(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
