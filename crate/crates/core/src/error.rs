use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid maze: {0}")]
    InvalidMaze(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid time model: {0}")]
    InvalidTimeModel(String),

    #[error("invalid anchor scheme: {0}")]
    InvalidAnchorScheme(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("invalid statistical input: {0}")]
    InvalidInput(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unknown table {0}")]
    UnknownTable(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
