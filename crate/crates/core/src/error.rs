use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("coloring is partial ({uncolored} uncolored edges)")]
    PartialColoring { uncolored: u64 },

    #[error("finishing stopped after {resamples} resamples with {remaining_events} bad events left")]
    NotFinished {
        resamples: u64,
        remaining_events: usize,
    },

    #[error("search budget of {budget} nodes exhausted (best known: {lower}..={upper:?})")]
    BudgetExceeded {
        budget: u64,
        lower: u32,
        upper: Option<u32>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
