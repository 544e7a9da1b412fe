use thiserror::Error;

/// Errors raised anywhere in the estimation pipeline.
///
/// Variants fall into three families (see [`ErrorKind`]) so that front ends
/// can map them onto distinct exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph contains a directed cycle: {}", display_cycle(.cycle))]
    Cycle { cycle: Vec<usize> },

    #[error("inconsistent orientation of edge {}-{}: {reason}", .i + 1, .j + 1)]
    Inconsistency { i: usize, j: usize, reason: String },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("singular design for variables {}", display_nodes(.nodes))]
    Singular { nodes: Vec<usize> },

    #[error("design for variables {} is ill-conditioned (condition estimate {condition:.3e})", display_nodes(.nodes))]
    IllConditioned { nodes: Vec<usize>, condition: f64 },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification of [`Error`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed, mismatched or unusable input.
    Data,
    /// Linear algebra failure (singular or ill-conditioned systems).
    Numerical,
    /// Contradictory structural evidence (cycles, orientation conflicts).
    Inconsistency,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Cycle { .. } | Error::Inconsistency { .. } => ErrorKind::Inconsistency,
            Error::Singular { .. } | Error::IllConditioned { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn display_nodes(nodes: &[usize]) -> String {
    let labels: Vec<String> = nodes.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", labels.join(", "))
}

fn display_cycle(cycle: &[usize]) -> String {
    let labels: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
    labels.join(" -> ")
}
