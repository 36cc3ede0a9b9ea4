use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("coordinate singularity: {0}")]
    Singular(String),
    #[error("time step {dt} exceeds the CFL limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("non-finite value in {field} at time {time}, grid index {index}")]
    NonFinite { time: f64, index: usize, field: String },
    #[error("state invariant violated: {0}")]
    Invariant(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
