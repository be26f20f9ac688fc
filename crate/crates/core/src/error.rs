use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("domain construction error: {0}")]
    Domain(String),

    #[error("dyadic lattice error: {0}")]
    Dyadic(String),

    #[error("whitney decomposition error: {0}")]
    Whitney(String),

    #[error("corona construction error: {0}")]
    Corona(String),

    #[error("sobolev solver error: {0}")]
    Sobolev(String),

    #[error("extension error: {0}")]
    Extension(String),

    #[error("layer potential solver error: {0}")]
    Solve(String),

    #[error("experiment error: {0}")]
    Experiment(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
