use thiserror::Error;

/// Errors surfaced by the solvers and inversions.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad grids, non-finite values, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical procedure failed its internal consistency check
    /// (non-real residual, singular system, non-decaying tail, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A cross-check of reconstructed data against its defining relation failed.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::Numerical(_) => 2,
            Error::Verification(_) => 3,
        }
    }
}
