//! Crate-wide error type.
//!
//! Errors are grouped by how a front end should react to them: bad inputs
//! (`Parameter`, `DensityUndefined`), numerical failures (`Numeric`), and
//! experiment configurations that are too large to run at desk scale
//! (`Infeasible`). The CLI maps these onto distinct process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A numerical routine failed to converge or an internal consistency
    /// check between two computation routes was violated.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The asymptotic length density h(beta) does not exist for this model;
    /// callers must use the finite expectation forms directly.
    #[error("density undefined: {0}")]
    DensityUndefined(String),

    /// The requested experiment exceeds the desk-scale guard rails
    /// (for example a codebook with more than 2^20 codewords).
    #[error("infeasible at desk scale: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
