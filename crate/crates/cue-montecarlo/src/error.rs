use symbol_core::SymbolError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error("eigensolver did not converge for n={n} (seed {seed}, sample {index})")]
    Eigen { n: usize, seed: u64, index: u64 },

    #[error("QR factorization failed for n={n} (seed {seed}, sample {index})")]
    Factorization { n: usize, seed: u64, index: u64 },

    #[error("quadrature did not reach tolerance {tol:e} on {what} (error estimate {achieved:e})")]
    Quadrature { what: &'static str, tol: f64, achieved: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
