use symbol_core::SymbolError;
use thiserror::Error;
use toeplitz_linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degenerate determinant in {0}: log-modulus is -inf")]
    DegenerateDeterminant(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
