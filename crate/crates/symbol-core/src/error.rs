use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolError {
    #[error("schedule collision at n={n}: indices {j1} and {j2} both map to frequency {k}")]
    ScheduleCollision { n: usize, j1: i64, j2: i64, k: i64 },

    #[error("schedule for index {j} at n={n} gives non-positive frequency {k}")]
    NonPositiveFrequency { n: usize, j: i64, k: i64 },

    #[error("no frequency rule for index {j}")]
    MissingRule { j: i64 },

    #[error("frequency table for index {j} has no entry for n={n}")]
    MissingTableEntry { j: i64, n: usize },

    #[error("alpha index 0 is not allowed")]
    ZeroIndex,

    #[error("hermitian spec violated at index {j}: alpha_{{-j}} is not conj(alpha_j)")]
    NotHermitian { j: i64 },

    #[error("n must be at least 1")]
    ZeroN,

    #[error("series has coefficients at non-positive frequency {k}; only k > 0 allowed")]
    NonPositiveSupport { k: i64 },

    #[error("tolerance {tol:e} not reached: aliasing bound {achieved:e} at grid cap {cap}")]
    Truncation { tol: f64, achieved: f64, cap: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
