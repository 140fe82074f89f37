//! Symbols of the form `f_n(z) = sum_j alpha_j z^{k_j(n)} / sqrt(min(|k_j(n)|, n))`
//! represented as finite Laurent series with certified truncation errors.

mod error;
mod exp;
mod majorant;
mod norms;
mod series;
mod spec;

pub use error::SymbolError;
pub use exp::{auto_range, default_tol, exp_symbol, phi_psi, poisson_tail, GRID_CAP};
pub use majorant::{exp_power_series, majorant_coeff_bound};
pub use norms::{norms, shifted_hankel_hs_sq, NormBundle};
pub use series::{project_half, split_symbol, Half, LaurentSeries, Split};
pub use spec::{build_symbol, FrequencyRule, SymbolSpec};

pub use num_complex::Complex64;
