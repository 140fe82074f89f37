//! Theorem-level numerics for n-dependent Toeplitz symbols: Szego constants,
//! Borodin-Okounkov and Widom identities, the approximate inverse B_n,
//! lemma-bound checks, cancellation diagnostics and convergence sweeps.

mod cancellation;
mod constants;
mod determinants;
mod error;
mod ext;
mod fit;
mod lemmas;
mod widom;

pub use cancellation::{
    cancellation_diagnostics, cancellation_sum, hankel_trace_term, hankel_trace_term_direct, trace_term_row,
    weighted_window_sum, CancellationRow, TraceTermRow,
};
pub use constants::{szego_constants, SzegoConstants};
pub use determinants::{
    bo_evaluate, bo_evaluate_symbol, coeff_tol, fredholm_bound, heine_determinant, separation_ratio, spec_phi_psi,
    szego_exponent, szego_sweep, theorem1_target, toeplitz_det_exp, BoEvaluation, ConvergenceRow, FredholmBound,
    Sweep, FREDHOLM_CAP,
};
pub use error::EngineError;
pub use ext::{analytic_exp, Ext, ExtSymbol};
pub use fit::{fit_log_rate, fit_rate, RateFit};
pub use lemmas::{fredholm_checks, lemma_bound_checks, toeplitz_hs_sq, BoundCheck};
pub use widom::{approx_inverse_dense, approx_inverse_residual, widom_check, widom_residual, ApproxInverse};
