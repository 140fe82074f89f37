//! Haar-random unitaries, linear eigenvalue statistics, and Monte Carlo
//! estimates of their characteristic functions and moments.

mod error;
mod haar;
mod mock;
mod stats;
mod unitary_qr;

pub use error::McError;
pub use haar::{ginibre, haar_unitary, sample_cue, sample_cue_at, stream, unitary_eigenphases, wrap_phase, CueSample};
pub use mock::{mock_gaussian_experiment, MockGaussianResult, ScaledStatSpec, TestFunction, QUAD_REL_TOL};
pub use stats::{
    char_fn_mc, linear_statistic, map_samples, moment_suite, statistic_from_symbol, trace_powers, truncation_sweep,
    McEstimate, MomentKind, MomentRow, TruncationRow,
};
pub use unitary_qr::eig_unitary_hessenberg;
