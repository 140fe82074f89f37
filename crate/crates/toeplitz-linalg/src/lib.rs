//! Finite sections of Toeplitz and Hankel operators, the flip W_n, and
//! overflow-safe plain and regularized determinants.

mod dense;
mod det;
mod structured;

pub use dense::{DenseMatrix, LinalgError, Role};
pub use det::{det2, log_det, matrix_norms, Det2, LogDet, MatrixNorms};
pub use structured::{
    flip_conjugate, hankel_block, hankel_product_block, toeplitz_matrix, HankelProduct,
};

pub use faer;
pub use symbol_core::Complex64;
