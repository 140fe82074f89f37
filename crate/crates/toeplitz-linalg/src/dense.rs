use faer::Mat;
use symbol_core::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("SVD did not converge for {rows}x{cols} matrix (fingerprint {fingerprint:016x})")]
    SvdNoConvergence { rows: usize, cols: usize, fingerprint: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Toeplitz(usize),
    HankelBlock,
    Generic,
}

/// Dense complex matrix tagged with the structure it was built from.
///
/// Storage is a column-major `faer::Mat`; `entries_row_major` gives the
/// row-major view.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    mat: Mat<Complex64>,
    pub role: Role,
}

impl DenseMatrix {
    pub fn new(mat: Mat<Complex64>, role: Role) -> Result<Self, LinalgError> {
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let v = mat[(i, j)];
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { mat, role })
    }

    pub(crate) fn from_trusted(mat: Mat<Complex64>, role: Role) -> Self {
        Self { mat, role }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        role: Role,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self, LinalgError> {
        Self::new(Mat::from_fn(rows, cols, f), role)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Self::from_fn(r, c, Role::Generic, |i, j| rows[i][j])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_trusted(Mat::identity(n, n), Role::Generic)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_trusted(Mat::zeros(rows, cols), Role::Generic)
    }

    pub fn diag(d: &[Complex64]) -> Self {
        Self::from_trusted(
            Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) }),
            Role::Generic,
        )
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn as_faer(&self) -> &Mat<Complex64> {
        &self.mat
    }

    pub fn into_faer(self) -> Mat<Complex64> {
        self.mat
    }

    pub fn entries_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.mat[(i, j)]);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols() != other.rows() {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Self::from_trusted(&self.mat * &other.mat, Role::Generic))
    }

    fn same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(LinalgError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Self::from_trusted(&self.mat + &other.mat, Role::Generic))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.same_shape(other)?;
        Ok(Self::from_trusted(&self.mat - &other.mat, Role::Generic))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_trusted(Mat::from_fn(self.rows(), self.cols(), |i, j| self.mat[(i, j)] * s), self.role)
    }

    pub fn transpose(&self) -> Self {
        Self::from_trusted(self.mat.transpose().to_owned(), Role::Generic)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows().min(self.cols())).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm_l2()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.norm_max()
    }

    /// Cheap content hash used in error reports.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in self.entries_row_major() {
            for w in [v.re.to_bits(), v.im.to_bits()] {
                h ^= w;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }
}
