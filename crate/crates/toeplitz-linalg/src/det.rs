use std::f64::consts::PI;

use symbol_core::Complex64;

use crate::dense::{DenseMatrix, LinalgError};

/// det = exp(log_modulus) * e^{i phase}, phase in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_modulus: f64,
    pub phase: f64,
}

pub(crate) fn wrap_phase(p: f64) -> f64 {
    let mut x = p.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

impl LogDet {
    pub const ONE: LogDet = LogDet { log_modulus: 0.0, phase: 0.0 };

    pub fn new(log_modulus: f64, phase: f64) -> Self {
        Self { log_modulus, phase: wrap_phase(phase) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.norm().ln(), if z.norm() == 0.0 { 0.0 } else { z.arg() })
    }

    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_modulus.exp(), self.phase)
    }

    /// Principal logarithm log|d| + i arg d.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_modulus, self.phase)
    }

    pub fn mul(&self, o: &LogDet) -> LogDet {
        LogDet::new(self.log_modulus + o.log_modulus, self.phase + o.phase)
    }

    pub fn div(&self, o: &LogDet) -> LogDet {
        LogDet::new(self.log_modulus - o.log_modulus, self.phase - o.phase)
    }

    pub fn mul_exp(&self, z: Complex64) -> LogDet {
        LogDet::new(self.log_modulus + z.re, self.phase + z.im)
    }

    /// |self - other| / |self| computed without forming either value.
    pub fn rel_diff(&self, other: &LogDet) -> f64 {
        let r = other.div(self);
        if r.log_modulus == f64::NEG_INFINITY {
            return 1.0;
        }
        let (s, c) = r.phase.sin_cos();
        let half = (0.5 * r.phase).sin();
        let re = r.log_modulus.exp_m1() * c - 2.0 * half * half;
        Complex64::new(re, r.log_modulus.exp() * s).norm()
    }
}

/// Determinant by LU with partial pivoting, accumulated as log-modulus and
/// phase so that n in the thousands neither overflows nor underflows.
pub fn log_det(m: &DenseMatrix) -> Result<LogDet, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(LogDet::ONE);
    }
    let lu = m.as_faer().partial_piv_lu();
    let u = lu.U();
    let mut logm = 0.0;
    let mut phase = 0.0;
    for i in 0..n {
        let d = u[(i, i)];
        if d.norm() == 0.0 {
            return Ok(LogDet { log_modulus: f64::NEG_INFINITY, phase: 0.0 });
        }
        logm += d.norm().ln();
        phase += d.arg();
    }
    let (fwd, _) = lu.P().arrays();
    if permutation_is_odd(fwd) {
        phase += PI;
    }
    Ok(LogDet::new(logm, phase))
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Det2 {
    /// det(I + A) e^{-Tr A}
    pub value: Complex64,
    /// |A|_2 exp((|A|_2 + 1)^2 / 2), the bound on |det2(I + A) - 1|
    pub bound: f64,
    pub log_det: LogDet,
}

/// Regularized determinant det2(I + A) = det(I + A) e^{-Tr A}.
pub fn det2(a: &DenseMatrix) -> Result<Det2, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let ipa = DenseMatrix::identity(a.rows()).add(a)?;
    let ld = log_det(&ipa)?.mul_exp(-a.trace());
    let hs = a.frobenius();
    let bound = if hs == 0.0 { 0.0 } else { hs * (0.5 * (hs + 1.0) * (hs + 1.0)).exp() };
    Ok(Det2 { value: ld.to_complex(), bound, log_det: ld })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixNorms {
    pub op: f64,
    pub hs: f64,
    pub trace: f64,
}

/// Operator, Hilbert-Schmidt and trace norms from a full SVD.
pub fn matrix_norms(m: &DenseMatrix) -> Result<MatrixNorms, LinalgError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(MatrixNorms { op: 0.0, hs: 0.0, trace: 0.0 });
    }
    let s = m.as_faer().singular_values().map_err(|_| LinalgError::SvdNoConvergence {
        rows: m.rows(),
        cols: m.cols(),
        fingerprint: m.fingerprint(),
    })?;
    let op = s.iter().copied().fold(0.0, f64::max);
    let trace = s.iter().sum();
    Ok(MatrixNorms { op, hs: m.frobenius(), trace })
}
