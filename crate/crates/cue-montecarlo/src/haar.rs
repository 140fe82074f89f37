use std::f64::consts::PI;

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::hessenberg;
use faer::{Mat, Par};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use symbol_core::Complex64;

use crate::error::McError;
use crate::unitary_qr::eig_unitary_hessenberg;

/// Eigenphases of one n x n unitary, each in [-pi, pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CueSample {
    pub n: usize,
    pub phases: Vec<f64>,
}

impl CueSample {
    /// Checks length and range; phases are stored in eigensolver order.
    pub fn new(phases: Vec<f64>) -> Result<CueSample, McError> {
        if phases.is_empty() {
            return Err(McError::Invalid("a sample needs at least one phase".into()));
        }
        if let Some(p) = phases.iter().find(|p| !(-PI..PI).contains(*p)) {
            return Err(McError::Invalid(format!("phase {p} outside [-pi, pi)")));
        }
        Ok(CueSample { n: phases.len(), phases })
    }
}

/// Independent stream `index` of the generator seeded by `seed`.
///
/// Streams are ChaCha nonces, so sample i is the same whichever thread or
/// order produces it and streams never overlap.
pub fn stream(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// n x n matrix of independent standard complex Gaussians (E|z|^2 = 1).
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // column-major fill order, fixed so that a stream maps to one matrix
    let mut m = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = Complex64::new(re * s, im * s);
        }
    }
    m
}

/// Haar-distributed unitary: Q from A = QR with each column j multiplied
/// by R_jj / |R_jj|, i.e. the Q of the factorization whose R has positive
/// diagonal. None if some R_jj is zero (probability zero).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Option<Mat<Complex64>> {
    let a = ginibre(n, rng);
    let qr = a.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        let d = r[(j, j)];
        let m = d.norm();
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        let ph = d / m;
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    Some(q)
}

/// Eigenphases in [-pi, pi) of a unitary matrix: Householder reduction to
/// Hessenberg form, then the unitary core-chasing QR iteration.
pub fn unitary_eigenphases(u: &Mat<Complex64>) -> Option<Vec<f64>> {
    let n = u.nrows();
    let eig = if n <= 2 {
        // already Hessenberg
        eig_unitary_hessenberg(u)?
    } else {
        // small blocks measured fastest for n <= 512 on one core
        let bs = 8.min(n - 1);
        let mut buf = MemBuffer::new(hessenberg::hessenberg_in_place_scratch::<Complex64>(n, bs, Par::Seq, Default::default()));
        let mut h = u.clone();
        let mut hh = Mat::<Complex64>::zeros(bs, n - 1);
        hessenberg::hessenberg_in_place(h.as_mut(), hh.as_mut(), Par::Seq, MemStack::new(&mut buf), Default::default());
        eig_unitary_hessenberg(&h)?
    };
    Some(eig.iter().map(|z| wrap_phase(z.arg())).collect())
}

/// Map an angle from (-pi, pi] to [-pi, pi).
pub fn wrap_phase(t: f64) -> f64 {
    if t >= PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Draw a CUE(n) sample from `rng`.
pub fn sample_cue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Option<CueSample> {
    if n == 0 {
        return None;
    }
    let u = haar_unitary(n, rng)?;
    let phases = unitary_eigenphases(&u)?;
    Some(CueSample { n, phases })
}

/// Sample `index` of the run seeded by `seed`; errors carry both for replay.
pub fn sample_cue_at(n: usize, seed: u64, index: u64) -> Result<CueSample, McError> {
    if n == 0 {
        return Err(McError::Invalid("n must be at least 1".into()));
    }
    let mut rng = stream(seed, index);
    let u = haar_unitary(n, &mut rng).ok_or(McError::Factorization { n, seed, index })?;
    let phases = unitary_eigenphases(&u).ok_or(McError::Eigen { n, seed, index })?;
    Ok(CueSample { n, phases })
}
