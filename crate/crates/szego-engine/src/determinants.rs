use serde::{Deserialize, Serialize};
use symbol_core::{
    build_symbol, exp_symbol, phi_psi, shifted_hankel_hs_sq, split_symbol, Complex64, LaurentSeries, SymbolSpec,
};
use toeplitz_linalg::{hankel_product_block, log_det, toeplitz_matrix, DenseMatrix, LogDet};

use crate::constants::szego_constants;
use crate::error::EngineError;
use crate::fit::{fit_rate, RateFit};

/// Largest Fredholm truncation tried before reporting a capped result.
pub const FREDHOLM_CAP: usize = 4096;

/// Absolute aliasing tolerance for e^g: 1e-15 relative to e^{|g|_W}.
pub fn coeff_tol(g: &LaurentSeries) -> f64 {
    1e-15 * g.l1().exp()
}

/// det T_n(e^g), with the coefficients of e^g on [-(n-1), n-1].
pub fn toeplitz_det_exp(g: &LaurentSeries, n: usize) -> Result<LogDet, EngineError> {
    if n == 0 {
        return Ok(LogDet::ONE);
    }
    if g.is_empty() {
        return Ok(LogDet::ONE);
    }
    let a = exp_symbol(g, n as i64 - 1, coeff_tol(g))?;
    Ok(log_det(&toeplitz_matrix(&a, n))?)
}

/// sum_{k >= 1} k g_k g_{-k}, the exponent in the strong Szego limit.
pub fn szego_exponent(g: &LaurentSeries) -> Complex64 {
    g.coeffs.range(1..).map(|(&k, &c)| c * g.coeff(-k) * k as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoEvaluation {
    /// det T_n(a)
    pub lhs: LogDet,
    /// e^{C1} det(I - K_M)
    pub rhs: LogDet,
    pub rel_discrepancy: f64,
    /// det(I - K_M) on its own
    pub fredholm: LogDet,
    pub fredholm_size: usize,
    /// trace-norm bound on the part of the kernel outside the M x M block
    pub kernel_tail: f64,
    /// true when the cap was reached before `kernel_tail < tol`
    pub capped: bool,
}

/// Both sides of det T_n(a) = e^{C1} det(I - Q_n H(phi) H(psi) Q_n) for
/// a = e^{g1} at size n, with g1 the low-frequency part of the symbol.
pub fn bo_evaluate(spec: &SymbolSpec, n: usize, tol: f64) -> Result<BoEvaluation, EngineError> {
    let g = build_symbol(spec, n, true)?;
    let g1 = split_symbol(&g, n).g1;
    let c1 = szego_constants(spec, n)?.c1;
    bo_evaluate_symbol(&g1, n, c1, None, tol)
}

/// Borodin-Okounkov evaluation for an arbitrary g1 with 0 < |k| <= n (a
/// k = 0 term contributes the factor e^{n g_0}).
///
/// The Fredholm block starts at `m_start` (default max(64, 2 bandwidth))
/// and doubles until its tail bound drops below `tol` or reaches
/// FREDHOLM_CAP.
pub fn bo_evaluate_symbol(
    g1: &LaurentSeries,
    n: usize,
    c1: Complex64,
    m_start: Option<usize>,
    tol: f64,
) -> Result<BoEvaluation, EngineError> {
    if n == 0 {
        return Err(EngineError::Invalid("n must be at least 1".into()));
    }
    let lhs = toeplitz_det_exp(g1, n)?;
    let g0 = g1.coeff(0);
    let mut g_nc = g1.clone();
    g_nc.coeffs.remove(&0);
    let mut m = m_start.unwrap_or_else(|| 64.max(2 * g_nc.bandwidth() as usize)).min(FREDHOLM_CAP);
    loop {
        let k_range = (n + 2 * m) as i64;
        let (phi, psi) = phi_psi(&g_nc, k_range, coeff_tol(&g_nc))?;
        let kp = hankel_product_block(&phi, &psi, n, m, m)?;
        let coeff_tail = phi.tail_bound.max(psi.tail_bound);
        let tail = kp.tail_bound + coeff_tail;
        if tail < tol || m >= FREDHOLM_CAP {
            let i_minus_k = DenseMatrix::identity(m).sub(&kp.block)?;
            let fredholm = log_det(&i_minus_k)?;
            let rhs = fredholm.mul_exp(c1 + g0 * n as f64);
            return Ok(BoEvaluation {
                lhs,
                rhs,
                rel_discrepancy: lhs.rel_diff(&rhs),
                fredholm,
                fredholm_size: m,
                kernel_tail: tail,
                capped: tail >= tol,
            });
        }
        m = (2 * m).min(FREDHOLM_CAP);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmBound {
    /// sum_{k >= 1} k |phi_{k+n}|^2
    pub hs_phi_sq: f64,
    /// sum_{k >= 1} k |psi_{k+n}|^2
    pub hs_psi_sq: f64,
    /// exp(sqrt(hs_phi_sq hs_psi_sq)) - 1
    pub bound: f64,
    /// A1 (e^{A1} - 1) / n
    pub corollary: f64,
}

pub fn fredholm_bound(phi: &LaurentSeries, psi: &LaurentSeries, n: usize, a1: f64) -> FredholmBound {
    let hs_phi_sq = shifted_hankel_hs_sq(phi, n as i64);
    let hs_psi_sq = shifted_hankel_hs_sq(psi, n as i64);
    FredholmBound {
        hs_phi_sq,
        hs_psi_sq,
        bound: (hs_phi_sq.sqrt() * hs_psi_sq.sqrt()).exp_m1(),
        corollary: a1 * a1.exp_m1() / n as f64,
    }
}

/// phi and psi for the symbol at n, on a range wide enough for the Hankel
/// sums in `fredholm_bound` to be complete to rounding.
pub fn spec_phi_psi(spec: &SymbolSpec, n: usize) -> Result<(LaurentSeries, LaurentSeries), EngineError> {
    let g1 = split_symbol(&build_symbol(spec, n, true)?, n).g1;
    let k_range = 2 * n as i64 + 64 * g1.bandwidth().max(1) + 64;
    Ok(phi_psi(&g1, k_range, coeff_tol(&g1))?)
}

/// det T_n(ab) / (det T_n(a) det T_n(b)) for a = e^{g1}, b = e^{g2}.
pub fn separation_ratio(spec: &SymbolSpec, n: usize) -> Result<LogDet, EngineError> {
    let g = build_symbol(spec, n, true)?;
    let s = split_symbol(&g, n);
    let dab = toeplitz_det_exp(&g, n)?;
    let da = toeplitz_det_exp(&s.g1, n)?;
    let db = toeplitz_det_exp(&s.g2, n)?;
    if da.is_zero() || db.is_zero() {
        return Err(EngineError::DegenerateDeterminant("separation_ratio"));
    }
    Ok(dab.div(&da.mul(&db)))
}

/// det T_n(e^{i f_n}) = E e^{i X_n} over CUE(n).
pub fn heine_determinant(spec: &SymbolSpec, n: usize) -> Result<LogDet, EngineError> {
    let f = build_symbol(spec, n, true)?;
    toeplitz_det_exp(&f.scale(Complex64::new(0.0, 1.0)), n)
}

/// e^{-sum_{j >= 1} |alpha_j|^2}, the Theorem 1 limit of E e^{i X_n} for a
/// hermitian spec.
pub fn theorem1_target(spec: &SymbolSpec) -> f64 {
    (-spec.alphas.iter().filter(|(j, _)| **j > 0).map(|(_, a)| a.norm_sqr()).sum::<f64>()).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: Complex64,
    pub target: Complex64,
    pub abs_error: f64,
    pub bound: Option<f64>,
    pub runtime_ms: f64,
}

impl ConvergenceRow {
    pub fn new(n: usize, value: Complex64, target: Complex64, bound: Option<f64>) -> Self {
        Self { n, value, target, abs_error: (value - target).norm(), bound, runtime_ms: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<ConvergenceRow>,
    pub fit: Option<RateFit>,
}

/// det T_n(e^{g_n}) against exp(sum_j alpha_j alpha_{-j}) for each n. The
/// slope fit skips rows with abs_error <= 10 tol.
pub fn szego_sweep(spec: &SymbolSpec, n_list: &[usize], tol: f64) -> Result<Sweep, EngineError> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let g = build_symbol(spec, n, true)?;
        let target = szego_constants(spec, n)?.c_total.exp();
        let value = toeplitz_det_exp(&g, n)?.to_complex();
        rows.push(ConvergenceRow::new(n, value, target, None));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.abs_error)).collect();
    let fit = fit_rate(&pts, 10.0 * tol);
    Ok(Sweep { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use symbol_core::FrequencyRule;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_symbol_is_trivial() {
        let z = LaurentSeries::zero();
        let bo = bo_evaluate_symbol(&z, 5, c(0., 0.), None, 1e-14).unwrap();
        assert_eq!(bo.lhs, LogDet::ONE);
        assert_eq!(bo.rhs, LogDet::ONE);
        assert_eq!(bo.rel_discrepancy, 0.0);
        let fb = fredholm_bound(&LaurentSeries::zero(), &LaurentSeries::zero(), 4, 0.0);
        assert_eq!(fb.bound, 0.0);
        let s = szego_sweep(&SymbolSpec::empty(), &[1, 4, 9], 1e-14).unwrap();
        assert!(s.rows.iter().all(|r| r.value == c(1., 0.) && r.abs_error == 0.0));
        assert!(s.fit.is_none());
    }

    #[test]
    fn szego_exponent_matches_constant() {
        let spec = SymbolSpec::pair(c(0.7, 0.2), FrequencyRule::Fixed(3));
        let g = build_symbol(&spec, 10, true).unwrap();
        let e = szego_exponent(&g);
        assert!((e - szego_constants(&spec, 10).unwrap().c1).norm() < 1e-15);
    }

    #[test]
    fn separation_trivial_sides() {
        let low = SymbolSpec::pair(c(1., 0.), FrequencyRule::Fixed(1));
        assert_eq!(separation_ratio(&low, 8).unwrap(), LogDet::ONE);
        let high = SymbolSpec::pair(c(1., 0.), FrequencyRule::Affine { c: 2.0, d: 0 });
        assert_eq!(separation_ratio(&high, 8).unwrap(), LogDet::ONE);
    }
}
