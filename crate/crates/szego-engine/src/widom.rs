use symbol_core::{
    auto_range, build_symbol, exp_symbol, project_half, split_symbol, Complex64, Half, LaurentSeries, SymbolSpec,
};
use toeplitz_linalg::{
    flip_conjugate, hankel_block, log_det, matrix_norms, toeplitz_matrix, DenseMatrix, Role,
};

use crate::determinants::coeff_tol;
use crate::error::EngineError;
use crate::ext::{analytic_exp, Ext, ExtSymbol};

/// P_n H(c) H(d) P_n with the inner sum cut at `inner` terms.
fn hankel_pair(c: &LaurentSeries, d: &LaurentSeries, n: usize, inner: usize) -> Result<DenseMatrix, EngineError> {
    Ok(hankel_block(c, 0, n, 0, inner).matmul(&hankel_block(d, 0, inner, 0, n))?)
}

/// ||T_n(ab) - T_n(a)T_n(b) - P_n H(a)H(b~)P_n - W_n H(a~)H(b)W_n||_F
/// relative to ||T_n(ab)||_F, for finitely supported a and b.
pub fn widom_residual(a: &LaurentSeries, b: &LaurentSeries, n: usize) -> Result<f64, EngineError> {
    let ab = a.mul(b);
    let inner = (a.bandwidth().max(b.bandwidth()) as usize + 1).max(1);
    let tab = toeplitz_matrix(&ab, n);
    let prod = toeplitz_matrix(a, n).matmul(&toeplitz_matrix(b, n))?;
    let h1 = hankel_pair(a, &b.flip(), n, inner)?;
    let h2 = flip_conjugate(&hankel_pair(&a.flip(), b, n, inner)?)?;
    let resid = tab.sub(&prod)?.sub(&h1)?.sub(&h2)?;
    let scale = tab.frobenius();
    Ok(if scale == 0.0 { resid.frobenius() } else { resid.frobenius() / scale })
}

/// Widom residual for a = e^{g1}, b = e^{g2} of the symbol at n, each
/// exponential truncated where its certified tail falls below `tail_tol`.
pub fn widom_check(spec: &SymbolSpec, n: usize, tail_tol: f64) -> Result<f64, EngineError> {
    let s = split_symbol(&build_symbol(spec, n, true)?, n);
    let cap = 64 * n as i64 + 4096;
    let range = |g: &LaurentSeries| auto_range(g, tail_tol, cap).max(n as i64);
    let a = exp_symbol(&s.g1, range(&s.g1), coeff_tol(&s.g1))?;
    let b = exp_symbol(&s.g2, range(&s.g2), coeff_tol(&s.g2))?;
    widom_residual(&a, &b, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxInverse {
    pub n: usize,
    /// ||B_n T_n(a) - I||_1; underflows to 0 when the residual is below f64 range
    pub trace_norm: f64,
    /// ln of the trace norm, valid far below the f64 range
    pub ln_trace_norm: f64,
    /// det(B_n T_n(a))
    pub det: Complex64,
}

/// B_n T_n(a) - I for a = e^{g1}, through
///
///   B_n T_n(a) = I + P_n H(a_+^{-1}) H(a_-^{-1}~) Q_n T(a) P_n
///                  + W_n H(a_-^{-1}~) H(a_+^{-1}) Q_n T(a~) W_n.
///
/// Only the Q_n-side Hankel factors are small; they are formed from
/// extended-exponent Taylor coefficients and rescaled to a common binary
/// exponent before entering f64 arithmetic, so the trace norm is obtained
/// with relative accuracy even when it is far below 1e-308.
pub fn approx_inverse_residual(g1: &LaurentSeries, n: usize) -> Result<ApproxInverse, EngineError> {
    if n == 0 {
        return Err(EngineError::Invalid("n must be at least 1".into()));
    }
    let bw = g1.bandwidth().max(1) as usize;
    let pad = 64 * bw + 64;
    let len = 3 * n + 2 * pad;
    let plus = project_half(g1, Half::Plus);
    let minus = project_half(g1, Half::Minus);
    let ap_inv = analytic_exp(&plus.neg(), len);
    let am_inv_t = analytic_exp(&minus.neg().flip(), len);
    let a = ExtSymbol::exp_of(g1, len);

    // Inner cut: last index past n whose coefficient is within 2^-64 of
    // the largest one there.
    let peak = ap_inv[n + 1..].iter().chain(&am_inv_t[n + 1..]).map(Ext::exponent).max().unwrap_or(i64::MIN);
    if peak == i64::MIN {
        return Ok(ApproxInverse { n, trace_norm: 0.0, ln_trace_norm: f64::NEG_INFINITY, det: Complex64::new(1.0, 0.0) });
    }
    let last = (n + 1..len)
        .rev()
        .find(|&i| ap_inv[i].exponent().max(am_inv_t[i].exponent()) > peak - 64)
        .unwrap_or(n + 1);
    let l = (last - n).max(1);
    if n + 2 * l + 2 > len {
        return Err(EngineError::Invalid(format!("coefficient decay too slow for inner cut at n={n}")));
    }

    let f = |v: &[Ext], i: usize| v[i].to_c64();
    let a_at = |m: i64| a.coeff(m).to_c64();
    let mat = |r: usize, c: usize, g: &dyn Fn(usize, usize) -> Complex64| {
        DenseMatrix::from_fn(r, c, Role::Generic, |i, j| g(i, j))
    };
    // first term
    let x = mat(n, l, &|j, m| f(&ap_inv, j + m + 1))?;
    let y = mat(l, l, &|m, c| am_inv_t[m + n + c + 1].to_c64_shifted(peak))?;
    let z = mat(l, n, &|r, c| a_at(n as i64 + r as i64 - c as i64))?;
    let r1 = x.matmul(&y)?.matmul(&z)?;
    // second term
    let x2 = mat(n, l, &|j, m| f(&am_inv_t, j + m + 1))?;
    let y2 = mat(l, l, &|m, c| ap_inv[m + n + c + 1].to_c64_shifted(peak))?;
    let z2 = mat(l, n, &|r, c| a_at(-(n as i64 + r as i64 - c as i64)))?;
    let r2 = flip_conjugate(&x2.matmul(&y2)?.matmul(&z2)?)?;
    let scaled = r1.add(&r2)?;

    let tn = matrix_norms(&scaled)?.trace;
    let ln_trace_norm = tn.ln() + peak as f64 * std::f64::consts::LN_2;
    let unscaled = DenseMatrix::from_fn(n, n, Role::Generic, |i, j| {
        let v = scaled.get(i, j);
        Complex64::new(libm::scalbn(v.re, peak.clamp(-2200, 2200) as i32), libm::scalbn(v.im, peak.clamp(-2200, 2200) as i32))
    })?;
    let det = log_det(&DenseMatrix::identity(n).add(&unscaled)?)?.to_complex();
    Ok(ApproxInverse { n, trace_norm: ln_trace_norm.exp(), ln_trace_norm, det })
}

/// B_n T_n(a) - I formed directly from B_n in f64. Exact in exact
/// arithmetic but limited to absolute accuracy ~1e-15; used to cross-check
/// `approx_inverse_residual` where the residual is not tiny.
pub fn approx_inverse_dense(g1: &LaurentSeries, n: usize) -> Result<DenseMatrix, EngineError> {
    let bw = g1.bandwidth().max(1);
    let k = n as i64 + 64 * bw + 64;
    let plus = project_half(g1, Half::Plus);
    let minus = project_half(g1, Half::Minus);
    let a = exp_symbol(g1, k, coeff_tol(g1))?;
    let a_inv = exp_symbol(&g1.neg(), k, coeff_tol(g1))?;
    let ap_inv = exp_symbol(&plus.neg(), k, coeff_tol(&plus))?;
    let am_inv_t = exp_symbol(&minus.neg(), k, coeff_tol(&minus))?.flip();
    let inner = k as usize;
    let bn = toeplitz_matrix(&a_inv, n)
        .sub(&hankel_pair(&ap_inv, &am_inv_t, n, inner)?)?
        .sub(&flip_conjugate(&hankel_pair(&am_inv_t, &ap_inv, n, inner)?)?)?;
    Ok(bn.matmul(&toeplitz_matrix(&a, n))?.sub(&DenseMatrix::identity(n))?)
}
