use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::SymbolError;
use crate::series::{project_half, Half, LaurentSeries};

/// Largest grid tried before giving up on a tolerance.
pub const GRID_CAP: usize = 1 << 22;

/// Default absolute tolerance: 1e-12 relative to the a priori size e^{|g|_W}.
pub fn default_tol(g: &LaurentSeries) -> f64 {
    1e-12 * g.l1().exp()
}

/// `sum_{l >= l0} w^l / l!`, an upper bound on the l1 mass of e^g that can
/// sit at |k| >= l0 * bandwidth(g) when |g|_W = w.
pub fn poisson_tail(w: f64, l0: u64) -> f64 {
    if w <= 0.0 {
        return if l0 == 0 { 1.0 } else { 0.0 };
    }
    if l0 == 0 {
        return w.exp();
    }
    let lt = l0 as f64 * w.ln() - ln_factorial(l0);
    if lt < -745.0 {
        return 0.0;
    }
    let mut term = lt.exp();
    let mut sum = 0.0;
    let mut l = l0;
    loop {
        sum += term;
        l += 1;
        term *= w / l as f64;
        if term <= sum * 1e-17 && (l as f64) > w {
            break;
        }
    }
    sum * (1.0 + 1e-12)
}

fn ln_factorial(n: u64) -> f64 {
    if n < 256 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Gamma(x)
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x * x * x)
    }
}

/// Coefficients of e^g on [-K, K].
///
/// e^g is sampled on a uniform grid of N points (N a power of two, at least
/// 8 (K + bandwidth)) and transformed back with an FFT. Frequencies j with
/// |j| >= N - K alias onto the kept window; their mass is bounded by
/// `poisson_tail(|g|_W, ceil((N - K) / B))` and N doubles until that bound is
/// at most `tol`. The returned `tail_bound` bounds the mass outside [-K, K].
pub fn exp_symbol(g: &LaurentSeries, k_range: i64, tol: f64) -> Result<LaurentSeries, SymbolError> {
    if k_range < 0 {
        return Err(SymbolError::Invalid(format!("coefficient range {k_range} < 0")));
    }
    if !(tol > 0.0) {
        return Err(SymbolError::Invalid(format!("tolerance {tol} must be positive")));
    }
    let b = g.bandwidth();
    let w = g.l1();
    if b == 0 {
        let v = g.coeff(0).exp();
        let mut out = LaurentSeries::from_pairs([(0, v)]);
        out.coeff_error = g.error_bound() * v.norm() * g.error_bound().exp();
        return Ok(out);
    }
    let k = k_range;
    let mut n = (8 * (k + b)).max(16) as usize;
    n = n.next_power_of_two();
    if n > GRID_CAP {
        return Err(SymbolError::Truncation { tol, achieved: f64::INFINITY, cap: GRID_CAP });
    }
    let alias = |n: usize| poisson_tail(w, ((n as i64 - k) as u64).div_ceil(b as u64));
    while alias(n) > tol {
        if n >= GRID_CAP {
            return Err(SymbolError::Truncation { tol, achieved: alias(n), cap: GRID_CAP });
        }
        n *= 2;
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (&kk, &c) in &g.coeffs {
        buf[kk.rem_euclid(n as i64) as usize] += c;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let mut max_e = 0.0f64;
    for v in buf.iter_mut() {
        *v = v.exp();
        max_e = max_e.max(v.norm());
    }
    planner.plan_fft_forward(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let log2n = n.trailing_zeros() as f64;
    let noise = 2.0 * f64::EPSILON * max_e;
    let mut coeffs = BTreeMap::new();
    let mut dropped = 0.0;
    let mut kept = 0usize;
    for kk in -k..=k {
        let c = buf[kk.rem_euclid(n as i64) as usize] * inv_n;
        if c.norm() <= noise {
            dropped += c.norm();
        } else {
            coeffs.insert(kk, c);
            kept += 1;
        }
    }
    // Input error e: |e^{g+d} - e^g|_W <= e^{w}(e^{e} - 1).
    let input = if g.error_bound() > 0.0 { w.exp() * g.error_bound().exp_m1() } else { 0.0 };
    let rounding = kept as f64 * f64::EPSILON * (log2n + 2.0) * max_e;
    Ok(LaurentSeries {
        coeffs,
        tail_bound: poisson_tail(w, (k as u64) / (b as u64) + 1),
        coeff_error: alias(n) + dropped + rounding + input,
    })
}

/// Smallest K with certified tail below `tol`, capped at `k_cap`.
pub fn auto_range(g: &LaurentSeries, tol: f64, k_cap: i64) -> i64 {
    let b = g.bandwidth();
    if b == 0 {
        return 0;
    }
    let w = g.l1();
    let mut l = 1u64;
    while poisson_tail(w, l + 1) > tol && (l as i64 + 1) * b <= k_cap {
        l += 1;
    }
    (l as i64 * b).min(k_cap)
}

/// phi = a_+^{-1} a_- and psi = flip(a_+) flip(a_-^{-1}) for a = e^{g1}.
///
/// Both are exponentials of a single series (e^{g1_- - g1_+} and the flip of
/// e^{g1_+ - g1_-}), so they are computed directly rather than as products.
pub fn phi_psi(g1: &LaurentSeries, k_range: i64, tol: f64) -> Result<(LaurentSeries, LaurentSeries), SymbolError> {
    let plus = project_half(g1, Half::Plus);
    let minus = project_half(g1, Half::Minus);
    let phi = exp_symbol(&minus.sub(&plus), k_range, tol)?;
    let psi = exp_symbol(&plus.sub(&minus), k_range, tol)?.flip();
    Ok((phi, psi))
}
