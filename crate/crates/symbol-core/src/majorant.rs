use crate::error::SymbolError;
use crate::series::LaurentSeries;

/// Bound on |(e^t)_{N+k}| for t supported on (0, N].
///
/// `t` carries the 1/sqrt(j) weights, `t(z) = sum t_j z^j / sqrt(j)`, so the
/// majorant is rebuilt as F_t(z) = sum |t_j| z^j with |t_j| = sqrt(j) |coeff_j|.
/// Vanishing t_j simply do not appear in F_t. Returns
/// (F_t (e^{F_t} - 1))_{N+k} / sqrt(k (N + k)).
pub fn majorant_coeff_bound(t: &LaurentSeries, k: u64) -> Result<f64, SymbolError> {
    if let Some(lo) = t.min_freq() {
        if lo <= 0 {
            return Err(SymbolError::NonPositiveSupport { k: lo });
        }
    }
    if k == 0 {
        return Err(SymbolError::Invalid("k must be positive".into()));
    }
    let Some(big_n) = t.max_freq() else {
        return Ok(0.0);
    };
    let target = (big_n as u64 + k) as usize;
    let mut f = vec![0.0; target + 1];
    for (&j, c) in &t.coeffs {
        f[j as usize] = c.norm() * (j as f64).sqrt();
    }
    let e = exp_power_series(&f, target);
    // (F (e^F - 1))_target; e_0 - 1 = 0
    let v: f64 = (1..=big_n as usize).filter(|&j| j < target).map(|j| f[j] * e[target - j]).sum();
    Ok(v / ((k * (big_n as u64 + k)) as f64).sqrt())
}

/// Coefficients 0..=len of exp(F) for a power series F with F_0 = 0, from
/// m h_m = sum_j j F_j h_{m-j}.
pub fn exp_power_series(f: &[f64], len: usize) -> Vec<f64> {
    let mut h = vec![0.0; len + 1];
    h[0] = 1.0;
    for m in 1..=len {
        let mut s = 0.0;
        for j in 1..=m.min(f.len() - 1) {
            if f[j] != 0.0 {
                s += j as f64 * f[j] * h[m - j];
            }
        }
        h[m] = s / m as f64;
    }
    h
}
