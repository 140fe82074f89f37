use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::series::LaurentSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBundle {
    /// sum |c_k| + error bound
    pub wiener: f64,
    /// (sum (1 + |k|) |c_k|^2)^{1/2}
    pub besov_half: f64,
    /// (sum |c_k|^2)^{1/2}
    pub l2: f64,
    /// max of |g| on a grid; a lower bound for the sup norm
    pub sup_estimate: f64,
}

pub fn norms(g: &LaurentSeries) -> NormBundle {
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut besov = 0.0;
    for (&k, c) in &g.coeffs {
        let a = c.norm_sqr();
        l1 += c.norm();
        l2 += a;
        besov += (1.0 + k.unsigned_abs() as f64) * a;
    }
    NormBundle {
        wiener: l1 + g.error_bound(),
        besov_half: besov.sqrt(),
        l2: l2.sqrt(),
        sup_estimate: grid_max(g),
    }
}

fn grid_max(g: &LaurentSeries) -> f64 {
    if g.is_empty() {
        return 0.0;
    }
    let n = (4 * g.bandwidth().max(4) as usize).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (&k, &c) in &g.coeffs {
        buf[k.rem_euclid(n as i64) as usize] += c;
    }
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Sum over k >= 1 of k |c_{k+n}|^2: the squared Hilbert-Schmidt norm of
/// Q_n H(c).
pub fn shifted_hankel_hs_sq(c: &LaurentSeries, n: i64) -> f64 {
    c.coeffs.range(n + 1..).map(|(&k, v)| (k - n) as f64 * v.norm_sqr()).sum()
}
