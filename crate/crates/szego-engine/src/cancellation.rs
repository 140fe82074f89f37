use serde::{Deserialize, Serialize};
use symbol_core::{exp_symbol, Complex64, LaurentSeries};

use crate::determinants::coeff_tol;
use crate::error::EngineError;
use crate::ext::{Ext, ExtSymbol};

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Coefficients of a = e^{g1} and a^{-1} in extended precision on a window
/// wide enough for every sum in this module at (n, N).
struct Pair {
    a: ExtSymbol,
    a_inv: ExtSymbol,
    pad: i64,
}

impl Pair {
    fn new(g1: &LaurentSeries, n: usize, big_n: i64) -> Pair {
        let pad = 64 * g1.bandwidth().max(1) + 64;
        let len = (n as i64 + big_n + 3 * pad) as usize;
        Pair { a: ExtSymbol::exp_of(g1, len), a_inv: ExtSymbol::exp_of(&g1.neg(), len), pad }
    }

    fn x(&self, big_n: i64, s: i64) -> Ext {
        self.a_inv.coeff(s).mul(&self.a.coeff(big_n - s))
    }
}

/// S(n, N) = sum_{|s| <= floor(sqrt n)} (a^{-1})_s a_{N-s}.
pub fn cancellation_sum(g1: &LaurentSeries, n: usize, big_n: i64) -> Ext {
    let p = Pair::new(g1, n, big_n);
    let r = isqrt(n) as i64;
    (-r..=r).fold(Ext::ZERO, |acc, s| acc.add(&p.x(big_n, s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CancellationRow {
    pub n: usize,
    pub big_n: i64,
    /// ln |S(n, N)|
    pub ln_abs: f64,
    /// ln (n^{3/4} |S(n, N)|)
    pub ln_scaled: f64,
}

/// One row per N in `big_ns` (each N > n).
pub fn cancellation_diagnostics(g1: &LaurentSeries, n: usize, big_ns: &[i64]) -> Result<Vec<CancellationRow>, EngineError> {
    big_ns
        .iter()
        .map(|&big_n| {
            if big_n <= n as i64 {
                return Err(EngineError::Invalid(format!("N = {big_n} must exceed n = {n}")));
            }
            let ln_abs = cancellation_sum(g1, n, big_n).ln_abs();
            Ok(CancellationRow { n, big_n, ln_abs, ln_scaled: ln_abs + 0.75 * (n as f64).ln() })
        })
        .collect()
}

/// W(n, N) = sum_{|s| < n} (n - |s|) (a^{-1})_s a_{N-s}, evaluated as
///
///   2 sum_{s<0} s x_s + sum_{|s|>n} (|s| - n) x_s,   x_s = (a^{-1})_s a_{N-s}.
///
/// The rewrite uses sum_s x_s = (a^{-1} a)_N = 0 and
/// sum_s s x_s = ((z d/dz a^{-1}) a)_N = -N (g1)_N = 0, both valid for
/// N > bandwidth(g1). The direct sum cancels catastrophically (terms near
/// 2^N/N!, result near 1/(N+1)!); the rewritten sums do not.
pub fn weighted_window_sum(g1: &LaurentSeries, n: usize, big_n: i64) -> Result<Ext, EngineError> {
    if big_n <= g1.bandwidth() {
        return Err(EngineError::Invalid(format!("N = {big_n} must exceed the bandwidth of g1")));
    }
    let p = Pair::new(g1, n, big_n);
    let n_i = n as i64;
    let mut acc = Ext::ZERO;
    for s in 1..=(n_i + p.pad) {
        // s < 0 part: 2 s x_s, plus (|s| - n) x_s once |s| > n
        let w = -2 * s + (s - n_i).max(0);
        acc = acc.add(&p.x(big_n, -s).scale(Complex64::new(w as f64, 0.0)));
    }
    for s in (n_i + 1)..=(n_i + big_n + p.pad) {
        acc = acc.add(&p.x(big_n, s).scale(Complex64::new((s - n_i) as f64, 0.0)));
    }
    Ok(acc)
}

/// Tr T_n(a^{-1}) P_n H(a) H(g2~) P_n = sum_{k > n} (g2)_{-k} W(n, k).
pub fn hankel_trace_term(g1: &LaurentSeries, g2: &LaurentSeries, n: usize) -> Result<Ext, EngineError> {
    let mut acc = Ext::ZERO;
    for (&k, &c) in g2.coeffs.range(..-(n as i64)) {
        acc = acc.add(&weighted_window_sum(g1, n, -k)?.scale(c));
    }
    Ok(acc)
}

/// The same trace as an explicit f64 double sum over |s| < n. Accurate
/// only while the result is not much smaller than max_s |x_s|.
pub fn hankel_trace_term_direct(g1: &LaurentSeries, g2: &LaurentSeries, n: usize) -> Result<Complex64, EngineError> {
    let kmax = g2.coeffs.keys().next().map_or(0, |k| -k).max(0);
    let range = kmax + n as i64 + 64 * g1.bandwidth().max(1) + 64;
    let a = exp_symbol(g1, range, coeff_tol(g1))?;
    let a_inv = exp_symbol(&g1.neg(), range, coeff_tol(g1))?;
    let n_i = n as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for (&k, &c) in g2.coeffs.range(..-n_i) {
        let big_n = -k;
        let w: Complex64 =
            (-(n_i - 1)..n_i).map(|s| a_inv.coeff(s) * a.coeff(big_n - s) * (n_i - s.abs()) as f64).sum();
        total += c * w;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceTermRow {
    pub n: usize,
    pub ln_abs: f64,
    /// ln (n^{1/4} |trace|)
    pub ln_scaled: f64,
}

pub fn trace_term_row(g1: &LaurentSeries, g2: &LaurentSeries, n: usize) -> Result<TraceTermRow, EngineError> {
    let ln_abs = hankel_trace_term(g1, g2, n)?.ln_abs();
    Ok(TraceTermRow { n, ln_abs, ln_scaled: ln_abs + 0.25 * (n as f64).ln() })
}
