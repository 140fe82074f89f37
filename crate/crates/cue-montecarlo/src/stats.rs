use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use symbol_core::{build_symbol, Complex64, LaurentSeries, SymbolSpec};

use crate::error::McError;
use crate::haar::{sample_cue_at, CueSample};

/// Mean of a Monte Carlo sample with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Sample mean and sqrt(sum |z - mean|^2 / (N (N - 1))).
    pub fn from_values(values: &[Complex64], seed: u64) -> McEstimate {
        let n = values.len();
        assert!(n >= 2, "an estimate needs at least two samples");
        let mean = values.iter().sum::<Complex64>() / n as f64;
        let ss: f64 = values.iter().map(|z| (z - mean).norm_sqr()).sum();
        McEstimate { mean, stderr: (ss / (n as f64 * (n - 1) as f64)).sqrt(), samples: n, seed }
    }

    pub fn from_real(values: &[f64], seed: u64) -> McEstimate {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_values(&v, seed)
    }

    /// |mean - target| <= k stderr.
    pub fn within(&self, target: Complex64, k: f64) -> bool {
        (self.mean - target).norm() <= k * self.stderr
    }
}

/// f(i, sample) for samples 0..count of the run, in index order.
///
/// Draws run in parallel; each uses its own stream, and results are
/// collected by index, so the output does not depend on the thread count.
pub fn map_samples<T, F>(n: usize, count: usize, seed: u64, f: F) -> Result<Vec<T>, McError>
where
    T: Send,
    F: Fn(&CueSample) -> T + Sync,
{
    (0..count as u64).into_par_iter().map(|i| sample_cue_at(n, seed, i).map(|s| f(&s))).collect()
}

/// sum_mu e^{i k theta_mu} for each k.
pub fn trace_powers(sample: &CueSample, ks: &[i64]) -> Vec<Complex64> {
    ks.iter()
        .map(|&k| sample.phases.iter().map(|&t| Complex64::from_polar(1.0, k as f64 * t)).sum())
        .collect()
}

/// sum_k c_k Tr U^k for a finite Laurent series c. Each power is computed
/// once per |k|; Tr U^{-k} is taken as conj(Tr U^k).
pub fn statistic_from_symbol(f: &LaurentSeries, sample: &CueSample) -> Complex64 {
    let mut ks: Vec<i64> = f.coeffs.keys().map(|k| k.abs()).collect();
    ks.sort_unstable();
    ks.dedup();
    let tr = trace_powers(sample, &ks);
    f.coeffs
        .iter()
        .map(|(&k, &c)| {
            let p = tr[ks.binary_search(&k.abs()).expect("power computed")];
            c * if k < 0 { p.conj() } else { p }
        })
        .sum()
}

/// X_n = sum_{|j| > 0} alpha_j / sqrt(min(|k_j|, n)) Tr U^{k_j(n)}.
pub fn linear_statistic(spec: &SymbolSpec, n: usize, sample: &CueSample) -> Result<Complex64, McError> {
    Ok(statistic_from_symbol(&build_symbol(spec, n, true)?, sample))
}

fn exp_i(x: Complex64) -> Complex64 {
    (Complex64::new(0.0, 1.0) * x).exp()
}

/// Monte Carlo estimate of E e^{i X_n} over CUE(n).
pub fn char_fn_mc(spec: &SymbolSpec, n: usize, samples: usize, seed: u64) -> Result<McEstimate, McError> {
    if samples < 100 {
        return Err(McError::Invalid(format!("char_fn_mc needs at least 100 samples, got {samples}")));
    }
    let f = build_symbol(spec, n, true)?;
    let v = map_samples(n, samples, seed, |s| exp_i(statistic_from_symbol(&f, s)))?;
    Ok(McEstimate::from_values(&v, seed))
}

/// Which moment a `MomentRow` estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    /// E Tr U^k, target 0
    Mean,
    /// E |Tr U^k|^2, target min(k, n)
    AbsSq,
    /// E (Re Tr U^k)^2, target min(k, n) / 2
    ReSq,
    /// E (Im Tr U^k)^2, target min(k, n) / 2
    ImSq,
    /// E Re Tr U^k Im Tr U^k, target 0
    ReIm,
    /// E Tr U^k conj(Tr U^l) for k != l, target 0
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub kind: MomentKind,
    pub k: i64,
    pub l: i64,
    pub estimate: McEstimate,
    pub target: Complex64,
}

impl MomentRow {
    pub fn holds(&self, nsigma: f64) -> bool {
        self.estimate.within(self.target, nsigma)
    }
}

/// Second-moment table of (Tr U^k)_{k in ks} over CUE(n).
pub fn moment_suite(n: usize, ks: &[i64], samples: usize, seed: u64) -> Result<Vec<MomentRow>, McError> {
    let mut sorted = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ks.len() || ks.iter().any(|&k| k <= 0) {
        return Err(McError::Invalid("ks must be distinct positive integers".into()));
    }
    if samples < 2 {
        return Err(McError::Invalid("moment_suite needs at least 2 samples".into()));
    }
    let traces = map_samples(n, samples, seed, |s| trace_powers(s, ks))?;
    let col = |i: usize| -> Vec<Complex64> { traces.iter().map(|t| t[i]).collect() };
    let real = |v: Vec<f64>| McEstimate::from_real(&v, seed);
    let zero = Complex64::new(0.0, 0.0);
    let mut rows = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let t = col(i);
        let var = k.min(n as i64) as f64;
        let half = Complex64::new(var / 2.0, 0.0);
        let mut push = |kind, estimate, target| rows.push(MomentRow { kind, k, l: k, estimate, target });
        push(MomentKind::Mean, McEstimate::from_values(&t, seed), zero);
        push(MomentKind::AbsSq, real(t.iter().map(|z| z.norm_sqr()).collect()), Complex64::new(var, 0.0));
        push(MomentKind::ReSq, real(t.iter().map(|z| z.re * z.re).collect()), half);
        push(MomentKind::ImSq, real(t.iter().map(|z| z.im * z.im).collect()), half);
        push(MomentKind::ReIm, real(t.iter().map(|z| z.re * z.im).collect()), zero);
    }
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let v: Vec<Complex64> = traces.iter().map(|t| t[i] * t[j].conj()).collect();
            rows.push(MomentRow {
                kind: MomentKind::Cross,
                k: ks[i],
                l: ks[j],
                estimate: McEstimate::from_values(&v, seed),
                target: zero,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub m: i64,
    /// E e^{iX_n} - E e^{iX_{n,m}} from paired draws; its stderr is the
    /// standard error of the per-sample difference
    pub difference: McEstimate,
    /// (sum_{|j| > m} |alpha_j|^2)^{1/2}
    pub bound: f64,
    pub holds: bool,
}

/// |E e^{iX_n} - E e^{iX_{n,m}}| against the tail (sum_{|j|>m} |alpha_j|^2)^{1/2},
/// where X_{n,m} keeps only |j| <= m. Both expectations are estimated on
/// the same draws, and `holds` allows 3 standard errors of the difference.
pub fn truncation_sweep(
    spec: &SymbolSpec,
    n: usize,
    m_list: &[i64],
    samples: usize,
    seed: u64,
) -> Result<Vec<TruncationRow>, McError> {
    if !spec.hermitian {
        return Err(McError::Invalid("truncation_sweep needs a hermitian spec".into()));
    }
    if samples < 2 {
        return Err(McError::Invalid("truncation_sweep needs at least 2 samples".into()));
    }
    spec.validate()?;
    let full = build_symbol(spec, n, true)?;
    let parts = m_list.iter().map(|&m| build_symbol(&spec.truncated(m), n, true)).collect::<Result<Vec<_>, _>>()?;
    let diffs = map_samples(n, samples, seed, |s| {
        let e = exp_i(statistic_from_symbol(&full, s));
        parts.iter().map(|p| e - exp_i(statistic_from_symbol(p, s))).collect::<Vec<_>>()
    })?;
    Ok(m_list
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let v: Vec<Complex64> = diffs.iter().map(|d| d[i]).collect();
            let difference = McEstimate::from_values(&v, seed);
            let bound = spec.alphas.iter().filter(|(j, _)| j.abs() > m).map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
            let holds = difference.mean.norm() <= bound + 3.0 * difference.stderr;
            TruncationRow { m, difference, bound, holds }
        })
        .collect())
}
