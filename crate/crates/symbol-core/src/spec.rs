use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SymbolError;
use crate::series::LaurentSeries;

/// Frequency rule producing k_j(n) for one positive index j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyRule {
    Fixed(i64),
    /// floor(c * n) + d
    Affine { c: f64, d: i64 },
    /// sum_i coeffs[i] * n^i
    Polynomial(Vec<i64>),
    /// explicit value per n
    Table(BTreeMap<usize, i64>),
}

impl FrequencyRule {
    pub fn eval(&self, j: i64, n: usize) -> Result<i64, SymbolError> {
        Ok(match self {
            FrequencyRule::Fixed(k) => *k,
            FrequencyRule::Affine { c, d } => (c * n as f64).floor() as i64 + d,
            FrequencyRule::Polynomial(cs) => {
                cs.iter().rev().fold(0i64, |acc, &a| acc * n as i64 + a)
            }
            FrequencyRule::Table(t) => {
                *t.get(&n).ok_or(SymbolError::MissingTableEntry { j, n })?
            }
        })
    }
}

/// Coefficients alpha_j and frequency schedule k_j(n) generating
/// `f_n(z) = sum_j alpha_j z^{k_j(n)} / sqrt(min(|k_j(n)|, n))`.
///
/// The schedule is keyed by positive j; k_{-j}(n) = -k_j(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub alphas: BTreeMap<i64, Complex64>,
    pub schedule: BTreeMap<i64, FrequencyRule>,
    #[serde(default)]
    pub hermitian: bool,
}

impl SymbolSpec {
    pub fn empty() -> Self {
        Self { alphas: BTreeMap::new(), schedule: BTreeMap::new(), hermitian: true }
    }

    /// Single hermitian pair alpha_1 = alpha, alpha_{-1} = conj(alpha).
    pub fn pair(alpha: Complex64, rule: FrequencyRule) -> Self {
        Self {
            alphas: [(1, alpha), (-1, alpha.conj())].into_iter().collect(),
            schedule: [(1, rule)].into_iter().collect(),
            hermitian: true,
        }
    }

    /// Hermitian spec from (alpha_j, rule_j) for j = 1, 2, ...
    pub fn hermitian_terms(terms: Vec<(Complex64, FrequencyRule)>) -> Self {
        let mut alphas = BTreeMap::new();
        let mut schedule = BTreeMap::new();
        for (i, (a, r)) in terms.into_iter().enumerate() {
            let j = i as i64 + 1;
            alphas.insert(j, a);
            alphas.insert(-j, a.conj());
            schedule.insert(j, r);
        }
        Self { alphas, schedule, hermitian: true }
    }

    /// Positive indices j with alpha_j or alpha_{-j} present.
    pub fn positive_indices(&self) -> Vec<i64> {
        let mut js: Vec<i64> = self.alphas.keys().map(|j| j.abs()).collect();
        js.sort_unstable();
        js.dedup();
        js
    }

    pub fn alpha(&self, j: i64) -> Complex64 {
        self.alphas.get(&j).copied().unwrap_or_default()
    }

    /// Checks that do not depend on n.
    pub fn validate(&self) -> Result<(), SymbolError> {
        if self.alphas.contains_key(&0) {
            return Err(SymbolError::ZeroIndex);
        }
        for j in self.positive_indices() {
            if !self.schedule.contains_key(&j) {
                return Err(SymbolError::MissingRule { j });
            }
            if self.hermitian && self.alpha(-j) != self.alpha(j).conj() {
                return Err(SymbolError::NotHermitian { j });
            }
        }
        Ok(())
    }

    /// k_j(n) for every positive index j, validated positive and distinct.
    pub fn frequencies(&self, n: usize) -> Result<BTreeMap<i64, i64>, SymbolError> {
        if n == 0 {
            return Err(SymbolError::ZeroN);
        }
        self.validate()?;
        let mut out = BTreeMap::new();
        let mut seen: BTreeMap<i64, i64> = BTreeMap::new();
        for j in self.positive_indices() {
            let k = self.schedule[&j].eval(j, n)?;
            if k <= 0 {
                return Err(SymbolError::NonPositiveFrequency { n, j, k });
            }
            if let Some(&j1) = seen.get(&k) {
                return Err(SymbolError::ScheduleCollision { n, j1, j2: j, k });
            }
            seen.insert(k, j);
            out.insert(j, k);
        }
        Ok(out)
    }

    /// A_1 = sum_j |alpha_j| over all signed indices.
    pub fn a1(&self) -> f64 {
        self.alphas.values().map(|a| a.norm()).sum()
    }

    /// A_2 = (sum_j |alpha_j|^2)^{1/2}.
    pub fn a2(&self) -> f64 {
        self.alphas.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiply every alpha by `s`; the hermitian flag survives only for real s.
    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            alphas: self.alphas.iter().map(|(&j, &a)| (j, a * s)).collect(),
            schedule: self.schedule.clone(),
            hermitian: self.hermitian && s.im == 0.0,
        }
    }

    /// Keep only |j| <= m.
    pub fn truncated(&self, m: i64) -> Self {
        Self {
            alphas: self.alphas.iter().filter(|(j, _)| j.abs() <= m).map(|(&j, &a)| (j, a)).collect(),
            schedule: self.schedule.iter().filter(|(j, _)| **j <= m).map(|(&j, r)| (j, r.clone())).collect(),
            hermitian: self.hermitian,
        }
    }
}

/// The symbol at size n as an exact finite Laurent series.
///
/// With `normalize` each term is divided by sqrt(min(|k_j(n)|, n)).
pub fn build_symbol(spec: &SymbolSpec, n: usize, normalize: bool) -> Result<LaurentSeries, SymbolError> {
    let ks = spec.frequencies(n)?;
    let pairs = spec.alphas.iter().map(|(&j, &a)| {
        let k = ks[&j.abs()] * j.signum();
        let w = if normalize { 1.0 / (k.unsigned_abs().min(n as u64) as f64).sqrt() } else { 1.0 };
        (k, a * w)
    });
    Ok(LaurentSeries::from_pairs(pairs))
}
