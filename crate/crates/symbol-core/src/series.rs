use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Finite Laurent series `sum_k c_k z^k` with two error certificates.
///
/// `tail_bound` bounds the l1 mass of the true coefficients outside the
/// stored support; `coeff_error` bounds the l1 distance between the stored
/// coefficients and the true ones on the support (aliasing and rounding).
/// Their sum bounds the Wiener-norm distance to the exact function.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LaurentSeries {
    pub coeffs: BTreeMap<i64, Complex64>,
    pub tail_bound: f64,
    pub coeff_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Plus,
    Minus,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_pairs([(0, c)])
    }

    /// Exact series from (frequency, coefficient) pairs; repeated
    /// frequencies are summed and exact zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in pairs {
            *coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self { coeffs, tail_bound: 0.0, coeff_error: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Coefficients on `lo..=hi` as a dense vector (index 0 is frequency `lo`).
    pub fn dense(&self, lo: i64, hi: i64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1).max(0) as usize];
        for (&k, &c) in self.coeffs.range(lo..=hi) {
            out[(k - lo) as usize] = c;
        }
        out
    }

    /// Largest |k| in the support (0 for the empty series).
    pub fn bandwidth(&self) -> i64 {
        let lo = self.coeffs.keys().next().map_or(0, |k| k.abs());
        let hi = self.coeffs.keys().next_back().map_or(0, |k| k.abs());
        lo.max(hi)
    }

    pub fn min_freq(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_freq(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Total certified Wiener-norm error.
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.coeff_error
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().map(|(&k, &c)| c * z.powi(k as i32)).sum()
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, &c)| c * Complex64::from_polar(1.0, k as f64 * theta))
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::from_pairs(self.coeffs.iter().map(|(&k, &c)| (k, c * s)));
        out.tail_bound = self.tail_bound * s.norm();
        out.coeff_error = self.coeff_error * s.norm();
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::from_pairs(
            self.coeffs.iter().chain(other.coeffs.iter()).map(|(&k, &c)| (k, c)),
        );
        out.tail_bound = self.tail_bound + other.tail_bound;
        out.coeff_error = self.coeff_error + other.coeff_error;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `c_k -> c_{-k}`, i.e. the function `c(1/z)`.
    pub fn flip(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (-k, c)).collect(),
            tail_bound: self.tail_bound,
            coeff_error: self.coeff_error,
        }
    }

    /// Coefficient convolution. Error bounds follow from the Wiener-algebra
    /// product inequality.
    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (&k1, &c1) in &self.coeffs {
            for (&k2, &c2) in &other.coeffs {
                *acc.entry(k1 + k2).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        let (w1, w2) = (self.l1(), other.l1());
        let (e1, e2) = (self.error_bound(), other.error_bound());
        Self {
            coeffs: acc,
            tail_bound: 0.0,
            coeff_error: w1 * e2 + w2 * e1 + e1 * e2,
        }
    }

    /// Sum of |c_k| over the stored support.
    pub fn l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Keep only frequencies in `lo..=hi`; the dropped l1 mass is moved into
    /// `tail_bound`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let mut dropped = 0.0;
        let mut coeffs = BTreeMap::new();
        for (&k, &c) in &self.coeffs {
            if (lo..=hi).contains(&k) {
                coeffs.insert(k, c);
            } else {
                dropped += c.norm();
            }
        }
        Self { coeffs, tail_bound: self.tail_bound + dropped, coeff_error: self.coeff_error }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Half-line projection: `Plus` keeps k > 0 (and k = 0), `Minus` keeps k < 0.
pub fn project_half(g: &LaurentSeries, sign: Half) -> LaurentSeries {
    let coeffs = match sign {
        Half::Plus => g.coeffs.range(0..).map(|(&k, &c)| (k, c)).collect(),
        Half::Minus => g.coeffs.range(..0).map(|(&k, &c)| (k, c)).collect(),
    };
    LaurentSeries { coeffs, tail_bound: 0.0, coeff_error: 0.0 }
}

/// Result of splitting a symbol at threshold n.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub g1: LaurentSeries,
    pub g2: LaurentSeries,
    /// True when a frequency-0 term was present (it is placed in `g1`).
    pub had_zero_term: bool,
}

/// `g1` carries 0 < |k| <= n (plus any k = 0 term), `g2` carries |k| > n.
pub fn split_symbol(g: &LaurentSeries, n: usize) -> Split {
    let n = n as i64;
    let mut g1 = BTreeMap::new();
    let mut g2 = BTreeMap::new();
    for (&k, &c) in &g.coeffs {
        if k.abs() <= n {
            g1.insert(k, c);
        } else {
            g2.insert(k, c);
        }
    }
    Split {
        had_zero_term: g.coeffs.contains_key(&0),
        g1: LaurentSeries { coeffs: g1, tail_bound: 0.0, coeff_error: 0.0 },
        g2: LaurentSeries { coeffs: g2, tail_bound: 0.0, coeff_error: 0.0 },
    }
}
