use std::fmt;

use cue_montecarlo::ScaledStatSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use symbol_core::{Complex64, FrequencyRule, SymbolSpec};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SzegoSweep,
    BoCheck,
    WidomCheck,
    BnResidual,
    Separation,
    LemmaBounds,
    Cancellation,
    CharFn,
    Moments,
    Truncation,
    MockGaussian,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::SzegoSweep,
        ExperimentKind::BoCheck,
        ExperimentKind::WidomCheck,
        ExperimentKind::BnResidual,
        ExperimentKind::Separation,
        ExperimentKind::LemmaBounds,
        ExperimentKind::Cancellation,
        ExperimentKind::CharFn,
        ExperimentKind::Moments,
        ExperimentKind::Truncation,
        ExperimentKind::MockGaussian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::SzegoSweep => "szego_sweep",
            ExperimentKind::BoCheck => "bo_check",
            ExperimentKind::WidomCheck => "widom_check",
            ExperimentKind::BnResidual => "bn_residual",
            ExperimentKind::Separation => "separation",
            ExperimentKind::LemmaBounds => "lemma_bounds",
            ExperimentKind::Cancellation => "cancellation",
            ExperimentKind::CharFn => "char_fn",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Truncation => "truncation",
            ExperimentKind::MockGaussian => "mock_gaussian",
        }
    }

    pub fn is_monte_carlo(self) -> bool {
        matches!(
            self,
            ExperimentKind::CharFn | ExperimentKind::Moments | ExperimentKind::Truncation | ExperimentKind::MockGaussian
        )
    }

    /// Experiments that accept a randomized spec grid in place of `spec`.
    pub fn accepts_grid(self) -> bool {
        matches!(self, ExperimentKind::BoCheck | ExperimentKind::WidomCheck | ExperimentKind::LemmaBounds)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { samples: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// tail tolerance for truncated symbol exponentials
    pub symbol_tol: f64,
    /// kernel-tail tolerance for Fredholm truncations
    pub fredholm_tol: f64,
    /// pass threshold for identity residuals
    pub identity_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { symbol_tol: 1e-14, fredholm_tol: 1e-14, identity_tol: 1e-8 }
    }
}

/// Randomized hermitian specs: `count` specs with low-frequency terms at
/// k = 1..=b (b uniform in 1..=max_bandwidth, |Re|, |Im| <= 0.6) and,
/// when `high_frequency` is set, one extra pair at k(n) = n + 1 or 2n
/// (|Re|, |Im| <= 0.8).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecGrid {
    pub count: usize,
    pub seed: u64,
    pub max_bandwidth: i64,
    #[serde(default)]
    pub high_frequency: bool,
}

impl SpecGrid {
    pub fn specs(&self) -> Vec<SymbolSpec> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let cx = |rng: &mut ChaCha8Rng, r: f64| {
            Complex64::new(r * rng.random_range(-1.0..1.0), r * rng.random_range(-1.0..1.0))
        };
        (0..self.count)
            .map(|_| {
                let bw = rng.random_range(1..=self.max_bandwidth);
                let mut terms: Vec<(Complex64, FrequencyRule)> =
                    (1..=bw).map(|k| (cx(&mut rng, 0.6), FrequencyRule::Fixed(k))).collect();
                if self.high_frequency {
                    let rule = if rng.random_bool(0.5) {
                        FrequencyRule::Affine { c: 1.0, d: 1 }
                    } else {
                        FrequencyRule::Affine { c: 2.0, d: 0 }
                    };
                    terms.push((cx(&mut rng, 0.8), rule));
                }
                SymbolSpec::hermitian_terms(terms)
            })
            .collect()
    }
}

/// One experiment invocation. Fields after `output_path` are only read by
/// the experiments that need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "SymbolSpec::empty")]
    pub spec: SymbolSpec,
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub output_path: String,
    /// powers k for `moments`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<i64>>,
    /// truncation levels m for `truncation`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_values: Option<Vec<i64>>,
    /// test function and scale exponent for `mock_gaussian`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled_stat: Option<ScaledStatSpec>,
    /// replaces `spec` for bo_check, widom_check and lemma_bounds
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<SpecGrid>,
}

fn err(path: impl Into<String>, msg: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: msg.into() }
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, spec: SymbolSpec, n_values: Vec<usize>) -> Self {
        Self {
            experiment,
            spec,
            n_values,
            mc: McConfig::default(),
            tolerances: Tolerances::default(),
            output_path: format!("{experiment}.csv"),
            ks: None,
            m_values: None,
            scaled_stat: None,
            grid: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| err("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form. Field order is fixed by the struct
    /// and maps are ordered, so equal configs hash equally.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The specs the experiment iterates over: the grid when given, else
    /// the single `spec`.
    pub fn specs(&self) -> Vec<SymbolSpec> {
        match &self.grid {
            Some(g) if self.experiment.accepts_grid() => g.specs(),
            _ => vec![self.spec.clone()],
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_values.is_empty() {
            return Err(err("n_values", "must be nonempty"));
        }
        for (i, &n) in self.n_values.iter().enumerate() {
            if n == 0 {
                return Err(err(format!("n_values[{i}]"), "must be at least 1"));
            }
            if i > 0 && n <= self.n_values[i - 1] {
                return Err(err(format!("n_values[{i}]"), "must be strictly increasing"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [("symbol_tol", t.symbol_tol), ("fredholm_tol", t.fredholm_tol), ("identity_tol", t.identity_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(err(format!("tolerances.{name}"), "must be positive and finite"));
            }
        }
        if self.experiment.is_monte_carlo() && self.mc.samples < 100 {
            return Err(err("mc.samples", "must be at least 100 for Monte Carlo experiments"));
        }
        if self.output_path.is_empty() {
            return Err(err("output_path", "must be nonempty"));
        }
        self.validate_spec()?;
        match self.experiment {
            ExperimentKind::Moments => {
                let ks = self.ks.as_ref().ok_or_else(|| err("ks", "required for moments"))?;
                if ks.is_empty() {
                    return Err(err("ks", "must be nonempty"));
                }
                for (i, &k) in ks.iter().enumerate() {
                    if k <= 0 {
                        return Err(err(format!("ks[{i}]"), "must be positive"));
                    }
                    if ks[..i].contains(&k) {
                        return Err(err(format!("ks[{i}]"), "duplicate power"));
                    }
                }
            }
            ExperimentKind::Truncation => {
                let ms = self.m_values.as_ref().ok_or_else(|| err("m_values", "required for truncation"))?;
                if ms.is_empty() {
                    return Err(err("m_values", "must be nonempty"));
                }
                if let Some(i) = ms.iter().position(|&m| m < 0) {
                    return Err(err(format!("m_values[{i}]"), "must be nonnegative"));
                }
                if !self.spec.hermitian {
                    return Err(err("spec.hermitian", "truncation needs a hermitian spec"));
                }
            }
            ExperimentKind::MockGaussian => {
                let s = self.scaled_stat.as_ref().ok_or_else(|| err("scaled_stat", "required for mock_gaussian"))?;
                s.validate().map_err(|e| err("scaled_stat", e.to_string()))?;
            }
            ExperimentKind::CharFn if !self.spec.hermitian => {
                return Err(err("spec.hermitian", "char_fn needs a hermitian spec (real statistic)"));
            }
            _ => {}
        }
        if let Some(g) = &self.grid {
            if !self.experiment.accepts_grid() {
                return Err(err("grid", format!("not used by {}", self.experiment)));
            }
            if g.count == 0 {
                return Err(err("grid.count", "must be positive"));
            }
            if g.max_bandwidth < 1 {
                return Err(err("grid.max_bandwidth", "must be at least 1"));
            }
        }
        Ok(())
    }

    fn validate_spec(&self) -> Result<(), ConfigError> {
        for (&j, a) in &self.spec.alphas {
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(err(format!("spec.alphas.{j}"), "must be finite"));
            }
        }
        self.spec.validate().map_err(|e| err("spec", e.to_string()))?;
        // schedule collisions and nonpositive frequencies depend on n
        for &n in &self.n_values {
            self.spec.frequencies(n).map_err(|e| err("spec.schedule", format!("at n = {n}: {e}")))?;
        }
        Ok(())
    }

    /// The same config restricted to a single n.
    pub fn at_n(&self, n: usize) -> Self {
        Self { n_values: vec![n], ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical() -> ExperimentConfig {
        ExperimentConfig::new(
            ExperimentKind::SzegoSweep,
            SymbolSpec::pair(Complex64::new(1.0, 0.0), FrequencyRule::Fixed(1)),
            vec![8, 16, 32],
        )
    }

    #[test]
    fn names_match_serde() {
        for k in ExperimentKind::ALL {
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
    }

    #[test]
    fn field_paths_in_errors() {
        let mut c = classical();
        c.n_values = vec![8, 8];
        assert_eq!(c.validate().unwrap_err().path, "n_values[1]");
        let mut c = classical();
        c.tolerances.fredholm_tol = 0.0;
        assert_eq!(c.validate().unwrap_err().path, "tolerances.fredholm_tol");
        let mut c = classical();
        c.experiment = ExperimentKind::CharFn;
        c.mc.samples = 99;
        assert_eq!(c.validate().unwrap_err().path, "mc.samples");
        let mut c = classical();
        c.spec.schedule.insert(2, FrequencyRule::Fixed(1));
        c.spec.alphas.insert(2, Complex64::new(0.5, 0.0));
        c.spec.alphas.insert(-2, Complex64::new(0.5, 0.0));
        assert_eq!(c.validate().unwrap_err().path, "spec.schedule");
        let mut c = classical();
        c.experiment = ExperimentKind::Moments;
        assert_eq!(c.validate().unwrap_err().path, "ks");
        c.ks = Some(vec![1, 0]);
        assert_eq!(c.validate().unwrap_err().path, "ks[1]");
    }

    #[test]
    fn grid_is_deterministic_and_bounded() {
        let g = SpecGrid { count: 30, seed: 3, max_bandwidth: 4, high_frequency: true };
        let a = g.specs();
        assert_eq!(a, g.specs());
        for s in &a {
            s.validate().unwrap();
            assert!(s.hermitian);
            let low = s.schedule.values().filter(|r| matches!(r, FrequencyRule::Fixed(_))).count();
            assert!((1..=4).contains(&low));
            assert_eq!(s.schedule.len(), low + 1);
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = classical();
        let mut b = classical();
        assert_eq!(a.hash(), b.hash());
        b.mc.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
