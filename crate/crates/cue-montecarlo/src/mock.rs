//! Scaled linear statistics X_n = sum_mu f(n^gamma theta_mu) and their
//! limiting variances.
//!
//! Fourier convention: fhat(y) = int f(x) e^{-ixy} dx. Then
//!   sigma^2      = (1/4 pi^2) int |y| |fhat(y)|^2 dy        (0 < gamma < 1)
//!   sigma^2_mock = (1/4 pi^2) int min(|y|, 1) |fhat(y)|^2 dy (gamma = 1)

use std::f64::consts::PI;

use quadrature::double_exponential;
use serde::{Deserialize, Serialize};
use symbol_core::Complex64;

use crate::error::McError;
use crate::stats::{map_samples, McEstimate};

/// Quadrature target, relative to the size of the integral.
pub const QUAD_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestFunction {
    /// f(x) = d/dx exp(-1 / (1 - (x/s)^2)) on |x| < s, zero outside.
    BumpDerivative { scale: f64 },
    /// f given by fhat on 0 = y_0 < y_1 < ... < y_m, linear between nodes,
    /// zero beyond y_m and fhat(-y) = conj(fhat(y)) so that f is real.
    /// fhat(0) must be 0.
    Bandlimited { y: Vec<f64>, fhat: Vec<Complex64> },
}

/// exp(-1 / (1 - u^2)) for |u| < 1, else 0.
fn bump(u: f64) -> f64 {
    let t = 1.0 - u * u;
    // exp(-1/t) is below 1e-400 long before t reaches the underflow range
    if t <= 1e-3 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// int_0^1 e^{i theta t} dt and int_0^1 t e^{i theta t} dt.
fn segment_moments(theta: f64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    if theta.abs() < 0.5 {
        // Taylor series: sum (i theta)^m / (m+1)!, sum (i theta)^m / ((m+2) m!)
        let (mut e0, mut e1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut p = Complex64::new(1.0, 0.0); // (i theta)^m / m!
        for m in 0..24 {
            e0 += p / (m + 1) as f64;
            e1 += p / (m + 2) as f64;
            p *= i * theta / (m + 1) as f64;
        }
        (e0, e1)
    } else {
        let e = Complex64::from_polar(1.0, theta);
        let e0 = (e - 1.0) / (i * theta);
        let e1 = (e - e0) / (i * theta);
        (e0, e1)
    }
}

/// Tanh-sinh rule for int_0^s phi(x) g(x) dx with phi(x) = bump(x/s):
/// x = (s/2)(1 + tanh((pi/2) sinh t)), t = k h, |t| <= T_MAX, with phi
/// folded into the weights. Steps 2^j h reuse every 2^j-th node, so one
/// table serves every resolution up to the finest.
struct BumpRule {
    s: f64,
    h: f64,
    x: Vec<f64>,
    wphi: Vec<f64>,
}

impl BumpRule {
    const T_MAX: f64 = 3.5;
    const COARSEST: f64 = 1.0 / 32.0;

    /// Finest step 2^-m <= h_max (and <= COARSEST).
    fn new(s: f64, h_max: f64) -> BumpRule {
        let mut h = Self::COARSEST;
        while h > h_max {
            h *= 0.5;
        }
        // a multiple of every stride, so that strided sums stay centred on t = 0
        let kmax = (Self::T_MAX / Self::COARSEST).ceil() as i64 * (Self::COARSEST / h).round() as i64;
        let half_pi = std::f64::consts::FRAC_PI_2;
        let (mut x, mut wphi) = (Vec::new(), Vec::new());
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let u = half_pi * t.sinh();
            let ch = u.cosh();
            let xi = 0.5 * s * (1.0 + u.tanh());
            x.push(xi);
            wphi.push(0.5 * s * half_pi * t.cosh() / (ch * ch) * h * bump(xi / s));
        }
        BumpRule { s, h, x, wphi }
    }

    /// Step resolving cos(xy) on [0, s] for |y| <= y_max with about 4
    /// nodes per period at the centre of the interval; finer steps only
    /// add rounding noise (measured floor ~1e-14 absolute).
    fn step_for(s: f64, y_max: f64) -> f64 {
        Self::COARSEST.min(2.0 / (s * y_max.max(1e-300)))
    }

    /// Stride into the table for |y| <= y_max; None if the table is too coarse.
    fn stride(&self, y_max: f64) -> Option<usize> {
        let want = Self::step_for(self.s, y_max);
        if want < self.h {
            return None;
        }
        let mut st = 1;
        while self.h * (2 * st) as f64 <= want {
            st *= 2;
        }
        Some(st)
    }

    /// fhat(y) = 2 i y int_0^s phi(x) cos(xy) dx for f = phi'.
    fn fhat(&self, y: f64, stride: usize) -> Complex64 {
        let acc: f64 = self.x.iter().zip(&self.wphi).step_by(stride).map(|(x, w)| w * (x * y).cos()).sum();
        Complex64::new(0.0, 2.0 * y * acc * stride as f64)
    }
}

/// Largest s * y for which variance integrals resolve fhat; the bump
/// transform is negligible long before this.
const MAX_SY: f64 = 4096.0;

/// Integrals 2 int_0^inf w(y) |fhat(y)|^2 dy for w = |y| and min(|y|, 1).
#[derive(Debug, Clone, Copy)]
struct Energies {
    sosh: f64,
    mock: f64,
    /// y beyond which fhat was treated as zero
    y_cut: f64,
}

impl TestFunction {
    pub fn validate(&self) -> Result<(), McError> {
        match self {
            TestFunction::BumpDerivative { scale } => {
                if !(*scale > 0.0 && *scale <= PI) {
                    return Err(McError::Invalid(format!("bump scale {scale} must lie in (0, pi]")));
                }
            }
            TestFunction::Bandlimited { y, fhat } => {
                if y.len() != fhat.len() || y.len() < 2 {
                    return Err(McError::Invalid("fhat table needs at least two (y, fhat) pairs".into()));
                }
                if y[0] != 0.0 || fhat[0] != Complex64::new(0.0, 0.0) {
                    return Err(McError::Invalid("fhat table must start at y = 0 with fhat(0) = 0".into()));
                }
                if y.windows(2).any(|w| !(w[1] > w[0])) || !y.iter().all(|v| v.is_finite()) {
                    return Err(McError::Invalid("fhat table nodes must be finite and strictly increasing".into()));
                }
                if !fhat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                    return Err(McError::Invalid("fhat table values must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// f(x).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::BumpDerivative { scale } => {
                let u = x / scale;
                let t = 1.0 - u * u;
                if t <= 1e-3 {
                    0.0
                } else {
                    bump(u) * (-2.0 * u / (t * t)) / scale
                }
            }
            TestFunction::Bandlimited { y, fhat } => {
                // f(x) = (1/pi) Re int_0^Y fhat(y) e^{ixy} dy, exact per linear piece
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..y.len() - 1 {
                    let h = y[k + 1] - y[k];
                    let (e0, e1) = segment_moments(x * h);
                    let lin = fhat[k] * e0 + (fhat[k + 1] - fhat[k]) * e1;
                    acc += Complex64::from_polar(h, x * y[k]) * lin;
                }
                acc.re / PI
            }
        }
    }

    /// fhat(y) = int f(x) e^{-ixy} dx.
    pub fn fhat(&self, y: f64) -> Complex64 {
        match self {
            TestFunction::BumpDerivative { scale } => {
                let rule = BumpRule::new(*scale, BumpRule::step_for(*scale, y.abs()));
                rule.fhat(y, 1)
            }
            TestFunction::Bandlimited { .. } => self.table_fhat(y),
        }
    }

    fn table_fhat(&self, y: f64) -> Complex64 {
        match self {
            TestFunction::BumpDerivative { .. } => unreachable!("table_fhat on a bump"),
            TestFunction::Bandlimited { y: ys, fhat } => {
                let t = y.abs();
                let last = *ys.last().expect("validated table");
                let v = if t > last {
                    Complex64::new(0.0, 0.0)
                } else if t == last {
                    *fhat.last().expect("validated table")
                } else {
                    let k = ys.partition_point(|&v| v <= t) - 1;
                    let r = (t - ys[k]) / (ys[k + 1] - ys[k]);
                    fhat[k] * (1.0 - r) + fhat[k + 1] * r
                };
                if y < 0.0 {
                    v.conj()
                } else {
                    v
                }
            }
        }
    }

    /// Panels covering the y-range where |fhat| matters: table intervals for
    /// the bandlimited family, geometric panels (cut adaptively) for the
    /// bump. The ratio 1.25 keeps the decay across one panel mild enough
    /// for the quadrature error estimate to be reliable. y = 1, the kink
    /// of min(|y|, 1), is always an edge.
    fn panels(&self) -> Vec<(f64, f64)> {
        let mut edges = match self {
            TestFunction::BumpDerivative { scale } => {
                let mut e = vec![0.0];
                let mut y = 1.0 / scale;
                while scale * y < MAX_SY {
                    e.push(y);
                    y *= 1.25;
                }
                e
            }
            TestFunction::Bandlimited { y, .. } => y.clone(),
        };
        let last = *edges.last().expect("at least one edge");
        if last > 1.0 && !edges.contains(&1.0) {
            edges.push(1.0);
            edges.sort_by(f64::total_cmp);
        }
        edges.windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn energies(&self) -> Result<Energies, McError> {
        self.validate()?;
        let rule = match self {
            TestFunction::BumpDerivative { scale } => Some(BumpRule::new(*scale, BumpRule::step_for(*scale, MAX_SY / scale))),
            TestFunction::Bandlimited { .. } => None,
        };
        // fhat at fixed resolution over a panel, so the integrand is smooth there
        let fhat_on = |b: f64| -> Result<Box<dyn Fn(f64) -> Complex64 + '_>, McError> {
            Ok(match &rule {
                Some(r) => {
                    let st = r.stride(b).ok_or(McError::Quadrature { what: "fhat resolution", tol: QUAD_REL_TOL, achieved: 1.0 })?;
                    Box::new(move |y| r.fhat(y, st))
                }
                None => Box::new(|y| self.table_fhat(y)),
            })
        };
        let panels = self.panels();
        // absolute target per panel from a coarse pass over the bulk
        let bulk = panels.iter().take(8).try_fold(0.0, |acc, &(a, b)| -> Result<f64, McError> {
            let f = fhat_on(b)?;
            Ok(acc + double_exponential::integrate(|y| y * f(y).norm_sqr(), a, b, 1e-6).integral)
        })?;
        let tol = 1e-12 * bulk.abs().max(1e-290);
        let (mut sosh, mut mock, mut err, mut y_cut) = (0.0, 0.0, 0.0, 0.0);
        for (a, b) in panels {
            let f = fhat_on(b)?;
            let o1 = double_exponential::integrate(|y| y * f(y).norm_sqr(), a, b, tol);
            let o2 = double_exponential::integrate(|y| y.min(1.0) * f(y).norm_sqr(), a, b, tol);
            sosh += o1.integral;
            mock += o2.integral;
            err = f64::max(err, (o1.error_estimate / sosh.abs().max(1e-300)).max(o2.error_estimate / mock.abs().max(1e-300)));
            y_cut = b;
            // the bump transform decays like exp(-c sqrt(y)); stop once a
            // whole panel is negligible
            if rule.is_some() && a > 0.0 && o1.integral.abs() <= 1e-13 * sosh {
                break;
            }
        }
        Ok(Energies { sosh: 2.0 * sosh, mock: 2.0 * mock, y_cut }).and_then(|e| {
            if sosh != 0.0 && !(err <= QUAD_REL_TOL) {
                Err(McError::Quadrature { what: "variance integral", tol: QUAD_REL_TOL, achieved: err })
            } else {
                Ok(e)
            }
        })
    }

    /// (1/4 pi^2) int |y| |fhat(y)|^2 dy.
    pub fn soshnikov_variance(&self) -> Result<f64, McError> {
        Ok(self.energies()?.sosh / (4.0 * PI * PI))
    }

    /// (1/4 pi^2) int min(|y|, 1) |fhat(y)|^2 dy.
    pub fn mock_variance(&self) -> Result<f64, McError> {
        Ok(self.energies()?.mock / (4.0 * PI * PI))
    }

    /// Both limiting variances, (soshnikov, mock), from one pass.
    pub fn limit_variances(&self) -> Result<(f64, f64), McError> {
        let e = self.energies()?;
        Ok((e.sosh / (4.0 * PI * PI), e.mock / (4.0 * PI * PI)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledStatSpec {
    pub test_function: TestFunction,
    pub gamma: f64,
}

impl ScaledStatSpec {
    pub fn validate(&self) -> Result<(), McError> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(McError::Invalid(format!("gamma {} must lie in (0, 1]", self.gamma)));
        }
        self.test_function.validate()
    }

    /// X_n for one sample.
    pub fn statistic(&self, phases: &[f64]) -> f64 {
        let scale = (phases.len() as f64).powf(self.gamma);
        phases.iter().map(|&t| self.test_function.eval(scale * t)).sum()
    }

    /// Exact Var X_n over CUE(n): sum_{j != 0} |c_j|^2 min(|j|, n), with
    /// c_j = fhat(j / n^gamma) / (2 pi n^gamma) the Fourier coefficients of
    /// theta -> f(n^gamma theta). Exact when f(n^gamma .) is supported in
    /// [-pi, pi], as for the bump family with s <= pi.
    pub fn finite_n_variance(&self, n: usize) -> Result<f64, McError> {
        self.validate()?;
        let tf = &self.test_function;
        let scale = (n as f64).powf(self.gamma);
        let y_cut = tf.energies()?.y_cut;
        let jmax = (y_cut * scale).ceil() as usize;
        let fhat: Box<dyn Fn(f64) -> Complex64> = match tf {
            TestFunction::BumpDerivative { scale: s } => {
                let rule = BumpRule::new(*s, BumpRule::step_for(*s, y_cut));
                Box::new(move |y| rule.fhat(y, rule.stride(y).expect("rule built for y_cut")))
            }
            TestFunction::Bandlimited { .. } => Box::new(|y| tf.table_fhat(y)),
        };
        let mut total = 0.0;
        for j in 1..=jmax {
            let c = fhat(j as f64 / scale).norm_sqr() / (2.0 * PI * scale).powi(2);
            total += c * j.min(n) as f64;
        }
        Ok(2.0 * total)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockGaussianResult {
    pub n: usize,
    pub gamma: f64,
    /// E X_n
    pub mean: McEstimate,
    /// Var X_n; stderr sqrt((m4 - s^4) / N)
    pub variance: McEstimate,
    pub sigma2_soshnikov: f64,
    pub sigma2_mock: f64,
    /// exact finite-n variance, see `ScaledStatSpec::finite_n_variance`
    pub sigma2_finite_n: f64,
    /// empirical central moments of orders 2, 3, 4
    pub central_moments: [f64; 3],
}

/// Empirical mean and variance of X_n = sum_mu f(n^gamma theta_mu) over
/// CUE(n), reported next to both limiting variances.
pub fn mock_gaussian_experiment(
    stat: &ScaledStatSpec,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<MockGaussianResult, McError> {
    stat.validate()?;
    if samples < 2 {
        return Err(McError::Invalid("mock_gaussian_experiment needs at least 2 samples".into()));
    }
    let (sigma2_soshnikov, sigma2_mock) = stat.test_function.limit_variances()?;
    let xs = map_samples(n, samples, seed, |s| stat.statistic(&s.phases))?;
    let mean = McEstimate::from_real(&xs, seed);
    let m = mean.mean.re;
    let nf = samples as f64;
    let c = |p: i32| xs.iter().map(|x| (x - m).powi(p)).sum::<f64>() / nf;
    let (m2, m3, m4) = (c(2), c(3), c(4));
    let s2 = m2 * nf / (nf - 1.0);
    let variance = McEstimate {
        mean: Complex64::new(s2, 0.0),
        stderr: ((m4 - s2 * s2).max(0.0) / nf).sqrt(),
        samples,
        seed,
    };
    Ok(MockGaussianResult {
        n,
        gamma: stat.gamma,
        mean,
        variance,
        sigma2_soshnikov,
        sigma2_mock,
        sigma2_finite_n: stat.finite_n_variance(n)?,
        central_moments: [m2, m3, m4],
    })
}
