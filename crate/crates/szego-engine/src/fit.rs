use serde::{Deserialize, Serialize};

/// Least-squares line through (ln n, ln err).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Fit on points given as (n, ln err). Non-finite logs are skipped; fewer
/// than three usable points gives `None`.
pub fn fit_log_rate(points: &[(f64, f64)]) -> Option<RateFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, y)| *n > 0.0 && y.is_finite())
        .map(|&(n, y)| (n.ln(), y))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(RateFit { slope, intercept, r2, points: pts.len() })
}

/// Fit on (n, err) pairs, keeping only err > noise_floor.
pub fn fit_rate(points: &[(f64, f64)], noise_floor: f64) -> Option<RateFit> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1 > noise_floor).map(|&(n, e)| (n, e.ln())).collect();
    fit_log_rate(&logs)
}
