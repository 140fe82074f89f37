use serde::{Deserialize, Serialize};
use symbol_core::{build_symbol, exp_symbol, split_symbol, LaurentSeries, SymbolSpec};
use toeplitz_linalg::{det2, toeplitz_matrix, LogDet};

use crate::constants::szego_constants;
use crate::determinants::{bo_evaluate_symbol, coeff_tol, fredholm_bound, spec_phi_psi};
use crate::error::EngineError;

/// One inequality `value <= bound` evaluated at one grid point.
///
/// `slack` is the floating-point allowance used in `holds`: a small
/// multiple of the rounding error of `value`, never a modelling margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub quantity: String,
    pub n: usize,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(quantity: &str, n: usize, value: f64, bound: f64, slack: f64) -> Self {
        Self { quantity: quantity.into(), n, value, bound, slack, holds: value <= bound + slack }
    }

    /// Strict form for inequalities stated with `<`. Both sides exactly zero
    /// (the zero symbol) counts as holding.
    pub fn strict(quantity: &str, n: usize, value: f64, bound: f64) -> Self {
        let holds = value < bound || (value == 0.0 && bound == 0.0);
        Self { quantity: quantity.into(), n, value, bound, slack: 0.0, holds }
    }
}

/// sum_{|k| < n} (n - |k|) |c_k|^2, the squared HS norm of T_n(c).
pub fn toeplitz_hs_sq(c: &LaurentSeries, n: usize) -> f64 {
    let n = n as i64;
    c.coeffs.range(-(n - 1)..=(n - 1)).map(|(&k, v)| (n - k.abs()) as f64 * v.norm_sqr()).sum()
}

/// The two lemmas on b = e^{g2}:
///   |Tr T_n(b-1) - C2| <= n (e^{A1/sqrt n} - 1)^2 - A1^2
///   ||T_n(b-1)||_2     <= sqrt(n) (e^{A1/sqrt n} - 1)^2
/// plus the det2 inequality for A = T_n(b-1) when `with_det2` is set.
pub fn lemma_bound_checks(spec: &SymbolSpec, n: usize, with_det2: bool) -> Result<Vec<BoundCheck>, EngineError> {
    let g2 = split_symbol(&build_symbol(spec, n, true)?, n).g2;
    let c2 = szego_constants(spec, n)?.c2;
    let a1 = spec.a1();
    let mut b = exp_symbol(&g2, n as i64 - 1, coeff_tol(&g2))?;
    let one = b.coeff(0);
    b.coeffs.insert(0, one - 1.0);
    let bm1 = b;
    let nf = n as f64;
    let e = (a1 / nf.sqrt()).exp_m1();
    let trace = bm1.coeff(0) * nf;
    let eps = f64::EPSILON;
    let mut out = vec![
        BoundCheck::new(
            "trace_lemma",
            n,
            (trace - c2).norm(),
            nf * e * e - a1 * a1,
            64.0 * eps * (nf * (1.0 + a1 * a1) + c2.norm()),
        ),
        BoundCheck::new("hs_lemma", n, toeplitz_hs_sq(&bm1, n).sqrt(), nf.sqrt() * e * e, 64.0 * eps * nf),
    ];
    if with_det2 {
        let d = det2(&toeplitz_matrix(&bm1, n))?;
        out.push(BoundCheck::new("det2_bound", n, (d.value - 1.0).norm(), d.bound, 64.0 * eps * nf));
    }
    Ok(out)
}

/// Fredholm-determinant lemma and the majorant corollary at one n:
///   |det(I - K) - 1|          <= exp(|Q_n H(phi)|_2 |H(psi) Q_n|_2) - 1
///   sum_k k |phi_{k+n}|^2      <  A1 (e^{A1} - 1) / n   (and for psi)
///   exp(bound) - 1 dominated by exp(corollary) - 1
pub fn fredholm_checks(spec: &SymbolSpec, n: usize, tol: f64) -> Result<Vec<BoundCheck>, EngineError> {
    let g1 = split_symbol(&build_symbol(spec, n, true)?, n).g1;
    let c1 = szego_constants(spec, n)?.c1;
    let (phi, psi) = spec_phi_psi(spec, n)?;
    let fb = fredholm_bound(&phi, &psi, n, spec.a1());
    let bo = bo_evaluate_symbol(&g1, n, c1, None, tol)?;
    // |det - 1| without cancellation in the subtraction
    let dev = LogDet::ONE.rel_diff(&bo.fredholm);
    let eps = f64::EPSILON;
    Ok(vec![
        BoundCheck::new("fredholm_lemma", n, dev, fb.bound, bo.kernel_tail + 8.0 * eps * bo.fredholm_size as f64),
        BoundCheck::strict("majorant_corollary_phi", n, fb.hs_phi_sq, fb.corollary),
        BoundCheck::strict("majorant_corollary_psi", n, fb.hs_psi_sq, fb.corollary),
        BoundCheck::new("fredholm_via_corollary", n, fb.bound, fb.corollary.exp_m1(), 64.0 * eps),
    ])
}
