use serde::{Deserialize, Serialize};
use symbol_core::{Complex64, SymbolSpec};

use crate::error::EngineError;

/// C1 = sum over k_j <= n of alpha_j alpha_{-j}, C2 over k_j > n, and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoConstants {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c_total: Complex64,
}

pub fn szego_constants(spec: &SymbolSpec, n: usize) -> Result<SzegoConstants, EngineError> {
    let ks = spec.frequencies(n)?;
    let mut c1 = Complex64::new(0.0, 0.0);
    let mut c2 = Complex64::new(0.0, 0.0);
    for (&j, &k) in &ks {
        let p = spec.alpha(j) * spec.alpha(-j);
        if k as u64 <= n as u64 {
            c1 += p;
        } else {
            c2 += p;
        }
    }
    Ok(SzegoConstants { c1, c2, c_total: c1 + c2 })
}
