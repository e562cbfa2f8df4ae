//! Tabulation of Ψ, Ψ' and Ψ''.

use num_complex::Complex64;
use std::fmt::Write;

use super::num;
use crate::error::{Error, Result};
use crate::fock::{EvalPath, FockEvaluator, TAU_MAX, TAU_MIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiRow {
    pub l: usize,
    pub tau: f64,
    pub value: Complex64,
    pub path: EvalPath,
    pub err_estimate: f64,
}

/// Rows `τ = tau_min + i·step ≤ tau_max` for each of l = 0, 1, 2 (all l = 0
/// rows first). The grid count is rounded so that an endpoint reached up to
/// rounding is included.
pub fn dump_psi_table(tau_min: f64, tau_max: f64, step: f64, eval: &FockEvaluator) -> Result<Vec<PsiRow>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::domain(format!("table step must be positive, got {step}")));
    }
    if !(tau_min >= TAU_MIN && tau_max <= TAU_MAX && tau_min <= tau_max) {
        return Err(Error::domain(format!(
            "table range [{tau_min}, {tau_max}] must be an interval inside [{TAU_MIN}, {TAU_MAX}]"
        )));
    }
    let count = ((tau_max - tau_min) / step * (1.0 + 1e-12)).floor() as usize + 1;
    let evals = (0..count)
        .map(|i| eval.eval_all(tau_min + step * i as f64))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(3 * count);
    for l in 0..3 {
        for e in &evals {
            rows.push(PsiRow {
                l,
                tau: e[l].tau,
                value: e[l].value,
                path: e[l].path,
                err_estimate: e[l].err_estimate,
            });
        }
    }
    Ok(rows)
}

pub fn psi_table_csv(rows: &[PsiRow]) -> String {
    let mut out = String::from("l,tau,re,im,path,err_estimate\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.l,
            num(r.tau),
            num(r.value.re),
            num(r.value.im),
            r.path.as_str(),
            num(r.err_estimate)
        )
        .unwrap();
    }
    out
}
