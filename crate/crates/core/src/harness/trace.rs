//! Per-sample comparison of the requested currents along the boundary.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt::Write;

use super::config::{HarnessConfig, MIN_SAMPLES};
use super::num;
use crate::ansatz::{bt1_leading_amplitude, bt2_leading_amplitude, mt_leading_amplitude};
use crate::currents::{
    bt1_current, bt2_current_2d, bt2_current_3d_form, kirchhoff_current, CurrentKind,
};
use crate::error::{Error, Result};
use crate::geometry::{classify, CurveGeometry, Region};
use crate::reference::{exact_current, mie_build};

/// One boundary sample: angle, `n·ω`, region and one value per kind.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub theta: f64,
    pub n_dot_omega: f64,
    pub region: Region,
    pub values: Vec<Complex64>,
}

/// Currents sampled at uniformly spaced, strictly increasing θ ∈ [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentTrace {
    pub k: f64,
    pub kinds: Vec<CurrentKind>,
    pub rows: Vec<TraceRow>,
}

impl CurrentTrace {
    /// Values of one kind, if it was requested.
    pub fn column(&self, kind: CurrentKind) -> Option<Vec<Complex64>> {
        let idx = self.kinds.iter().position(|k| *k == kind)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = trace_header(&self.kinds);
        out.push('\n');
        for row in &self.rows {
            write!(out, "{},{},{}", num(row.theta), num(row.n_dot_omega), row.region.as_str()).unwrap();
            for v in &row.values {
                write!(out, ",{},{},{}", num(v.re), num(v.im), num(v.norm())).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// CSV header for a trace with the given kinds.
pub fn trace_header(kinds: &[CurrentKind]) -> String {
    let mut h = String::from("theta,n_dot_omega,region");
    for k in kinds {
        write!(h, ",{k}_re,{k}_im,{k}_abs").unwrap();
    }
    h
}

/// Evaluate every requested kind at `cfg.samples` uniformly spaced angles.
pub fn run_trace(cfg: &HarnessConfig) -> Result<CurrentTrace> {
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::config(format!(
            "trace.samples must be at least {MIN_SAMPLES}, got {}",
            cfg.samples
        )));
    }
    if cfg.kinds.is_empty() {
        return Err(Error::config("trace.kinds is empty"));
    }
    let geom = cfg.geometry()?;
    let wave = cfg.wave()?;
    let exact = if cfg.kinds.contains(&CurrentKind::Exact) {
        match geom {
            CurveGeometry::Circle { radius } => Some(mie_build(radius, wave.k)?),
            CurveGeometry::Ellipse { .. } => {
                return Err(Error::config("the exact current is only available for the circle"))
            }
        }
    } else {
        None
    };
    let expansion = cfg.expansion();
    let n = cfg.samples;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / n as f64;
            let label = classify(&geom, &wave, theta, cfg.region_epsilon)?;
            let values = cfg
                .kinds
                .iter()
                .map(|kind| {
                    Ok(match kind {
                        CurrentKind::Kirchhoff => kirchhoff_current(&geom, &wave, theta, cfg.kirchhoff_shadow),
                        CurrentKind::Bt1 => bt1_current(&geom, &wave, theta),
                        CurrentKind::Bt2_2d => bt2_current_2d(&geom, &wave, theta),
                        CurrentKind::Bt2_3dForm => bt2_current_3d_form(&geom, &wave, theta),
                        CurrentKind::Exact => exact_current(exact.as_ref().expect("built above"), theta, &wave),
                        CurrentKind::AnsatzMt => mt_leading_amplitude(&geom, &wave, theta, &expansion)?,
                        CurrentKind::AnsatzBt1 => bt1_leading_amplitude(&geom, &wave, theta, &expansion)?,
                        CurrentKind::AnsatzBt2 => bt2_leading_amplitude(&geom, &wave, theta, &expansion)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::Overflow(format!("non-finite current {v} at θ = {theta}")));
            }
            Ok(TraceRow {
                theta,
                n_dot_omega: label.n_dot_omega,
                region: label.region,
                values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurrentTrace {
        k: wave.k,
        kinds: cfg.kinds.clone(),
        rows,
    })
}
