//! Wavenumber sweeps: error-rate and band-growth estimates plus the scaling
//! studies of the closed-form currents.

use std::f64::consts::PI;
use std::fmt::Write;

use super::config::HarnessConfig;
use super::num;
use crate::ansatz::{
    estimate_prop1, estimate_prop2, Convention, Prop1Estimate, Prop2Estimate, Prop2Source, DEFAULT_BAND_WIDTH,
    PROP1_MAX_RATE, PROP1_MIN_K, PROP1_MIN_WAVES,
};
use crate::currents::{bt1_current, bt2_current_2d, bt2_current_3d_form};
use crate::error::{Error, Result};
use crate::fit::{power_law, PowerLawFit};
use crate::geometry::{boundary_point, theta_with_normal, z_function, CurveGeometry, WaveConfig};

/// θ samples for the first-order error-rate estimate.
pub const PROP1_GRID: usize = 256;
/// θ samples for the shadow-band estimate (the band holds a fraction
/// `~ 2/(π k^{1/3})` of them).
pub const PROP2_GRID: usize = 2048;

/// Bound on the fitted band-growth exponent after dividing by k^{2/3}.
pub const PROP2_MAX_ABS_RATE: f64 = 0.15;

/// A per-k quantity with its fitted power law and the expected exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStudy {
    pub name: &'static str,
    pub values: Vec<f64>,
    pub fit: PowerLawFit,
    pub expected_rate: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Strictly increasing wavenumbers.
    pub ks: Vec<f64>,
    /// Absent when the wavenumber list does not meet its preconditions.
    pub prop1: Option<Prop1Estimate>,
    pub prop1_skipped: Option<String>,
    pub prop2_ansatz: Prop2Estimate,
    /// Only for the circle.
    pub prop2_exact: Option<Prop2Estimate>,
    pub studies: Vec<ScalingStudy>,
}

fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * (i as f64 + 0.5) / n as f64).collect()
}

fn shadow_boundary_theta(geom: &CurveGeometry, wave: &WaveConfig) -> f64 {
    theta_with_normal(geom, [-wave.omega[1], wave.omega[0]])
}

fn lit_pole_theta(geom: &CurveGeometry, wave: &WaveConfig) -> f64 {
    theta_with_normal(geom, [-wave.omega[0], -wave.omega[1]])
}

fn study(name: &'static str, ks: &[f64], values: Vec<f64>, expected_rate: f64) -> Result<ScalingStudy> {
    let fit = power_law(ks, &values)?;
    Ok(ScalingStudy { name, values, fit, expected_rate })
}

fn scaling_studies(geom: &CurveGeometry, waves: &[WaveConfig]) -> Result<Vec<ScalingStudy>> {
    let ks: Vec<f64> = waves.iter().map(|w| w.k).collect();
    let mut bt2_gap = Vec::new();
    let mut bt3d_gap = Vec::new();
    let mut slope = Vec::new();
    for w in waves {
        let sb = shadow_boundary_theta(geom, w);
        bt2_gap.push((bt2_current_2d(geom, w, sb) - bt1_current(geom, w, sb)).norm());
        let lit = lit_pole_theta(geom, w);
        let b1 = bt1_current(geom, w, lit);
        bt3d_gap.push((bt2_current_3d_form(geom, w, lit) - b1).norm() / b1.norm());
        // Slope of the first-order envelope in the Fock variable τ = k^{1/3} Z.
        let h = 1e-5;
        let env = |t: f64| bt1_current(geom, w, t) / w.incident_field(boundary_point(geom, t).point);
        let d_env = (env(sb + h) - env(sb - h)).norm() / (2.0 * h);
        let d_tau = w.k.cbrt() * (z_function(geom, w, sb + h) - z_function(geom, w, sb - h)).abs() / (2.0 * h);
        slope.push(d_env / d_tau);
    }
    Ok(vec![
        study("bt2_minus_bt1_at_shadow_boundary", &ks, bt2_gap, 1.0)?,
        study("bt2_3d_form_vs_bt1_relative_gap_at_lit_pole", &ks, bt3d_gap, -1.0)?,
        study("bt1_envelope_fock_slope_at_shadow_boundary", &ks, slope, 2.0 / 3.0)?,
    ])
}

/// Run every k-dependent estimate over `cfg.k_list`.
pub fn run_sweep(cfg: &HarnessConfig) -> Result<SweepResult> {
    let mut ks = cfg.k_list.clone();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    if ks.len() < 2 {
        return Err(Error::config(format!("sweep needs at least 2 distinct wavenumbers, got {}", ks.len())));
    }
    let geom = cfg.geometry()?;
    let waves = ks.iter().map(|&k| cfg.wave_with_k(k)).collect::<Result<Vec<_>>>()?;

    let (prop1, prop1_skipped) = if ks.len() >= PROP1_MIN_WAVES && ks[0] >= PROP1_MIN_K {
        (Some(estimate_prop1(&geom, &waves, &uniform_grid(PROP1_GRID), &cfg.expansion())?), None)
    } else {
        (
            None,
            Some(format!("needs at least {PROP1_MIN_WAVES} wavenumbers, all ≥ {PROP1_MIN_K}")),
        )
    };

    // The band straddles Z = 0, where only the smooth Kirchhoff-normalised
    // coefficient is finite.
    let mut band_cfg = cfg.expansion();
    band_cfg.convention = Convention::Kirchhoff;
    let grid = uniform_grid(PROP2_GRID);
    let prop2_ansatz = estimate_prop2(&geom, &waves, DEFAULT_BAND_WIDTH, &grid, &Prop2Source::Ansatz(band_cfg))?;
    let prop2_exact = if geom.is_circle() {
        Some(estimate_prop2(&geom, &waves, DEFAULT_BAND_WIDTH, &grid, &Prop2Source::Exact)?)
    } else {
        None
    };
    Ok(SweepResult {
        studies: scaling_studies(&geom, &waves)?,
        ks,
        prop1,
        prop1_skipped,
        prop2_ansatz,
        prop2_exact,
    })
}

impl SweepResult {
    /// Named pass/fail outcomes of the run contracts.
    pub fn contracts(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        if let Some(p) = &self.prop1 {
            out.push((format!("prop1_rate_le_{PROP1_MAX_RATE}_with_r2_ge_0.95"), p.satisfies_contract()));
        }
        out.push((
            format!("prop2_ansatz_abs_rate_le_{PROP2_MAX_ABS_RATE}"),
            self.prop2_ansatz.fit.rate.abs() <= PROP2_MAX_ABS_RATE,
        ));
        if let Some(p) = &self.prop2_exact {
            out.push((format!("prop2_exact_abs_rate_le_{PROP2_MAX_ABS_RATE}"), p.fit.rate.abs() <= PROP2_MAX_ABS_RATE));
        }
        out
    }

    pub fn all_pass(&self) -> bool {
        self.contracts().iter().all(|(_, ok)| *ok)
    }

    /// Long-format CSV: `record,quantity,k,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("record,quantity,k,value\n");
        let mut series = |name: &str, values: &[f64], fit: Option<&PowerLawFit>| {
            for (k, v) in self.ks.iter().zip(values) {
                writeln!(out, "sample,{name},{},{}", num(*k), num(*v)).unwrap();
            }
            if let Some(f) = fit {
                writeln!(out, "fit_rate,{name},,{}", num(f.rate)).unwrap();
                writeln!(out, "fit_constant,{name},,{}", num(f.constant)).unwrap();
                writeln!(out, "fit_r_squared,{name},,{}", num(f.r_squared)).unwrap();
            }
        };
        if let Some(p) = &self.prop1 {
            series("prop1_max_relative_gap", &p.max_relative_gap, Some(&p.fit));
            let col = |f: fn(&crate::ansatz::RegionGaps) -> f64| p.region_max_abs_gap.iter().map(f).collect::<Vec<_>>();
            series("prop1_abs_gap_illuminated", &col(|g| g.illuminated), None);
            series("prop1_abs_gap_shadow_boundary", &col(|g| g.shadow_boundary), None);
            series("prop1_abs_gap_deep_shadow", &col(|g| g.deep_shadow), None);
        }
        series("prop2_ansatz_band_sup", &self.prop2_ansatz.band_sup, Some(&self.prop2_ansatz.fit));
        if let Some(p) = &self.prop2_exact {
            series("prop2_exact_band_sup", &p.band_sup, Some(&p.fit));
        }
        for s in &self.studies {
            series(s.name, &s.values, Some(&s.fit));
        }
        for (name, ok) in self.contracts() {
            writeln!(out, "contract,{name},,{}", if ok { 1 } else { 0 }).unwrap();
        }
        out
    }
}
