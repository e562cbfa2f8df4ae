//! The runtime invariant suite behind the `validate` command.
//!
//! Every check draws its random inputs from a fixed-seed ChaCha stream, so
//! the report is a deterministic function of the configuration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt::Write;
use std::sync::Arc;

use super::config::HarnessConfig;
use super::sweep::run_sweep;
use super::trace::run_trace;
use crate::ansatz::{mt_leading_amplitude, CoefficientFn, Convention, ExpansionConfig, ExpansionTerm};
use crate::currents::{bt2_current_2d, bt2_current_2d_rationalized, kirchhoff_current, ShadowMode};
use crate::error::{Error, Result};
use crate::fock::{psi_asymptotic, psi_quadrature, FockEvaluator};
use crate::geometry::{label_from_n_dot_omega, theta_with_normal, z_function, CurveGeometry, WaveConfig};
use crate::reference::{exact_current, mie_build};
use crate::specfun::{airy_ai, airy_aplus, airy_connection_residual, hankel1_derivatives, hankel1_sequence, Rotation};

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(out, "{passed}/{} checks passed", self.checks.len()).unwrap();
        out
    }
}

fn e(x: f64) -> String {
    format!("{x:.3e}")
}

/// `(passed, detail)` for "max over samples ≤ limit".
fn within(max: f64, limit: f64) -> (bool, String) {
    (max <= limit, format!("max {} (limit {})", e(max), e(limit)))
}

fn rot(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

fn airy_connection() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.random_range(0.0..5.0), rng.random_range(0.0..2.0 * PI));
        worst = worst.max(airy_connection_residual(z)?.norm());
    }
    Ok(within(worst, 1e-12))
}

fn airy_wronskian() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-10.0..10.0), 0.0);
        let ai = airy_ai(z)?;
        let p = airy_aplus(z, Rotation::Plus)?;
        let m = airy_aplus(z, Rotation::Minus)?;
        let bi = rot(PI / 6.0) * p.value + rot(-PI / 6.0) * m.value;
        let bip = rot(PI / 6.0) * p.derivative + rot(-PI / 6.0) * m.derivative;
        worst = worst.max(((ai.value * bip - ai.derivative * bi) * PI - 1.0).norm());
    }
    Ok(within(worst, 1e-10))
}

fn airy_conjugation() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
        let a = airy_ai(z)?.value;
        let b = airy_ai(z.conj())?.value;
        worst = worst.max((b - a.conj()).norm() / a.norm().max(1.0));
    }
    Ok(within(worst, 1e-12))
}

fn bessel_wronskian() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let x: f64 = rng.random_range(1.0..600.0);
        let n = rng.random_range(0..=(x + 50.0) as usize);
        let h = hankel1_sequence(x, n)?;
        let dh = hankel1_derivatives(x, &h)?;
        let target = 2.0 / (PI * x);
        for m in 0..=n {
            worst = worst.max(((h[m].conj() * dh[m]).im - target).abs() / target);
        }
    }
    Ok(within(worst, 1e-9))
}

fn circle_radius(geom: &CurveGeometry) -> Option<f64> {
    match *geom {
        CurveGeometry::Circle { radius } => Some(radius),
        CurveGeometry::Ellipse { .. } => None,
    }
}

fn mie_dirichlet(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let Some(radius) = circle_radius(&cfg.geometry()?) else {
        return Ok((true, "skipped (no exact solution for the ellipse)".into()));
    };
    let wave = cfg.wave()?;
    let sol = mie_build(radius, wave.k)?;
    let mut worst = 0.0_f64;
    for i in 0..360 {
        let theta = 2.0 * PI * i as f64 / 360.0;
        worst = worst.max(sol.total_field(radius, theta, &wave)?.norm());
    }
    Ok(within(worst, 1e-9))
}

fn mie_self_convergence(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let Some(radius) = circle_radius(&cfg.geometry()?) else {
        return Ok((true, "skipped (no exact solution for the ellipse)".into()));
    };
    let wave = cfg.wave()?;
    let sol = mie_build(radius, wave.k)?;
    let more = sol.with_appended_modes(10)?;
    let a = exact_current(&sol, 0.0, &wave);
    let b = exact_current(&more, 0.0, &wave);
    Ok(within((a - b).norm() / a.norm(), 1e-10))
}

fn fock_paths(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let eval = FockEvaluator::with_tau_switch(cfg.tau_switch);
    let mut worst = 0.0_f64;
    for i in 0..25 {
        let tau = 6.0 + 0.25 * i as f64;
        let q = psi_quadrature(tau, &eval.contour)?;
        let a = psi_asymptotic(tau)?;
        for l in 0..3 {
            worst = worst.max((q[l].value - a[l].value).norm() / (q[l].err_estimate + a[l].err_estimate));
        }
    }
    Ok((worst <= 1.0, format!("max |quad - asym| / combined estimate {}", e(worst))))
}

fn fock_decay(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let eval = FockEvaluator::with_tau_switch(cfg.tau_switch);
    let m6 = eval.eval(-6.0, 0)?.value.norm();
    let m3 = eval.eval(-3.0, 0)?.value.norm();
    let m2 = eval.eval(2.0, 0)?.value.norm();
    Ok((m6 < m3 && m6 < 1e-2 * m2, format!("|Ψ(-6)/Ψ(2)| = {}, |Ψ(-6)/Ψ(-3)| = {}", e(m6 / m2), e(m6 / m3))))
}

fn fock_derivatives(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let eval = FockEvaluator::with_tau_switch(cfg.tau_switch);
    let h = 1e-4;
    let mut worst = 0.0_f64;
    for i in 0..=10 {
        let tau = -5.0 + i as f64;
        let v = eval.eval_all(tau)?;
        let lo = eval.eval_all(tau - h)?;
        let hi = eval.eval_all(tau + h)?;
        for l in 1..3 {
            let fd = (hi[l - 1].value - lo[l - 1].value) / (2.0 * h);
            worst = worst.max((v[l].value - fd).norm() / v[l].value.norm());
        }
    }
    Ok(within(worst, 1e-4))
}

fn bt2_forms(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let geom = cfg.geometry()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let wave = WaveConfig::from_degrees(rng.random_range(1.0..1000.0), cfg.omega_deg)?;
        let theta = rng.random_range(0.0..2.0 * PI);
        let a = bt2_current_2d(&geom, &wave, theta);
        let b = bt2_current_2d_rationalized(&geom, &wave, theta);
        worst = worst.max((a - b).norm() / a.norm());
    }
    Ok(within(worst, 1e-12))
}

fn coupling(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let geom = cfg.geometry()?;
    let wave = cfg.wave()?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..20 {
        let a0 = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let delta = Complex64::from_polar(rng.random_range(1e-9..1e-3) * a0.norm(), rng.random_range(0.0..2.0 * PI));
        let a: CoefficientFn = Arc::new(move |_, _, t| a0 * (1.5 + t.sin()));
        let a_b = a.clone();
        let b: CoefficientFn = Arc::new(move |g, w, t| -a_b(g, w, t) / Complex64::new(0.0, w.k));
        let b_bad: CoefficientFn = {
            let b = b.clone();
            Arc::new(move |g, w, t| b(g, w, t) + delta)
        };
        if ExpansionTerm::from_pair(0, 1, a.clone(), b, &geom, &wave).is_ok() {
            accepted += 1;
        }
        if matches!(ExpansionTerm::from_pair(0, 1, a, b_bad, &geom, &wave), Err(Error::Coupling(_))) {
            rejected += 1;
        }
    }
    Ok((accepted == 20 && rejected == 20, format!("coupled pairs accepted {accepted}/20, perturbed rejected {rejected}/20")))
}

fn z_sign_changes(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let geom = cfg.geometry()?;
    let wave = cfg.wave()?;
    let n = 10_000;
    let z: Vec<f64> = (0..n).map(|i| z_function(&geom, &wave, 2.0 * PI * i as f64 / n as f64)).collect();
    let changes = (0..n).filter(|&i| (z[i] > 0.0) != (z[(i + 1) % n] > 0.0)).count();
    Ok((changes == 2, format!("{changes} sign changes")))
}

fn trace_consistency(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let trace = run_trace(cfg)?;
    let bad = trace
        .rows
        .iter()
        .filter(|r| label_from_n_dot_omega(r.n_dot_omega, cfg.region_epsilon).region != r.region)
        .count();
    let increasing = trace.rows.windows(2).all(|w| w[1].theta > w[0].theta);
    Ok((
        bad == 0 && increasing,
        format!("{} rows, {bad} inconsistent labels, theta increasing: {increasing}", trace.rows.len()),
    ))
}

fn kirchhoff_recovery(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let geom = cfg.geometry()?;
    let wave = cfg.wave_with_k(800.0)?;
    let theta = theta_with_normal(&geom, [-wave.omega[0], -wave.omega[1]]);
    let ecfg = ExpansionConfig::new(Convention::Kirchhoff).with_fock(FockEvaluator::with_tau_switch(cfg.tau_switch));
    let ratio = mt_leading_amplitude(&geom, &wave, theta, &ecfg)? / kirchhoff_current(&geom, &wave, theta, ShadowMode::Extended);
    Ok(within((ratio - 1.0).norm(), 0.05))
}

fn sweep_contracts(cfg: &HarnessConfig) -> Result<(bool, String)> {
    let sweep = run_sweep(cfg)?;
    let mut detail = String::new();
    if let Some(p) = &sweep.prop1 {
        write!(detail, "prop1 rate {} (r² {}); ", e(p.fit.rate), e(p.fit.r_squared)).unwrap();
    }
    write!(detail, "prop2 ansatz rate {}", e(sweep.prop2_ansatz.fit.rate)).unwrap();
    if let Some(p) = &sweep.prop2_exact {
        write!(detail, "; prop2 exact rate {}", e(p.fit.rate)).unwrap();
    }
    Ok((sweep.all_pass(), detail))
}

/// Run the whole suite for the configured geometry, wave and sweep.
pub fn validate(cfg: &HarnessConfig) -> ValidationReport {
    type CheckFn = fn(&HarnessConfig) -> Result<(bool, String)>;
    let suite: [(&'static str, CheckFn); 15] = [
        ("airy_connection_identity", |_| airy_connection()),
        ("airy_wronskian", |_| airy_wronskian()),
        ("airy_conjugation_symmetry", |_| airy_conjugation()),
        ("bessel_wronskian", |_| bessel_wronskian()),
        ("mie_dirichlet_residual", mie_dirichlet),
        ("mie_self_convergence", mie_self_convergence),
        ("fock_path_consistency", fock_paths),
        ("fock_decay", fock_decay),
        ("fock_derivative_consistency", fock_derivatives),
        ("bt2_forms_agree", bt2_forms),
        ("coefficient_coupling", coupling),
        ("z_sign_changes", z_sign_changes),
        ("trace_region_consistency", trace_consistency),
        ("kirchhoff_recovery", kirchhoff_recovery),
        ("sweep_contracts", sweep_contracts),
    ];
    let checks = suite
        .iter()
        .map(|(name, f)| match f(cfg) {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(err) => Check { name, passed: false, detail: format!("error: {err}") },
        })
        .collect();
    ValidationReport { checks }
}
