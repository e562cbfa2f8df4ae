//! Closed-form approximate surface currents.
//!
//! Every current here is the total-field normal derivative
//! `∂_n w^t = ∂_n w^i + ∂_n w^s` with `∂_n w^i = ik (n·ω) w^i` and the
//! scattered part supplied by a local closure:
//!
//! * physical optics: `2ik (n·ω) w^i` on the lit side,
//! * first-order Bayliss–Turkel: `∂_n w^s = (-ik + c/2) w^i`,
//! * second-order Bayliss–Turkel, which adds
//!   `-(c²/(8(c-ik))) w^i - (1/(2(c-ik))) ∂_s² w^i`,
//! * the three-dimensional form of the second-order condition transplanted
//!   to curves: `∂_n w^s = -(ik - c) w^i - c²(c+ik)/(2(c²+k²)) ∂_s² w^i`.
//!
//! `c` is the boundary curvature and `∂_s` the arc-length derivative.

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::geometry::{boundary_point, tangential_second_derivative, CurveGeometry, WaveConfig};
use crate::I;

/// Which current a trace column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurrentKind {
    Kirchhoff,
    Bt1,
    Bt2_2d,
    Bt2_3dForm,
    Exact,
    AnsatzMt,
    AnsatzBt1,
    AnsatzBt2,
}

impl CurrentKind {
    pub const ALL: [CurrentKind; 8] = [
        CurrentKind::Exact,
        CurrentKind::Kirchhoff,
        CurrentKind::Bt1,
        CurrentKind::Bt2_2d,
        CurrentKind::Bt2_3dForm,
        CurrentKind::AnsatzMt,
        CurrentKind::AnsatzBt1,
        CurrentKind::AnsatzBt2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CurrentKind::Kirchhoff => "kirchhoff",
            CurrentKind::Bt1 => "bt1",
            CurrentKind::Bt2_2d => "bt2_2d",
            CurrentKind::Bt2_3dForm => "bt2_3d_form",
            CurrentKind::Exact => "exact",
            CurrentKind::AnsatzMt => "ansatz_mt",
            CurrentKind::AnsatzBt1 => "ansatz_bt1",
            CurrentKind::AnsatzBt2 => "ansatz_bt2",
        }
    }
}

impl fmt::Display for CurrentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurrentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        CurrentKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown current kind '{s}'")))
    }
}

/// What the physical-optics current does where `n·ω ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShadowMode {
    /// Zero in the shadow (the classical convention).
    #[default]
    Zero,
    /// The lit-side formula continued everywhere.
    Extended,
}

struct Local {
    n_dot_omega: f64,
    curvature: f64,
    incident: Complex64,
}

fn local(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Local {
    let bp = boundary_point(geom, theta);
    Local {
        n_dot_omega: bp.normal[0] * wave.omega[0] + bp.normal[1] * wave.omega[1],
        curvature: bp.curvature,
        incident: wave.incident_field(bp.point),
    }
}

pub fn kirchhoff_current(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, mode: ShadowMode) -> Complex64 {
    let p = local(geom, wave, theta);
    if p.n_dot_omega >= 0.0 && mode == ShadowMode::Zero {
        return Complex64::new(0.0, 0.0);
    }
    2.0 * I * wave.k * p.n_dot_omega * p.incident
}

pub fn bt1_current(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
    let p = local(geom, wave, theta);
    bt1_from(wave.k, &p)
}

fn bt1_from(k: f64, p: &Local) -> Complex64 {
    (-I * k * (1.0 - p.n_dot_omega) + p.curvature / 2.0) * p.incident
}

/// Second-order current in the form with `1/(c - ik)` factors.
pub fn bt2_current_2d(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
    let p = local(geom, wave, theta);
    let d2 = tangential_second_derivative(geom, wave, theta);
    let c = p.curvature;
    let denom = Complex64::new(c, -wave.k);
    // |c - ik| ≥ c > 0 for any k, so the closure is never singular.
    debug_assert!(denom.norm() >= c && c > 0.0);
    bt1_from(wave.k, &p) - p.incident * (c * c) / (denom * 8.0) - d2 / (denom * 2.0)
}

/// Second-order current in the rationalised form `(c+ik)/(2(c²+k²)) (c²/4 + ∂_s²)`.
pub fn bt2_current_2d_rationalized(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
    let p = local(geom, wave, theta);
    let d2 = tangential_second_derivative(geom, wave, theta);
    let c = p.curvature;
    let k = wave.k;
    let factor = Complex64::new(c, k) / (2.0 * (c * c + k * k));
    bt1_from(k, &p) - factor * (p.incident * (c * c / 4.0) + d2)
}

/// Current from the three-dimensional form of the second-order condition.
pub fn bt2_current_3d_form(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
    let p = local(geom, wave, theta);
    let d2 = tangential_second_derivative(geom, wave, theta);
    let c = p.curvature;
    let k = wave.k;
    let incident_normal = I * k * p.n_dot_omega * p.incident;
    let scattered = -(I * k - c) * p.incident - d2 * (Complex64::new(c, k) * (c * c) / (2.0 * (c * c + k * k)));
    incident_normal + scattered
}
