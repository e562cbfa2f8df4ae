//! Shadow-boundary transition ansatz for the surface current.
//!
//! The current is written as a phase `e^{ikx·ω}` times an envelope
//!
//! ```text
//! Σ_{p ≤ P, l ≤ L} k^{2/3-p-2l/3} A_{p,l}(ω, x) Ψ^{(l)}(k^{1/3} Z(ω, x))
//! ```
//!
//! with three choices of the amplitude `A_{p,l}`:
//!
//! * plain form: `A = a_{p,l}`,
//! * first-order absorbing-condition form: `A = (1 - n·ω) a_{p,l} + (c/2) b_{p,l}`,
//! * second-order form: the first-order amplitude plus
//!   `-(1/2) c/(c²+k²) [b#_{p,l} - a#_{p,l}/c]`, where
//!   `a# = (c²/4 + ∂_s²) a` and `b# = -a#/(ik)`.
//!
//! The `b` coefficients are never free: `b_{p,l} = -a_{p,l}/(ik)` always, and
//! [`ExpansionTerm`] only stores `a`.
//!
//! Only the leading term `(p, l) = (0, 0)` is known in closed form; its
//! coefficient `a₀₀` is set by a [`Convention`]. Higher terms can be supplied
//! as user functions.

use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::currents::bt1_current;
use crate::error::{Error, Result};
use crate::fit::{power_law, PowerLawFit};
use crate::fock::{FockEvaluator, TAU_MIN};
use crate::geometry::{boundary_point, classify, z_function, CurveGeometry, Region, WaveConfig, DEFAULT_REGION_EPSILON};
use crate::reference::{exact_current, mie_build};
use crate::I;

/// Below this |Z| the `1/Z` conventions use their constant continuation.
pub const Z_SINGULAR_THRESHOLD: f64 = 1e-12;

/// Points with `Z ≥ DEEP_LIT_Z` form the grid on which the first-order
/// ansatz is compared with its target.
pub const DEEP_LIT_Z: f64 = 0.5;

/// Minimum number of wavenumbers and smallest wavenumber for the
/// first-order error-rate estimate.
pub const PROP1_MIN_WAVES: usize = 4;
pub const PROP1_MIN_K: f64 = 50.0;

/// Contract on the fitted first-order error rate and its fit quality.
pub const PROP1_MAX_RATE: f64 = -0.8;
pub const PROP1_MIN_R_SQUARED: f64 = 0.95;

/// Default half-width of the shadow band in Fock units, `|k^{1/3} Z| ≤ width`.
pub const DEFAULT_BAND_WIDTH: f64 = 1.0;

/// Choice of the leading coefficient `a₀₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `a₀₀ = 1`, i.e. `-(n·ω)/Z`: the lit-side limit is the physical-optics
    /// current `2ik (n·ω) e^{ikx·ω}`. Smooth everywhere.
    Kirchhoff,
    /// `a₀₀ = 1/Z`.
    UnitOverZ,
    /// `a₀₀ = 1/(2Z)`: the lit-side limit of the first-order form is exactly
    /// `(-ik(1-n·ω) + c/2) e^{ikx·ω}`.
    #[default]
    Calibrated,
}

impl Convention {
    pub const ALL: [Convention; 3] = [Convention::Kirchhoff, Convention::UnitOverZ, Convention::Calibrated];

    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Kirchhoff => "kirchhoff",
            Convention::UnitOverZ => "unit_over_z",
            Convention::Calibrated => "calibrated",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Convention::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown coefficient convention '{s}'")))
    }
}

/// A coefficient function `(geometry, wave, θ) ↦ a(ω, x(θ))`.
pub type CoefficientFn = Arc<dyn Fn(&CurveGeometry, &WaveConfig, f64) -> Complex64 + Send + Sync>;

/// A coefficient borrowed from the configuration for one evaluation.
type TermFn<'a> = Box<dyn Fn(&CurveGeometry, &WaveConfig, f64) -> Complex64 + 'a>;

/// One term of the expansion. Only `a` is stored; `b = -a/(ik)` is derived.
#[derive(Clone)]
pub struct ExpansionTerm {
    p: usize,
    l: usize,
    a: CoefficientFn,
}

impl fmt::Debug for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpansionTerm").field("p", &self.p).field("l", &self.l).finish_non_exhaustive()
    }
}

/// θ samples used to check a user-supplied `b` against the coupling rule.
const COUPLING_SAMPLES: usize = 64;

impl ExpansionTerm {
    /// Term with coefficient `a`; `l` must be at most 2 (the highest
    /// available derivative of Ψ).
    pub fn new(p: usize, l: usize, a: CoefficientFn) -> Result<Self> {
        if l > 2 {
            return Err(Error::config(format!("derivative order l = {l} exceeds 2")));
        }
        Ok(ExpansionTerm { p, l, a })
    }

    /// Term from an explicitly given pair `(a, b)`. The pair is accepted only
    /// if `b·ik + a = 0` (to 1e-12 relative) at sample points of the given
    /// boundary and wave; `b` itself is then discarded.
    pub fn from_pair(
        p: usize,
        l: usize,
        a: CoefficientFn,
        b: CoefficientFn,
        geom: &CurveGeometry,
        wave: &WaveConfig,
    ) -> Result<Self> {
        let term = ExpansionTerm::new(p, l, a)?;
        for i in 0..COUPLING_SAMPLES {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / COUPLING_SAMPLES as f64;
            let av = term.a(geom, wave, theta);
            let bv = b(geom, wave, theta);
            let residual = (bv * I * wave.k + av).norm();
            if !(residual <= 1e-12 * av.norm().max(f64::MIN_POSITIVE)) {
                return Err(Error::Coupling(format!(
                    "b·ik + a = {residual:e} at θ = {theta} for term ({p}, {l})"
                )));
            }
        }
        Ok(term)
    }

    pub fn order(&self) -> (usize, usize) {
        (self.p, self.l)
    }

    pub fn a(&self, geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
        (self.a)(geom, wave, theta)
    }

    pub fn b(&self, geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
        coupled_b(self.a(geom, wave, theta), wave.k)
    }
}

fn coupled_b(a: Complex64, k: f64) -> Complex64 {
    -a / (I * k)
}

/// Truncation orders, leading-coefficient convention and Ψ evaluator.
#[derive(Debug, Clone)]
pub struct ExpansionConfig {
    pub p_max: usize,
    pub l_max: usize,
    pub convention: Convention,
    /// Constant factor multiplying `a₀₀`.
    pub calibration: Complex64,
    pub fock: FockEvaluator,
    higher_terms: Vec<ExpansionTerm>,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig::new(Convention::default())
    }
}

impl ExpansionConfig {
    pub fn new(convention: Convention) -> Self {
        ExpansionConfig {
            p_max: 0,
            l_max: 0,
            convention,
            calibration: Complex64::new(1.0, 0.0),
            fock: FockEvaluator::default(),
            higher_terms: Vec::new(),
        }
    }

    pub fn with_calibration(mut self, calibration: Complex64) -> Result<Self> {
        if !(calibration.is_finite() && calibration.norm() > 0.0) {
            return Err(Error::config(format!("calibration must be finite and nonzero, got {calibration}")));
        }
        self.calibration = calibration;
        Ok(self)
    }

    pub fn with_truncation(mut self, p_max: usize, l_max: usize) -> Self {
        self.p_max = p_max;
        self.l_max = l_max;
        self
    }

    pub fn with_fock(mut self, fock: FockEvaluator) -> Self {
        self.fock = fock;
        self
    }

    /// Add a higher-order term. The leading term is fixed by the convention
    /// and cannot be replaced.
    pub fn push_term(&mut self, term: ExpansionTerm) -> Result<()> {
        if term.order() == (0, 0) {
            return Err(Error::config("the (0, 0) term is set by the coefficient convention"));
        }
        if self.higher_terms.iter().any(|t| t.order() == term.order()) {
            return Err(Error::config(format!("duplicate term {:?}", term.order())));
        }
        self.higher_terms.push(term);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.calibration.is_finite() && self.calibration.norm() > 0.0) {
            return Err(Error::config("calibration must be finite and nonzero"));
        }
        if self.l_max > 2 {
            return Err(Error::config(format!("l_max = {} exceeds 2", self.l_max)));
        }
        Ok(())
    }

    /// `a₀₀(ω, x(θ))` under the configured convention.
    pub fn leading_coefficient(&self, geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
        let z = z_function(geom, wave, theta);
        let inv_z = if z.abs() < Z_SINGULAR_THRESHOLD { 1.0 } else { 1.0 / z };
        self.calibration
            * match self.convention {
                Convention::Kirchhoff => 1.0,
                Convention::UnitOverZ => inv_z,
                Convention::Calibrated => 0.5 * inv_z,
            }
    }

    /// Active terms as `(p, l, a(θ'))` closures, leading term first.
    fn active_terms(&self) -> Vec<(usize, usize, TermFn<'_>)> {
        let mut out: Vec<(usize, usize, TermFn<'_>)> =
            vec![(0, 0, Box::new(move |g, w, t| self.leading_coefficient(g, w, t)))];
        for term in &self.higher_terms {
            let (p, l) = term.order();
            if p <= self.p_max && l <= self.l_max {
                out.push((p, l, Box::new(move |g, w, t| term.a(g, w, t))));
            }
        }
        out
    }
}

/// `[Ψ, Ψ', Ψ'']` at the Fock variable of θ, with Ψ taken as zero below the
/// tabulated range (where it is below 1e-17 of its peak).
fn fock_values(cfg: &ExpansionConfig, tau: f64, need_derivatives: bool) -> Result<[Complex64; 3]> {
    let zero = Complex64::new(0.0, 0.0);
    if tau < TAU_MIN {
        return Ok([zero; 3]);
    }
    if need_derivatives {
        let all = cfg.fock.eval_all(tau)?;
        Ok([all[0].value, all[1].value, all[2].value])
    } else {
        Ok([cfg.fock.eval(tau, 0)?.value, zero, zero])
    }
}

/// Second arc-length derivative of a smooth function of θ by fourth-order
/// central differences with arc-length step `2π·scale/4096`.
pub fn arc_second_derivative<F>(geom: &CurveGeometry, theta: f64, f: F) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let sigma = geom.speed(theta);
    let dsigma = geom.speed_derivative(theta);
    let h = 2.0 * std::f64::consts::PI * geom.scale() / 4096.0 / sigma;
    let (fm2, fm1, f0, fp1, fp2) = (f(theta - 2.0 * h), f(theta - h), f(theta), f(theta + h), f(theta + 2.0 * h));
    let d1 = (fm2 - fm1 * 8.0 + fp1 * 8.0 - fp2) / (12.0 * h);
    let d2 = (-fm2 + fm1 * 16.0 - f0 * 30.0 + fp1 * 16.0 - fp2) / (12.0 * h * h);
    d2 / (sigma * sigma) - d1 * (dsigma / sigma.powi(3))
}

enum Form {
    Plain,
    FirstOrder,
    SecondOrder,
}

fn amplitude(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, cfg: &ExpansionConfig, form: Form) -> Result<Complex64> {
    cfg.validate()?;
    let k = wave.k;
    let bp = boundary_point(geom, theta);
    let nw = bp.normal[0] * wave.omega[0] + bp.normal[1] * wave.omega[1];
    let c = bp.curvature;
    let tau = k.cbrt() * -nw;
    let terms = cfg.active_terms();
    let psi = fock_values(cfg, tau, terms.iter().any(|t| t.1 > 0))?;

    let mut sum = Complex64::new(0.0, 0.0);
    for (p, l, a_fn) in &terms {
        let a = a_fn(geom, wave, theta);
        let b = coupled_b(a, k);
        let mut amp = match form {
            Form::Plain => a,
            _ => (1.0 - nw) * a + (c / 2.0) * b,
        };
        if let Form::SecondOrder = form {
            let a_sharp = (c * c / 4.0) * a + arc_second_derivative(geom, theta, |t| a_fn(geom, wave, t));
            let b_sharp = coupled_b(a_sharp, k);
            amp += -0.5 * (c / (c * c + k * k)) * (b_sharp - a_sharp / c);
        }
        let power = 2.0 / 3.0 - *p as f64 - 2.0 * *l as f64 / 3.0;
        sum += k.powf(power) * amp * psi[*l];
    }
    Ok(sum * wave.incident_field(bp.point))
}

/// Plain-form current `Σ k^{2/3-p-2l/3} a_{p,l} Ψ^{(l)}(k^{1/3}Z) e^{ikx·ω}`
/// truncated at the configured orders (the leading term by default).
pub fn mt_leading_amplitude(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, cfg: &ExpansionConfig) -> Result<Complex64> {
    amplitude(geom, wave, theta, cfg, Form::Plain)
}

/// First-order form, `A = (1-n·ω) a + (c/2) b` with `b = -a/(ik)`.
pub fn bt1_leading_amplitude(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, cfg: &ExpansionConfig) -> Result<Complex64> {
    amplitude(geom, wave, theta, cfg, Form::FirstOrder)
}

/// Second-order form: the first-order amplitude plus the `a#`, `b#` correction.
pub fn bt2_leading_amplitude(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, cfg: &ExpansionConfig) -> Result<Complex64> {
    amplitude(geom, wave, theta, cfg, Form::SecondOrder)
}

/// Largest gap in each region.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegionGaps {
    pub illuminated: f64,
    pub shadow_boundary: f64,
    pub deep_shadow: f64,
}

impl RegionGaps {
    fn record(&mut self, region: Region, gap: f64) {
        let slot = match region {
            Region::Illuminated => &mut self.illuminated,
            Region::ShadowBoundary => &mut self.shadow_boundary,
            Region::DeepShadow => &mut self.deep_shadow,
        };
        *slot = slot.max(gap);
    }
}

/// Measured decay of the first-order ansatz towards its target.
#[derive(Debug, Clone)]
pub struct Prop1Estimate {
    pub ks: Vec<f64>,
    /// Per k: max over the deep-lit grid points (`Z ≥ DEEP_LIT_Z`) of
    /// `|η - target| / |target|`.
    pub max_relative_gap: Vec<f64>,
    /// Power law fitted to `max_relative_gap`; `rate` and `constant` are the
    /// measured exponent and constant.
    pub fit: PowerLawFit,
    /// Per k: max absolute gap in each labelled region (informational).
    pub region_max_abs_gap: Vec<RegionGaps>,
    /// Power law fitted to the deep-lit max absolute gap, when it is fittable.
    pub absolute_fit: Option<PowerLawFit>,
    /// Number of grid points on which the relative gap was measured.
    pub deep_lit_points: usize,
}

impl Prop1Estimate {
    pub fn satisfies_contract(&self) -> bool {
        self.fit.rate <= PROP1_MAX_RATE && self.fit.r_squared >= PROP1_MIN_R_SQUARED
    }
}

fn sorted_waves(waves: &[WaveConfig]) -> Result<Vec<WaveConfig>> {
    let mut waves = waves.to_vec();
    waves.sort_by(|a, b| a.k.total_cmp(&b.k));
    if waves.windows(2).any(|w| w[0].k == w[1].k) {
        return Err(Error::config("wavenumbers must be distinct"));
    }
    Ok(waves)
}

/// Fit the decay in k of the gap between the first-order ansatz and the
/// first-order absorbing-condition current `(-ik(1-n·ω) + c/2) e^{ikx·ω}`.
///
/// The gap is measured relative to the target on grid points with
/// `Z ≥ DEEP_LIT_Z`: the next term of Ψ's lit-side series leaves an O(1)
/// absolute remainder against an O(k) current. Per-region absolute maxima
/// are reported alongside.
pub fn estimate_prop1(
    geom: &CurveGeometry,
    waves: &[WaveConfig],
    theta_grid: &[f64],
    cfg: &ExpansionConfig,
) -> Result<Prop1Estimate> {
    if waves.len() < PROP1_MIN_WAVES {
        return Err(Error::config(format!(
            "need at least {PROP1_MIN_WAVES} wavenumbers, got {}",
            waves.len()
        )));
    }
    if let Some(w) = waves.iter().find(|w| w.k < PROP1_MIN_K) {
        return Err(Error::config(format!("wavenumber {} is below {PROP1_MIN_K}", w.k)));
    }
    let waves = sorted_waves(waves)?;
    let mut max_rel = Vec::new();
    let mut max_abs_lit = Vec::new();
    let mut regions = Vec::new();
    let mut deep_lit_points = 0;
    for wave in &waves {
        // (region, Z, |η - target|, |target|) per grid point.
        let rows: Vec<(Region, f64, f64, f64)> = theta_grid
            .par_iter()
            .map(|&theta| {
                let label = classify(geom, wave, theta, DEFAULT_REGION_EPSILON)?;
                let eta = bt1_leading_amplitude(geom, wave, theta, cfg)?;
                let target = bt1_current(geom, wave, theta);
                Ok((label.region, -label.n_dot_omega, (eta - target).norm(), target.norm()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut gaps = RegionGaps::default();
        let (mut rel_max, mut abs_max, mut count) = (0.0_f64, 0.0_f64, 0);
        for &(region, z, abs_gap, target) in &rows {
            gaps.record(region, abs_gap);
            if z >= DEEP_LIT_Z {
                rel_max = rel_max.max(abs_gap / target);
                abs_max = abs_max.max(abs_gap);
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::EmptyBand(format!("no grid point has Z ≥ {DEEP_LIT_Z}")));
        }
        deep_lit_points = count;
        max_rel.push(rel_max);
        max_abs_lit.push(abs_max);
        regions.push(gaps);
    }
    let ks: Vec<f64> = waves.iter().map(|w| w.k).collect();
    let fit = power_law(&ks, &max_rel)?;
    Ok(Prop1Estimate {
        absolute_fit: power_law(&ks, &max_abs_lit).ok(),
        ks,
        max_relative_gap: max_rel,
        fit,
        region_max_abs_gap: regions,
        deep_lit_points,
    })
}

/// What the shadow-band bound is measured on.
#[derive(Debug, Clone)]
pub enum Prop2Source {
    /// The first-order ansatz amplitude under the given configuration.
    Ansatz(ExpansionConfig),
    /// The exact modal current (circle only).
    Exact,
}

/// Measured growth of the shadow-band amplitude.
#[derive(Debug, Clone)]
pub struct Prop2Estimate {
    pub ks: Vec<f64>,
    /// Per k: sup over the band of `|current| / k^{2/3}`.
    pub band_sup: Vec<f64>,
    /// Per k: number of grid points inside the band.
    pub band_points: Vec<usize>,
    pub fit: PowerLawFit,
}

/// Fit the k-dependence of `sup |current| / k^{2/3}` over the band
/// `|k^{1/3} Z| ≤ band_width` of the given θ grid.
pub fn estimate_prop2(
    geom: &CurveGeometry,
    waves: &[WaveConfig],
    band_width: f64,
    theta_grid: &[f64],
    source: &Prop2Source,
) -> Result<Prop2Estimate> {
    if waves.len() < 2 {
        return Err(Error::config(format!("need at least 2 wavenumbers, got {}", waves.len())));
    }
    if matches!(source, Prop2Source::Exact) {
        if let CurveGeometry::Ellipse { .. } = geom {
            return Err(Error::config("the exact current is only available for the circle"));
        }
    }
    let waves = sorted_waves(waves)?;
    let mut band_sup = Vec::new();
    let mut band_points = Vec::new();
    for wave in &waves {
        let k = wave.k;
        let band: Vec<f64> = theta_grid
            .iter()
            .copied()
            .filter(|&t| (k.cbrt() * z_function(geom, wave, t)).abs() <= band_width)
            .collect();
        if band.is_empty() {
            return Err(Error::EmptyBand(format!(
                "no grid point satisfies |k^(1/3) Z| ≤ {band_width} at k = {k}"
            )));
        }
        let values: Vec<f64> = match source {
            Prop2Source::Ansatz(cfg) => band
                .par_iter()
                .map(|&t| bt1_leading_amplitude(geom, wave, t, cfg).map(|v| v.norm()))
                .collect::<Result<Vec<_>>>()?,
            Prop2Source::Exact => {
                let radius = match *geom {
                    CurveGeometry::Circle { radius } => radius,
                    CurveGeometry::Ellipse { .. } => unreachable!("checked above"),
                };
                let sol = mie_build(radius, k)?;
                band.par_iter().map(|&t| exact_current(&sol, t, wave).norm()).collect()
            }
        };
        band_sup.push(values.iter().fold(0.0_f64, |m, &v| m.max(v)) / k.powf(2.0 / 3.0));
        band_points.push(band.len());
    }
    let ks: Vec<f64> = waves.iter().map(|w| w.k).collect();
    let fit = power_law(&ks, &band_sup)?;
    Ok(Prop2Estimate { ks, band_sup, band_points, fit })
}
