//! The Fock-type transition function
//!
//! ```text
//! Ψ(τ) = γ e^{-iτ³/3} ∫ e^{-isτ} / A₊(s) ds,      A₊(s) = Ai(e^{2πi/3} s),
//! ```
//!
//! and its first two derivatives, on τ ∈ [-20, 50].
//!
//! Two evaluation paths:
//!
//! * **quadrature** along a deformed contour (see [`contour`]); derivatives
//!   are taken under the integral sign, so each order costs nothing extra;
//! * **asymptotic**: `Ψ(τ) ≈ c₀τ + c₁τ⁻² + c₂τ⁻⁵ + c₃τ⁻⁸ + c₄τ⁻¹¹` for
//!   τ ≥ `tau_switch`.
//!
//! The global factor γ fixes the leading coefficient to `c₀ = -2i`. A
//! stationary-phase evaluation of the integral at the saddle `s = -τ²` gives
//! the raw leading behaviour `4π e^{-iπ/3} τ`, hence `γ = e^{-iπ/6}/(2π)`;
//! [`calibrate_gamma`] recovers the same value from the quadrature alone.
//! The coefficients c₁…c₄ are not known in closed form; they are least-squares
//! fits to the quadrature path (see [`ASYMPTOTIC_COEFFS`]).

pub mod contour;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::I;
pub use contour::{moments, ContourParams, Moments};

/// Supported τ range.
pub const TAU_MIN: f64 = -20.0;
pub const TAU_MAX: f64 = 50.0;

/// Default crossover from quadrature to the asymptotic series.
pub const DEFAULT_TAU_SWITCH: f64 = 8.0;

/// Calibration factor `γ = e^{-iπ/6} / (2π)`.
pub fn gamma() -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI), -PI / 6.0)
}

/// `[c₀, c₁, c₂, c₃, c₄]` of `Ψ(τ) ~ Σ c_j τ^{1-3j}`.
///
/// c₀ = -2i is exact. c₁…c₄ come from least-squares fits of the quadrature
/// path (absolute accuracy ~1e-12) on τ ∈ [5, 12]: a free fit of c₀…c₅ gives
/// c₁ = 0.49999999 and c₂ = -0.99998i, which are rounded to 1/2 and -i; with
/// those held fixed, fitting the remainder gives c₃ = -5.47 ± 0.005 and
/// c₄ = 48.5i ± 3 (the spread across fit orders). Beyond τ ≈ 12 the
/// remainder drops below the quadrature accuracy and carries no information.
/// The tests re-run these fits.
pub const ASYMPTOTIC_COEFFS: [Complex64; 5] = [
    Complex64::new(0.0, -2.0),
    Complex64::new(0.5, 0.0),
    Complex64::new(0.0, -1.0),
    Complex64::new(-5.47, 0.0),
    Complex64::new(0.0, 48.5),
];

/// How a [`FockEval`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Quadrature,
    Asymptotic,
}

impl EvalPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalPath::Quadrature => "quadrature",
            EvalPath::Asymptotic => "asymptotic",
        }
    }
}

/// `Ψ^{(l)}(τ)` with its provenance and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockEval {
    pub tau: f64,
    pub l: usize,
    pub value: Complex64,
    pub path: EvalPath,
    pub err_estimate: f64,
}

fn check_tau(tau: f64) -> Result<()> {
    if !(TAU_MIN..=TAU_MAX).contains(&tau) {
        return Err(Error::domain(format!("τ = {tau} outside [{TAU_MIN}, {TAU_MAX}]")));
    }
    Ok(())
}

fn check_order(l: usize) -> Result<()> {
    if l > 2 {
        return Err(Error::domain(format!("derivative order {l} not supported (max 2)")));
    }
    Ok(())
}

/// Uncalibrated `e^{-iτ³/3} I_0` and its derivatives, from the contour moments.
fn assemble(tau: f64, m: &Moments, scale: Complex64) -> [FockEval; 3] {
    let phase = Complex64::from_polar(1.0, -tau.powi(3) / 3.0) * scale;
    let [i0, i1, i2] = m.value;
    let [e0, e1, e2] = m.error;
    let t2 = tau * tau;
    let values = [
        i0,
        -I * t2 * i0 + i1,
        Complex64::new(-t2 * t2, -2.0 * tau) * i0 - 2.0 * I * t2 * i1 + i2,
    ];
    let errors = [
        e0,
        t2 * e0 + e1,
        (t2 * t2 + 2.0 * tau.abs()) * e0 + 2.0 * t2 * e1 + e2,
    ];
    let mut out = [FockEval {
        tau,
        l: 0,
        value: Complex64::new(0.0, 0.0),
        path: EvalPath::Quadrature,
        err_estimate: 0.0,
    }; 3];
    for l in 0..3 {
        out[l].l = l;
        out[l].value = phase * values[l];
        out[l].err_estimate = scale.norm() * errors[l];
    }
    out
}

/// Quadrature path for all three orders at once.
pub fn psi_quadrature(tau: f64, params: &ContourParams) -> Result<[FockEval; 3]> {
    check_tau(tau)?;
    let m = moments(tau, params)?;
    Ok(assemble(tau, &m, gamma()))
}

/// Asymptotic path for all three orders. Intended for τ ≥ 5; the error
/// estimate is the modulus of the last retained term.
pub fn psi_asymptotic(tau: f64) -> Result<[FockEval; 3]> {
    check_tau(tau)?;
    if tau <= 0.0 {
        return Err(Error::domain(format!("asymptotic series needs τ > 0, got {tau}")));
    }
    let c = ASYMPTOTIC_COEFFS;
    let mut v = [Complex64::new(0.0, 0.0); 3];
    let mut last = [0.0_f64; 3];
    for (j, cj) in c.iter().enumerate() {
        let p = 1.0 - 3.0 * j as f64;
        let terms = [
            cj * tau.powf(p),
            cj * p * tau.powf(p - 1.0),
            cj * p * (p - 1.0) * tau.powf(p - 2.0),
        ];
        for l in 0..3 {
            v[l] += terms[l];
            if cj.norm() > 0.0 && j > 0 {
                last[l] = terms[l].norm();
            }
        }
    }
    let mut out = [FockEval {
        tau,
        l: 0,
        value: Complex64::new(0.0, 0.0),
        path: EvalPath::Asymptotic,
        err_estimate: 0.0,
    }; 3];
    for l in 0..3 {
        out[l].l = l;
        out[l].value = v[l];
        out[l].err_estimate = last[l];
    }
    Ok(out)
}

/// Evaluator choosing the path by τ.
#[derive(Debug, Clone, Copy)]
pub struct FockEvaluator {
    pub tau_switch: f64,
    pub contour: ContourParams,
}

impl Default for FockEvaluator {
    fn default() -> Self {
        FockEvaluator {
            tau_switch: DEFAULT_TAU_SWITCH,
            contour: ContourParams::default(),
        }
    }
}

impl FockEvaluator {
    pub fn with_tau_switch(tau_switch: f64) -> Self {
        FockEvaluator {
            tau_switch,
            ..Self::default()
        }
    }

    /// `Ψ, Ψ', Ψ''` at τ.
    pub fn eval_all(&self, tau: f64) -> Result<[FockEval; 3]> {
        check_tau(tau)?;
        if tau >= self.tau_switch && tau > 0.0 {
            psi_asymptotic(tau)
        } else {
            psi_quadrature(tau, &self.contour)
        }
    }

    pub fn eval(&self, tau: f64, l: usize) -> Result<FockEval> {
        check_order(l)?;
        Ok(self.eval_all(tau)?[l])
    }
}

/// `Ψ^{(l)}(τ)` with the default evaluator.
pub fn psi(tau: f64, l: usize) -> Result<FockEval> {
    FockEvaluator::default().eval(tau, l)
}

/// Recover γ from the uncalibrated quadrature: fit `e^{-iτ³/3} I_0(τ)` on the
/// given points by `C₀τ + C₁τ⁻² + C₂τ⁻⁵ + C₃τ⁻⁸` and return `-2i / C₀`.
pub fn calibrate_gamma(taus: &[f64], params: &ContourParams) -> Result<Complex64> {
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        check_tau(tau)?;
        let m = moments(tau, params)?;
        rows.push((tau, assemble(tau, &m, Complex64::new(1.0, 0.0))[0].value));
    }
    let coeffs = fit_series(&rows, 4)?;
    Ok(Complex64::new(0.0, -2.0) / coeffs[0])
}

/// Complex least squares for `y ≈ Σ_{j<n} a_j τ^{1-3j}` via normal equations
/// on a column-scaled design (n ≤ 6).
pub fn fit_series(rows: &[(f64, Complex64)], n: usize) -> Result<Vec<Complex64>> {
    if rows.len() < n || n == 0 {
        return Err(Error::Fit(format!("need at least {n} points, got {}", rows.len())));
    }
    let basis = |tau: f64, j: usize| tau.powf(1.0 - 3.0 * j as f64);
    // Column scaling keeps the normal equations well conditioned.
    let scale: Vec<f64> = (0..n)
        .map(|j| rows.iter().map(|r| basis(r.0, j).powi(2)).sum::<f64>().sqrt())
        .collect();
    let mut a = vec![vec![0.0_f64; n]; n];
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    for &(tau, y) in rows {
        let phi: Vec<f64> = (0..n).map(|j| basis(tau, j) / scale[j]).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] += phi[i] * phi[j];
            }
            b[i] += y * phi[i];
        }
    }
    // Gaussian elimination with partial pivoting (real matrix, complex rhs).
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        if a[piv][col].abs() < 1e-14 {
            return Err(Error::Fit("singular normal equations".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            let bc = b[col];
            b[row] -= bc * f;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= x[k] * a[row][k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x.iter().zip(&scale).map(|(v, s)| v / *s).collect())
}
