//! Contour quadrature for `I_m(τ) = ∫ (-is)^m e^{-isτ} / A₊(s) ds`, m = 0, 1, 2.
//!
//! `1/A₊(s)` has poles on the ray `arg s = π/3` (at `|a_n| e^{iπ/3}`, a_n the
//! Airy zeros) and decays super-exponentially for `s → +∞` and along
//! directions just above the negative real axis. The path used here is
//!
//! * a ray arriving at `-S_L` from direction `e^{5πi/6}`,
//! * the real segment `[-S_L, S_R]`,
//! * a ray leaving `S_R` at angle `-π/6` (τ ≥ 0) or `+π/6` (τ < 0),
//!
//! all of which stay at distance ≥ 2 from the poles. For τ ≥ 0 the left
//! endpoint sits beyond the saddle at `s = -τ²`, so the exponential growth of
//! `e^{-isτ}` on the left ray is dominated from the start.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_partitioned, QuadOptions};
use crate::specfun::{airy_scaled, omega};
use crate::I;

/// Path geometry and accuracy controls.
#[derive(Debug, Clone, Copy)]
pub struct ContourParams {
    /// Right end `S_R` of the real segment.
    pub right_end: f64,
    /// Left end is `S_L = (max(τ, 0) + left_margin)²`.
    pub left_margin: f64,
    /// Rays are cut where the tail bound falls below this fraction of the
    /// accumulated integral (or below its rounding floor).
    pub tail_rel_tol: f64,
    /// Longest admissible ray before giving up.
    pub max_ray_length: f64,
    pub quad: QuadOptions,
}

impl Default for ContourParams {
    fn default() -> Self {
        ContourParams {
            right_end: 2.0,
            left_margin: 2.0,
            tail_rel_tol: 1e-15,
            max_ray_length: 400.0,
            quad: QuadOptions {
                abs_tol: 0.0,
                rel_tol: 1e-13,
                max_intervals: 200_000,
            },
        }
    }
}

/// The three moments with per-moment error bounds (quadrature + rounding + tails).
#[derive(Debug, Clone, Copy)]
pub struct Moments {
    pub value: [Complex64; 3],
    pub error: [f64; 3],
}

/// `[g, -is g, -s² g, |g|]` with `g = e^{-isτ}/A₊(s)`, evaluated without overflow.
fn integrand(s: Complex64, tau: f64) -> [Complex64; 4] {
    let scaled = airy_scaled(omega() * s);
    let g = (-I * s * tau - scaled.log_scale).exp() / scaled.pair.value;
    [g, -I * s * g, -s * s * g, Complex64::new(g.norm(), 0.0)]
}

fn magnitude(v: &[Complex64; 4]) -> [f64; 3] {
    [v[0].norm(), v[1].norm(), v[2].norm()]
}

fn breakpoints(a: f64, b: f64) -> Vec<f64> {
    let n = ((b - a).ceil() as usize).max(1);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Ray length `T` such that `∫_T^∞ |integrand|` is below `limit` for each
/// moment, using `∫_T^∞ m ≤ m(T) / (1 - q)`, `q = m(T+1)/m(T)`, valid once the
/// decay is monotone and accelerating (as it is on these rays).
fn ray_length(start: Complex64, dir: Complex64, tau: f64, limit: [f64; 3], max_len: f64) -> Result<(f64, [f64; 3])> {
    let mut t = 2.0;
    while t <= max_len {
        let m0 = magnitude(&integrand(start + dir * t, tau));
        let m1 = magnitude(&integrand(start + dir * (t + 1.0), tau));
        let mut ok = true;
        let mut bound = [0.0; 3];
        for c in 0..3 {
            let q = if m0[c] > 0.0 { m1[c] / m0[c] } else { 0.0 };
            if q >= 0.5 {
                ok = false;
                break;
            }
            bound[c] = m0[c] / (1.0 - q);
            if bound[c] > limit[c] {
                ok = false;
            }
        }
        if ok {
            return Ok((t, bound));
        }
        t += 1.0;
    }
    Err(Error::Convergence(format!(
        "contour tail for τ = {tau} did not decay within length {max_len}"
    )))
}

/// Integrate the three moments along the path for a given τ.
pub fn moments(tau: f64, params: &ContourParams) -> Result<Moments> {
    let s_left = (tau.max(0.0) + params.left_margin).powi(2);
    let s_right = params.right_end;
    let left_dir = Complex64::from_polar(1.0, 5.0 * PI / 6.0);
    let right_dir = Complex64::from_polar(1.0, if tau >= 0.0 { -PI / 6.0 } else { PI / 6.0 });

    let segment = integrate_partitioned(
        |x| integrand(Complex64::new(x, 0.0), tau),
        &breakpoints(-s_left, s_right),
        params.quad,
    )?;

    let mut limit = [0.0; 3];
    for c in 0..3 {
        limit[c] = (params.tail_rel_tol * segment.value[c].norm())
            .max(f64::EPSILON * segment.l1[c])
            .max(f64::MIN_POSITIVE);
    }

    let ray = |start: Complex64, dir: Complex64| -> Result<([Complex64; 3], [f64; 3])> {
        let (len, tail) = ray_length(start, dir, tau, limit, params.max_ray_length)?;
        let r = integrate_partitioned(|t| integrand(start + dir * t, tau), &breakpoints(0.0, len), params.quad)?;
        let mut v = [Complex64::new(0.0, 0.0); 3];
        let mut e = [0.0; 3];
        for c in 0..3 {
            v[c] = r.value[c] * dir;
            e[c] = r.total_error(c) + tail[c];
        }
        Ok((v, e))
    };
    let (left, left_err) = ray(Complex64::new(-s_left, 0.0), left_dir)?;
    let (right, right_err) = ray(Complex64::new(s_right, 0.0), right_dir)?;

    let mut value = [Complex64::new(0.0, 0.0); 3];
    let mut error = [0.0; 3];
    for c in 0..3 {
        // The left ray is traversed inward, hence the minus sign.
        value[c] = segment.value[c] - left[c] + right[c];
        error[c] = segment.total_error(c) + left_err[c] + right_err[c];
    }
    Ok(Moments { value, error })
}
