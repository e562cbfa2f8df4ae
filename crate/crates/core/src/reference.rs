//! Exact surface current on a sound-soft circle from the modal (Mie) series.
//!
//! With φ the angle between the boundary point and the incidence direction,
//! the total field outside a circle of radius `a` is
//!
//! ```text
//! w^t(r, φ) = Σ_n ε_n i^n [J_n(kr) - J_n(ka) H_n(kr) / H_n(ka)] cos(nφ),
//! ```
//!
//! (ε_0 = 1, ε_n = 2) and the Wronskian `J_n H_n' - J_n' H_n = 2i/(πka)`
//! collapses its normal derivative on `r = a` to
//!
//! ```text
//! ∂_n w^t = -(2i / (π a)) Σ_n ε_n i^n cos(nφ) / H_n(ka).
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::WaveConfig;
use crate::specfun::{bessel_j_sequence, hankel1_sequence};
use crate::I;

/// Largest `k·radius` accepted by [`mie_build`].
pub const MAX_KA: f64 = 2000.0;

/// Required relative size of the last retained mode.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Precomputed modal data for one (radius, k).
#[derive(Debug, Clone, PartialEq)]
pub struct MieSolution {
    pub radius: f64,
    pub k: f64,
    /// Highest retained mode index; modes `0..=n_terms` are summed.
    pub n_terms: usize,
    /// `1 / H_n^{(1)}(ka)` for `n = 0..=n_terms`.
    pub coefficients: Vec<Complex64>,
    /// `ε_n i^n / H_n(ka)`, the weights of the current's cosine series.
    weights: Vec<Complex64>,
    /// `J_n(ka)`, used for field evaluation off the boundary.
    j_ka: Vec<f64>,
}

/// Default truncation `⌈ka + 10 (ka)^{1/3} + 20⌉`.
pub fn default_n_terms(ka: f64) -> usize {
    (ka + 10.0 * ka.cbrt() + 20.0).ceil() as usize
}

/// Build the modal solution with the default truncation, extended if needed
/// until the last mode is below [`TAIL_TOLERANCE`] of the partial sum.
pub fn mie_build(radius: f64, k: f64) -> Result<MieSolution> {
    let ka = radius * k;
    if !(ka.is_finite() && ka > 0.0) || radius <= 0.0 {
        return Err(Error::domain(format!("radius and k must be positive, got ({radius}, {k})")));
    }
    let mut n_terms = default_n_terms(ka);
    loop {
        let sol = mie_build_with_terms(radius, k, n_terms)?;
        if sol.tail_ratio() < TAIL_TOLERANCE {
            return Ok(sol);
        }
        n_terms += 10;
    }
}

/// Build with an explicit truncation (no tail check).
pub fn mie_build_with_terms(radius: f64, k: f64, n_terms: usize) -> Result<MieSolution> {
    let ka = radius * k;
    if !(radius.is_finite() && radius > 0.0 && k.is_finite() && k > 0.0) {
        return Err(Error::domain(format!("radius and k must be positive, got ({radius}, {k})")));
    }
    if ka > MAX_KA {
        return Err(Error::domain(format!("k·radius = {ka} exceeds the supported {MAX_KA}")));
    }
    let h = hankel1_sequence(ka, n_terms)?;
    let coefficients: Vec<Complex64> = h.iter().map(|v| v.inv()).collect();
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::Overflow(format!("non-finite modal coefficient at ka = {ka}")));
    }
    let weights = coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * I.powu(n as u32) * if n == 0 { 1.0 } else { 2.0 })
        .collect();
    let j_ka = bessel_j_sequence(ka, n_terms)?;
    Ok(MieSolution {
        radius,
        k,
        n_terms,
        coefficients,
        weights,
        j_ka,
    })
}

impl MieSolution {
    /// The same solution with `extra` further modes appended; the retained
    /// coefficients are kept bit-for-bit, so the difference between the two
    /// currents is exactly the contribution of the appended tail.
    pub fn with_appended_modes(&self, extra: usize) -> Result<MieSolution> {
        let longer = mie_build_with_terms(self.radius, self.k, self.n_terms + extra)?;
        let mut out = self.clone();
        out.n_terms = longer.n_terms;
        out.coefficients
            .extend_from_slice(&longer.coefficients[self.n_terms + 1..]);
        out.weights.extend_from_slice(&longer.weights[self.n_terms + 1..]);
        out.j_ka.extend_from_slice(&longer.j_ka[self.n_terms + 1..]);
        Ok(out)
    }

    /// Modulus of the last retained mode relative to the partial sum's
    /// modulus at the illuminated pole (where the current peaks).
    pub fn tail_ratio(&self) -> f64 {
        let last = self.weights.last().map_or(0.0, |w| w.norm());
        let peak = self
            .partial_sum_at(std::f64::consts::PI)
            .norm()
            .max(self.partial_sum_at(0.0).norm());
        last / peak.max(f64::MIN_POSITIVE)
    }

    fn partial_sum_at(&self, phi: f64) -> Complex64 {
        // Horner-like accumulation from the highest mode down keeps the small
        // tail terms from being swamped before they are added.
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, w) in self.weights.iter().enumerate().rev() {
            acc += w * (n as f64 * phi).cos();
        }
        acc
    }

    /// Total-field normal derivative at polar angle θ on the boundary.
    pub fn current(&self, theta: f64, wave_angle: f64) -> Complex64 {
        let phi = theta - wave_angle;
        self.partial_sum_at(phi) * (-2.0 * I / (std::f64::consts::PI * self.radius))
    }

    /// Total field `w^i + w^s` at polar point (r, θ), r ≥ radius.
    pub fn total_field(&self, r: f64, theta: f64, wave: &WaveConfig) -> Result<Complex64> {
        if r < self.radius {
            return Err(Error::domain(format!("r = {r} lies inside the obstacle")));
        }
        let phi = theta - wave.omega_angle();
        let incident = Complex64::from_polar(1.0, self.k * r * phi.cos());
        let h_kr = hankel1_sequence(self.k * r, self.n_terms)?;
        let mut scattered = Complex64::new(0.0, 0.0);
        for n in (0..=self.n_terms).rev() {
            let eps = if n == 0 { 1.0 } else { 2.0 };
            scattered += I.powu(n as u32)
                * (eps * self.j_ka[n] * (n as f64 * phi).cos())
                * h_kr[n]
                * self.coefficients[n];
        }
        Ok(incident - scattered)
    }
}

/// `∂_n w^t` on the circle at θ for incidence `wave` (whose k must match the build).
pub fn exact_current(sol: &MieSolution, theta: f64, wave: &WaveConfig) -> Complex64 {
    debug_assert!((wave.k - sol.k).abs() <= 1e-12 * sol.k);
    sol.current(theta, wave.omega_angle())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn truncation_counts() {
        assert_eq!(default_n_terms(150.0), 224);
        assert_eq!(default_n_terms(1.0), 31);
        assert!(mie_build(1.0, 150.0).unwrap().n_terms >= 224);
        assert!(mie_build(1.0, 1.0).unwrap().n_terms >= 31);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(mie_build(1.0, 2500.0).is_err());
        assert!(mie_build(0.0, 1.0).is_err());
    }

    #[test]
    fn illuminated_pole_is_physical_optics() {
        let k = 150.0;
        let sol = mie_build(1.0, k).unwrap();
        let wave = WaveConfig::new(k, [1.0, 0.0]).unwrap();
        let lit = exact_current(&sol, PI, &wave).norm() / (2.0 * k);
        assert!((0.9..=1.1).contains(&lit), "{lit}");
        assert!(exact_current(&sol, 0.0, &wave).norm() < 1.0);
    }

    #[test]
    fn small_ka_is_finite() {
        let sol = mie_build(0.1, 0.5).unwrap();
        let wave = WaveConfig::new(0.5, [0.0, 1.0]).unwrap();
        assert!(exact_current(&sol, 0.3, &wave).is_finite());
    }
}
