//! Convex boundary curves, incidence geometry and illumination regions.
//!
//! Curves are parametrised counterclockwise by θ ∈ [0, 2π), so the outward
//! normal is the tangent rotated clockwise and `dt/ds = -κ n`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::I;

pub type Vec2 = [f64; 2];

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// A smooth, strictly convex closed curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveGeometry {
    Circle { radius: f64 },
    /// `x(θ) = (a cos θ, b sin θ)`.
    Ellipse { a: f64, b: f64 },
}

impl CurveGeometry {
    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain(format!("circle radius must be positive, got {radius}")));
        }
        Ok(CurveGeometry::Circle { radius })
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::domain(format!("ellipse semi-axes must be positive, got ({a}, {b})")));
        }
        Ok(CurveGeometry::Ellipse { a, b })
    }

    /// Characteristic length (largest semi-axis).
    pub fn scale(&self) -> f64 {
        match *self {
            CurveGeometry::Circle { radius } => radius,
            CurveGeometry::Ellipse { a, b } => a.max(b),
        }
    }

    /// Parametric speed `|dx/dθ|`.
    pub fn speed(&self, theta: f64) -> f64 {
        match *self {
            CurveGeometry::Circle { radius } => radius,
            CurveGeometry::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                (a * a * s * s + b * b * c * c).sqrt()
            }
        }
    }

    /// `d/dθ |dx/dθ|`.
    pub fn speed_derivative(&self, theta: f64) -> f64 {
        match *self {
            CurveGeometry::Circle { .. } => 0.0,
            CurveGeometry::Ellipse { a, b } => {
                let (s, c) = theta.sin_cos();
                (a * a - b * b) * s * c / self.speed(theta)
            }
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, CurveGeometry::Circle { .. })
    }
}

/// Point, unit outward normal, unit counterclockwise tangent and curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: Vec2,
    pub normal: Vec2,
    pub tangent: Vec2,
    pub curvature: f64,
}

pub fn boundary_point(geom: &CurveGeometry, theta: f64) -> BoundaryPoint {
    let (s, c) = theta.sin_cos();
    match *geom {
        CurveGeometry::Circle { radius } => BoundaryPoint {
            point: [radius * c, radius * s],
            normal: [c, s],
            tangent: [-s, c],
            curvature: 1.0 / radius,
        },
        CurveGeometry::Ellipse { a, b } => {
            let speed = geom.speed(theta);
            BoundaryPoint {
                point: [a * c, b * s],
                normal: [b * c / speed, a * s / speed],
                tangent: [-a * s / speed, b * c / speed],
                curvature: a * b / speed.powi(3),
            }
        }
    }
}

/// Wavenumber and unit incidence direction of the plane wave `e^{i k x·ω}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveConfig {
    pub k: f64,
    pub omega: Vec2,
}

impl WaveConfig {
    /// `omega` is normalised; it must be nonzero.
    pub fn new(k: f64, omega: Vec2) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::domain(format!("wavenumber must be positive, got {k}")));
        }
        let len = dot(omega, omega).sqrt();
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::domain("incidence direction must be a nonzero vector"));
        }
        Ok(WaveConfig {
            k,
            omega: [omega[0] / len, omega[1] / len],
        })
    }

    /// Incidence direction given by its polar angle in degrees.
    pub fn from_degrees(k: f64, angle_deg: f64) -> Result<Self> {
        let (s, c) = angle_deg.to_radians().sin_cos();
        Self::new(k, [c, s])
    }

    /// Polar angle of ω in radians.
    pub fn omega_angle(&self) -> f64 {
        self.omega[1].atan2(self.omega[0])
    }

    pub fn incident_field(&self, x: Vec2) -> Complex64 {
        Complex64::from_polar(1.0, self.k * dot(x, self.omega))
    }
}

/// Illumination zone of a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Illuminated,
    ShadowBoundary,
    DeepShadow,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Illuminated => "illuminated",
            Region::ShadowBoundary => "shadow_boundary",
            Region::DeepShadow => "deep_shadow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionLabel {
    pub region: Region,
    pub n_dot_omega: f64,
}

/// Default half-width of the shadow-boundary band in `n·ω`.
pub const DEFAULT_REGION_EPSILON: f64 = 0.05;

/// Label from `n·ω`: illuminated below `-eps`, deep shadow above `+eps`.
pub fn label_from_n_dot_omega(n_dot_omega: f64, eps: f64) -> RegionLabel {
    let region = if n_dot_omega < -eps {
        Region::Illuminated
    } else if n_dot_omega > eps {
        Region::DeepShadow
    } else {
        Region::ShadowBoundary
    };
    RegionLabel { region, n_dot_omega }
}

pub fn classify(geom: &CurveGeometry, wave: &WaveConfig, theta: f64, eps: f64) -> Result<RegionLabel> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain(format!("region epsilon must lie in (0, 0.5), got {eps}")));
    }
    let bp = boundary_point(geom, theta);
    Ok(label_from_n_dot_omega(dot(bp.normal, wave.omega), eps))
}

pub fn n_dot_omega(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> f64 {
    dot(boundary_point(geom, theta).normal, wave.omega)
}

/// `Z(ω, x) = -n(x)·ω`: positive where lit, negative in shadow, with a simple
/// zero on the shadow boundary.
pub fn z_function(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> f64 {
    -n_dot_omega(geom, wave, theta)
}

/// Second arc-length derivative of the incident field along the boundary,
/// `∂²_s e^{ikx·ω} = [-ik κ (n·ω) - k² (t·ω)²] e^{ikx·ω}`.
pub fn tangential_second_derivative(geom: &CurveGeometry, wave: &WaveConfig, theta: f64) -> Complex64 {
    let bp = boundary_point(geom, theta);
    let k = wave.k;
    let nw = dot(bp.normal, wave.omega);
    let tw = dot(bp.tangent, wave.omega);
    let w = wave.incident_field(bp.point);
    (-I * k * bp.curvature * nw - k * k * tw * tw) * w
}

/// Polar angle of the point where the outward normal equals `direction`
/// (the circle and ellipse support-point map).
pub fn theta_with_normal(geom: &CurveGeometry, direction: Vec2) -> f64 {
    let theta = match *geom {
        CurveGeometry::Circle { .. } => direction[1].atan2(direction[0]),
        // n ∝ (b cos θ, a sin θ)  ⇒  tan θ = (b n_y) / (a n_x)
        CurveGeometry::Ellipse { a, b } => (b * direction[1]).atan2(a * direction[0]),
    };
    theta.rem_euclid(2.0 * PI)
}
