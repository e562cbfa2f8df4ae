//! Complex Airy function Ai(z) and its derivative.
//!
//! Evaluation branches:
//!
//! * Maclaurin series `Ai = c1 f(z) - c2 g(z)` for `|z| <= SERIES_RADIUS`,
//!   whenever its cancellation (largest term against the sum) is harmless,
//! * otherwise, inside that disc, Taylor integration of `y'' = z y` inward
//!   along the ray from the expansion value at `|z| = SERIES_RADIUS` (this is
//!   the forward-stable direction wherever the series cancels badly, i.e.
//!   where Ai decays outward),
//! * outside the disc, the large-argument expansion `Ai ~ e^{-ζ} / (2√π z^{1/4}) Σ (-1)^k u_k ζ^{-k}`
//!   with `ζ = (2/3) z^{3/2}`, used directly for `|arg z| <= 2π/3` and through
//!   the connection formula `Ai(z) = -ω Ai(ωz) - ω̄ Ai(ω̄z)` (ω = e^{2πi/3})
//!   near the negative real axis.
//!
//! The expansion branch is carried in scaled form `Ai = e^{s} · (mantissa)`
//! so that callers needing `1/Ai` far out in the growth sectors (the Fock
//! integrand) never overflow.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Γ(2/3).
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// -Ai'(0) = 3^{-1/3} / Γ(1/3).
pub const AIP0: f64 = 0.258_819_403_792_806_8;

/// Largest |z| accepted by [`airy_ai`].
pub const VALIDATED_RADIUS: f64 = 200.0;

/// Inside this radius the series (or the inward continuation) is used; at
/// this radius the optimally truncated expansion is accurate to ~1e-14.
pub const SERIES_RADIUS: f64 = 8.5;

/// Accept the series when `eps * (largest term) / |sum|` stays below this.
const SERIES_CANCELLATION_LIMIT: f64 = 1e-13;
const TAYLOR_STEP: f64 = 0.25;

const SERIES_MAX_TERMS: usize = 400;
const ASYMP_MAX_TERMS: usize = 60;

/// e^{2πi/3}
pub(crate) fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Ai and Ai' at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub value: Complex64,
    pub derivative: Complex64,
}

impl AiryPair {
    fn scale(self, factor: Complex64) -> Self {
        AiryPair {
            value: self.value * factor,
            derivative: self.derivative * factor,
        }
    }

    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.derivative.is_finite()
    }
}

/// Airy pair in scaled form: `Ai = exp(log_scale) * pair.value`, likewise for Ai'.
#[derive(Debug, Clone, Copy)]
pub struct ScaledAiry {
    pub pair: AiryPair,
    pub log_scale: Complex64,
}

impl ScaledAiry {
    /// Unscaled pair; may overflow to infinity or underflow to zero.
    pub fn unscaled(&self) -> AiryPair {
        self.pair.scale(self.log_scale.exp())
    }

    /// `1 / Ai(z)`, evaluated without forming Ai itself.
    pub fn reciprocal(&self) -> Complex64 {
        (-self.log_scale).exp() / self.pair.value
    }
}

/// Ai(z) and Ai'(z) for `|z| <= 200`.
///
/// Errors with [`Error::Domain`] outside the validated disc or for non-finite
/// input, and with [`Error::Overflow`] when Ai itself exceeds the f64 range
/// (this happens for `|z|` beyond roughly 105 in the growth sectors).
pub fn airy_ai(z: Complex64) -> Result<AiryPair> {
    if !z.is_finite() {
        return Err(Error::domain(format!("non-finite Airy argument {z}")));
    }
    if z.norm() > VALIDATED_RADIUS {
        return Err(Error::domain(format!(
            "|z| = {} exceeds the validated Airy range {VALIDATED_RADIUS}",
            z.norm()
        )));
    }
    let pair = airy_scaled(z).unscaled();
    if !pair.is_finite() {
        return Err(Error::Overflow(format!("Ai({z}) exceeds the f64 range")));
    }
    Ok(pair)
}

/// Rotated Airy functions A±(s) = Ai(e^{±2πi/3} s) with their s-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    Plus,
    Minus,
}

impl Rotation {
    pub fn factor(self) -> Complex64 {
        match self {
            Rotation::Plus => omega(),
            Rotation::Minus => omega().conj(),
        }
    }
}

/// A±(s) and d/ds A±(s) = e^{±2πi/3} Ai'(e^{±2πi/3} s).
pub fn airy_aplus(s: Complex64, sign: Rotation) -> Result<AiryPair> {
    let rot = sign.factor();
    let p = airy_ai(rot * s)?;
    Ok(AiryPair {
        value: p.value,
        derivative: p.derivative * rot,
    })
}

/// Scaled Ai for any finite z (no range check).
pub fn airy_scaled(z: Complex64) -> ScaledAiry {
    let r = z.norm();
    if r > SERIES_RADIUS {
        return airy_expansion(z);
    }
    let (pair, cancellation) = series_with_cancellation(z);
    if cancellation <= SERIES_CANCELLATION_LIMIT {
        return ScaledAiry {
            pair,
            log_scale: Complex64::new(0.0, 0.0),
        };
    }
    let start = z * (SERIES_RADIUS / r);
    let outer = airy_expansion(start);
    let pair = taylor_continue(start, outer.pair, z);
    ScaledAiry {
        pair,
        log_scale: outer.log_scale,
    }
}

/// Maclaurin series. Exposed for cross-checks between the branches.
pub fn airy_series(z: Complex64) -> AiryPair {
    series_with_cancellation(z).0
}

/// Integrate `y'' = z y` from `from` (with data `y`) to `to` in Taylor steps.
fn taylor_continue(from: Complex64, y: AiryPair, to: Complex64) -> AiryPair {
    let path = to - from;
    let steps = (path.norm() / TAYLOR_STEP).ceil().max(1.0) as usize;
    let h = path / steps as f64;
    let mut z0 = from;
    let mut value = y.value;
    let mut deriv = y.derivative;
    for _ in 0..steps {
        // Coefficients a_n of y(z0 + t) = Σ a_n t^n.
        let mut a_nm1 = Complex64::new(0.0, 0.0);
        let mut a_n = value;
        let mut a_np1 = deriv;
        let mut hp = Complex64::new(1.0, 0.0); // h^n
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for n in 0..80 {
            let nf = n as f64;
            v += a_n * hp;
            d += a_np1 * hp * (nf + 1.0);
            let a_np2 = (z0 * a_n + a_nm1) / ((nf + 2.0) * (nf + 1.0));
            a_nm1 = a_n;
            a_n = a_np1;
            a_np1 = a_np2;
            hp *= h;
            let tail = (a_n * hp).norm() + (a_np1 * hp).norm();
            if n > 4 && tail <= 1e-18 * (v.norm() + d.norm()) {
                break;
            }
        }
        value = v;
        deriv = d;
        z0 += h;
    }
    AiryPair {
        value,
        derivative: deriv,
    }
}

/// Series value plus a relative rounding-error estimate from cancellation.
fn series_with_cancellation(z: Complex64) -> (AiryPair, f64) {
    let z3 = z * z * z;

    // f = Σ 1·4···(3k-2) z^{3k}/(3k)!,   g = Σ 2·5···(3k-1) z^{3k+1}/(3k+1)!
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut tf = Complex64::new(1.0, 0.0);
    let mut tg = z;
    // f' = Σ_{k>=1} 1·4···(3k-2) z^{3k-1}/(3k-1)!,   g' = Σ 2·5···(3k-1) z^{3k}/(3k)!
    let mut fp = z * z * 0.5;
    let mut gp = Complex64::new(1.0, 0.0);
    let mut tfp = fp;
    let mut tgp = gp;
    let mut largest_v = z.norm().max(1.0);
    let mut largest_d = 1.0_f64.max(fp.norm());
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        tf *= z3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        tg *= z3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        tgp *= z3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2 {
            tfp *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp += tfp;
        }
        largest_v = largest_v.max(tf.norm()).max(tg.norm());
        largest_d = largest_d.max(tfp.norm()).max(tgp.norm());
        let small = |t: Complex64, s: Complex64| t.norm() <= 1e-18 * s.norm().max(1e-300);
        if k > 2 && small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    let pair = AiryPair {
        value: f * AI0 - g * AIP0,
        derivative: fp * AI0 - gp * AIP0,
    };
    let eps = f64::EPSILON;
    let cancellation = (eps * largest_v * AI0 / pair.value.norm().max(1e-300))
        .max(eps * largest_d * AI0 / pair.derivative.norm().max(1e-300));
    (pair, cancellation)
}

/// Large-|z| expansion in scaled form, valid on the whole plane away from
/// the origin (connection formula used near the negative real axis).
pub fn airy_expansion(z: Complex64) -> ScaledAiry {
    if z.arg().abs() <= 2.0 * PI / 3.0 {
        return principal_expansion(z);
    }
    let w = omega();
    let wb = w.conj();
    let a = principal_expansion(w * z);
    let b = principal_expansion(wb * z);
    // Ai(z) = -ω Ai(ωz) - ω̄ Ai(ω̄z);  Ai'(z) = -ω² Ai'(ωz) - ω̄² Ai'(ω̄z)
    let m = if a.log_scale.re >= b.log_scale.re {
        a.log_scale
    } else {
        b.log_scale
    };
    let ea = (a.log_scale - m).exp();
    let eb = (b.log_scale - m).exp();
    let value = -(w * a.pair.value * ea) - wb * b.pair.value * eb;
    let derivative = -(w * w * a.pair.derivative * ea) - wb * wb * b.pair.derivative * eb;
    ScaledAiry {
        pair: AiryPair { value, derivative },
        log_scale: m,
    }
}

/// Optimally truncated Poincaré expansion for |arg z| <= 2π/3.
fn principal_expansion(z: Complex64) -> ScaledAiry {
    let sqrt_z = z.sqrt();
    let zeta = z * sqrt_z * (2.0 / 3.0);
    let z14 = sqrt_z.sqrt();
    let inv_zeta = zeta.inv();

    let mut u = 1.0_f64;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum_u = Complex64::new(1.0, 0.0);
    let mut sum_v = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..ASYMP_MAX_TERMS {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        power *= -inv_zeta;
        let tu = power * u;
        let tv = power * v;
        let size = tu.norm().max(tv.norm());
        // Stop at the smallest term of the divergent series.
        if size > last {
            break;
        }
        sum_u += tu;
        sum_v += tv;
        last = size;
        if size < 1e-17 {
            break;
        }
    }
    let norm = 0.5 / PI.sqrt();
    ScaledAiry {
        pair: AiryPair {
            value: sum_u * norm / z14,
            derivative: -(sum_v * norm * z14),
        },
        log_scale: -zeta,
    }
}

/// `a + b` with its exact rounding error.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `x·c_hi + y·d` rounded, with the gap to the exact `x·(c_hi + c_lo) + y·d`
/// where `d ∈ {±1/2}` (so `y·d` is exact).
fn rotated_coordinate(x: f64, c_hi: f64, c_lo: f64, yd: f64) -> (f64, f64) {
    let p = x * c_hi;
    let ep = x.mul_add(c_hi, -p);
    let (s, es) = two_sum(p, yd);
    (s, es + ep + x * c_lo)
}

/// Residual of `Ai(z) + ω Ai(ωz) + ω̄ Ai(ω̄z) = 0` (ω = e^{2πi/3}) at the
/// exactly rotated arguments.
///
/// Rounding `ωz` to doubles moves the argument by ~|z|·ε, which in the growth
/// sectors changes `Ai(ωz)` by `|Ai'| |z| ε` — already ~1e-12 at |z| = 5. The
/// rounding error of each rotated argument is therefore recovered with
/// error-free transforms (√3/2 held as a double-double) and applied as the
/// first-order correction `Ai'(fl(ωz))·δ`; the neglected term is `O(|Ai''| δ²)`.
pub fn airy_connection_residual(z: Complex64) -> Result<Complex64> {
    let s_hi = 3.0_f64.sqrt() / 2.0;
    let s_lo = -s_hi.mul_add(s_hi, -0.75) / (2.0 * s_hi);
    let (x, y) = (z.re, z.im);
    let mut sum = airy_ai(z)?.value;
    for sign in [1.0, -1.0] {
        // ω^{±1} z = (-x/2 ∓ y s) + i(±x s - y/2)
        let (re, d_re) = rotated_coordinate(-y * sign, s_hi, s_lo, -0.5 * x);
        let (im, d_im) = rotated_coordinate(x * sign, s_hi, s_lo, -0.5 * y);
        let at = airy_ai(Complex64::new(re, im))?;
        let value = at.value + at.derivative * Complex64::new(d_re, d_im);
        sum += Complex64::new(-0.5, sign * s_hi) * value + Complex64::new(0.0, sign * s_lo) * value;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn values_at_origin() {
        let p = airy_ai(c(0.0, 0.0)).unwrap();
        assert!((p.value.re - AI0).abs() < 1e-16);
        assert!((p.derivative.re + AIP0).abs() < 1e-16);
    }

    #[test]
    fn real_axis_values_are_real() {
        for &x in &[-30.0, -7.3, -2.0, 0.5, 3.0, 6.4, 8.4, 8.6, 12.0, 40.0] {
            let p = airy_ai(c(x, 0.0)).unwrap();
            let scale = p.value.norm().max(1.0);
            assert!(p.value.im.abs() < 1e-13 * scale, "Ai({x}) = {}", p.value);
            let dscale = p.derivative.norm().max(1.0);
            assert!(p.derivative.im.abs() < 1e-13 * dscale, "Ai'({x}) = {}", p.derivative);
        }
    }

    #[test]
    fn reference_values() {
        // (x, Ai(x), Ai'(x))
        let cases = [
            (1.0, 0.135_292_416_312_881_47, -0.159_147_441_296_793_28),
            (-10.0, 0.040_241_238_486_441_955, 0.996_265_044_132_790_5),
        ];
        for &(x, ai, aip) in &cases {
            let p = airy_ai(c(x, 0.0)).unwrap();
            assert!((p.value.re - ai).abs() < 1e-12, "Ai({x}) = {} vs {ai}", p.value.re);
            assert!((p.derivative.re - aip).abs() < 1e-11, "Ai'({x}) = {}", p.derivative.re);
        }
    }

    #[test]
    fn complex_reference_values() {
        // (z, Ai(z), Ai'(z)) from a 30-digit evaluation.
        let cases = [
            (3.0, 4.0, 0.014554546690944635, -0.047435251515492836, -0.075209961195903029, 0.082364077155537795),
            (-7.0, 0.5, 0.36567347567322254, -0.51350209982953946, -1.5880862045679386, -0.80872345609534881),
            (7.9, -1.0, -6.5060316375251826e-8, 2.0009237099521319e-8, 1.817260757861238e-7, -6.8269622518355642e-8),
            (-20.0, -15.0, -6.8463988405738734e28, -2.2288269291706444e28, 2.1328868257877641e29, -2.8928090366303258e29),
            (40.0, 90.0, -3.0345720479327144e43, -7.7991406825462762e42, 2.103895442673388e44, 2.2894033879381774e44),
        ];
        for &(x, y, vr, vi, dr, di) in &cases {
            let p = airy_ai(c(x, y)).unwrap();
            let (v, d) = (c(vr, vi), c(dr, di));
            assert!((p.value - v).norm() < 1e-11 * v.norm(), "Ai({x}+{y}i) = {}", p.value);
            assert!((p.derivative - d).norm() < 1e-11 * d.norm(), "Ai'({x}+{y}i) = {}", p.derivative);
        }
    }

    #[test]
    fn branches_agree_on_overlap_annulus() {
        // Inner branch (series or inward continuation) against the expansion.
        for &r in &[7.5, 8.0, SERIES_RADIUS] {
            for i in 0..720 {
                let z = Complex64::from_polar(r, i as f64 * PI / 360.0);
                let inner = airy_scaled(z).unscaled();
                let outer = airy_expansion(z).unscaled();
                let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(1e-300);
                assert!(rel(inner.value, outer.value) < 1e-10, "Ai at {z}");
                assert!(rel(inner.derivative, outer.derivative) < 1e-10, "Ai' at {z}");
            }
        }
    }

    #[test]
    fn range_is_enforced() {
        assert!(matches!(airy_ai(c(150.0, 150.0)), Err(Error::Domain(_))));
        assert!(matches!(airy_ai(c(f64::NAN, 0.0)), Err(Error::Domain(_))));
        // Deep in a growth sector Ai itself exceeds the f64 range.
        assert!(matches!(airy_ai(c(-100.0, 100.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn underflow_is_zero_not_nan() {
        let p = airy_ai(c(190.0, 0.0)).unwrap();
        assert_eq!(p.value, c(0.0, 0.0));
    }

    #[test]
    fn aplus_fixes_origin_and_rotates() {
        let p = airy_aplus(c(0.0, 0.0), Rotation::Plus).unwrap();
        assert!((p.value.re - AI0).abs() < 1e-16);
        let s = c(2.0, 0.0);
        let direct = airy_ai(omega() * s).unwrap();
        let rotated = airy_aplus(s, Rotation::Plus).unwrap();
        assert_eq!(direct.value, rotated.value);
        assert_eq!(direct.derivative * omega(), rotated.derivative);
    }

    #[test]
    fn reciprocal_survives_overflow() {
        let s = airy_scaled(c(-300.0, 300.0));
        let r = s.reciprocal();
        assert!(r.is_finite());
        assert!(r.norm() < 1e-300);
    }
}
