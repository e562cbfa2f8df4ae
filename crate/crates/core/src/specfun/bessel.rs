//! Integer-order Bessel J_n, Y_n and Hankel H_n^{(1)} sequences at real argument.
//!
//! J_n comes from Miller's downward recurrence normalised with
//! `J_0 + 2 Σ J_{2k} = 1`; Y_0 and Y_1 follow from the Neumann series in the
//! same J values, and higher Y_n from the (stable) upward recurrence.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_ABOVE: f64 = 1e250;

/// Starting index of the downward recurrence.
///
/// The recurrence must start well beyond the turning point n ≈ x, otherwise
/// the minimal solution is not yet dominant when it reaches the requested
/// orders. The margin `10 x^{1/3}` covers the Airy transition zone.
fn miller_start(x: f64, n_max: usize) -> usize {
    let cbrt = x.cbrt();
    let turning = (x + 10.0 * cbrt).ceil() as usize;
    let n = n_max.max(turning) + 15 + cbrt.ceil() as usize;
    n + (n % 2) // even, so the normalisation sum ends on an even index
}

/// J_0(x) .. J_{n_max}(x) for x > 0.
pub fn bessel_j_sequence(x: f64, n_max: usize) -> Result<Vec<f64>> {
    check_arg(x)?;
    let start = miller_start(x, n_max);
    let mut j = vec![0.0_f64; start + 2];
    j[start] = 1e-300;
    let mut norm = 0.0_f64;
    for n in (1..=start).rev() {
        let prev = (2.0 * n as f64 / x) * j[n] - j[n + 1];
        j[n - 1] = prev;
        if prev.abs() > RESCALE_ABOVE {
            let scale = 1.0 / RESCALE_ABOVE;
            for v in j[n - 1..].iter_mut() {
                *v *= scale;
            }
            norm *= scale;
        }
        if (n - 1) % 2 == 0 && n - 1 > 0 {
            norm += 2.0 * j[n - 1];
        }
    }
    norm += j[0];
    j.truncate(n_max + 1);
    for v in j.iter_mut() {
        *v /= norm;
    }
    Ok(j)
}

/// J_n(x) and Y_n(x) for n = 0..=n_max.
pub fn bessel_jy_sequence(x: f64, n_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_arg(x)?;
    // The Neumann series needs J up to the point where J_n is negligible.
    let series_len = miller_start(x, 1);
    let j_all = bessel_j_sequence(x, series_len.max(n_max + 1))?;

    let log_term = (x / 2.0).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j_all.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j_all[2 * k] / k as f64;
        s1 += sign * (j_all[2 * k - 1] - j_all[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = (2.0 / PI) * (log_term * j_all[0] - 2.0 * s0);
    let y1 = (2.0 / PI) * (log_term * j_all[1] - j_all[0] / x + s1);

    let mut y = Vec::with_capacity(n_max + 1);
    y.push(y0);
    if n_max >= 1 {
        y.push(y1);
    }
    for n in 1..n_max {
        let next = (2.0 * n as f64 / x) * y[n] - y[n - 1];
        if !next.is_finite() {
            return Err(Error::Overflow(format!(
                "Y_{}({x}) exceeds the f64 range",
                n + 1
            )));
        }
        y.push(next);
    }
    let mut j = j_all;
    j.truncate(n_max + 1);
    Ok((j, y))
}

/// H_n^{(1)}(x) = J_n(x) + i Y_n(x) for n = 0..=n_max.
///
/// Errors with [`Error::Domain`] for `x <= 0` (or non-finite x) and with
/// [`Error::Overflow`] if some Y_n is not representable.
pub fn hankel1_sequence(x: f64, n_max: usize) -> Result<Vec<Complex64>> {
    let (j, y) = bessel_jy_sequence(x, n_max)?;
    Ok(j.into_iter()
        .zip(y)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// Derivatives H_n' from a sequence H_0..H_{m}; returns m+1 values using
/// `H_0' = -H_1` and `H_n' = H_{n-1} - (n/x) H_n`. If only H_0 is supplied,
/// H_1 is evaluated here.
pub fn hankel1_derivatives(x: f64, h: &[Complex64]) -> Result<Vec<Complex64>> {
    check_arg(x)?;
    let h1 = match h.get(1) {
        Some(&v) => v,
        None => hankel1_sequence(x, 1)?[1],
    };
    Ok((0..h.len())
        .map(|n| if n == 0 { -h1 } else { h[n - 1] - h[n] * (n as f64 / x) })
        .collect())
}

fn check_arg(x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!("Bessel argument must be positive, got {x}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Ascending series Σ (-1)^m (x/2)^{2m+n} / (m! (m+n)!).
    /// Also returns the largest term, which bounds the cancellation error.
    fn j_series_with_bound(n: usize, x: f64) -> (f64, f64) {
        let half = x / 2.0;
        let mut term = half.powi(n as i32) / (1..=n).map(|v| v as f64).product::<f64>();
        let mut sum = term;
        let mut largest = term.abs();
        for m in 1..200 {
            term *= -half * half / (m as f64 * (m + n) as f64);
            sum += term;
            largest = largest.max(term.abs());
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        (sum, largest)
    }

    fn j_series(n: usize, x: f64) -> f64 {
        j_series_with_bound(n, x).0
    }

    #[test]
    fn j0_at_one() {
        let j = bessel_j_sequence(1.0, 0).unwrap();
        assert!((j[0] - j_series(0, 1.0)).abs() < 1e-15);
        assert!((j[0] - 0.765_197_686_557_966_6).abs() < 1e-15);
    }

    #[test]
    fn matches_series_for_moderate_x() {
        for &x in &[0.3, 2.0, 7.5, 12.0] {
            let j = bessel_j_sequence(x, 25).unwrap();
            for (n, v) in j.iter().enumerate() {
                let (r, largest) = j_series_with_bound(n, x);
                let tol = 1e-13 * r.abs() + 1e-15 * largest;
                assert!((v - r).abs() < tol.max(1e-300), "J_{n}({x}) = {v} vs {r}");
            }
        }
    }

    #[test]
    fn small_order_large_argument() {
        // n_max far below x: the start index must still clear the turning point.
        let j = bessel_j_sequence(150.0, 2).unwrap();
        let full = bessel_j_sequence(150.0, 220).unwrap();
        for n in 0..=2 {
            assert!((j[n] - full[n]).abs() < 1e-15);
        }
        // J_0(150) reference
        assert!((j[0] - (-0.000_774_090_375_394_291_2)).abs() < 1e-14, "{}", j[0]);
    }

    #[test]
    fn y_reference_values() {
        let (_, y) = bessel_jy_sequence(1.0, 1).unwrap();
        assert!((y[0] - 0.088_256_964_215_676_96).abs() < 1e-14);
        assert!((y[1] + 0.781_212_821_300_288_9).abs() < 1e-14);
    }

    #[test]
    fn wronskian_at_7_5() {
        let x = 7.5;
        let h = hankel1_sequence(x, 4).unwrap();
        let d = hankel1_derivatives(x, &h).unwrap();
        let w = h[3].re * d[3].im - d[3].re * h[3].im;
        assert!((w - 2.0 / (PI * x)).abs() < 1e-10);
    }

    #[test]
    fn large_order_growth() {
        let h = hankel1_sequence(150.0, 220).unwrap();
        assert!(h.iter().all(|v| v.is_finite()));
        for n in 161..220 {
            assert!(h[n + 1].norm() > h[n].norm());
        }
    }

    #[test]
    fn rejects_bad_argument() {
        assert!(matches!(hankel1_sequence(0.0, 3), Err(Error::Domain(_))));
        assert!(matches!(hankel1_sequence(-1.0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(hankel1_sequence(0.5, 400), Err(Error::Overflow(_))));
    }
}
