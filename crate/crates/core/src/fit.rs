//! Power-law fits `y ≈ C x^rate` by least squares in log–log coordinates.

use crate::error::{Error, Result};

/// Result of a power-law fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub rate: f64,
    pub constant: f64,
    /// Coefficient of determination of the log–log regression.
    pub r_squared: f64,
}

/// Fit `ys ≈ constant · xs^rate`.
///
/// Needs at least two points with distinct positive `x`; every `y` must be
/// positive and finite (a zero or underflowed `y` is a [`Error::Fit`]).
pub fn power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::Fit("abscissae and ordinates differ in length".into()));
    }
    if xs.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {}", xs.len())));
    }
    if let Some(x) = xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Fit(format!("abscissa {x} is not positive")));
    }
    if let Some(y) = ys.iter().find(|y| !(y.is_finite() && **y > f64::MIN_POSITIVE)) {
        return Err(Error::Fit(format!("ordinate {y} underflows or is not finite")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("abscissae are not distinct".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - rate * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(PowerLawFit {
        rate,
        constant: intercept.exp(),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let xs = [100.0, 200.0, 400.0, 800.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.25)).collect();
        let f = power_law(&xs, &ys).unwrap();
        assert!((f.rate + 1.25).abs() < 1e-12);
        assert!((f.constant - 3.0).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(power_law(&[100.0], &[1.0]), Err(Error::Fit(_))));
        assert!(matches!(power_law(&[1.0, 2.0], &[0.0, 0.0]), Err(Error::Fit(_))));
        assert!(matches!(power_law(&[2.0, 2.0], &[1.0, 3.0]), Err(Error::Fit(_))));
    }
}
