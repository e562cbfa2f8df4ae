//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for vector-valued
//! complex integrands on a finite real interval.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Accuracy targets and resource budget.
///
/// Each component `c` is accepted once its error estimate is below
/// `max(abs_tol, rel_tol·|I_c|, ROUNDING_FACTOR·ε·∫|f_c|)`; the last term is
/// the rounding floor, below which no refinement can help.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

/// Multiple of `ε ∫|f|` treated as the attainable accuracy of a result.
pub const ROUNDING_FACTOR: f64 = 100.0;
/// Rounding floor of a single panel's error estimate (below the global one,
/// so that a converged sum of panels can meet the global floor).
const PANEL_ROUNDING: f64 = 50.0;

/// Per-component integrals, error estimates and `∫|f_c|`.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<const N: usize> {
    pub value: [Complex64; N],
    pub error: [f64; N],
    pub l1: [f64; N],
    pub evaluations: usize,
}

impl<const N: usize> QuadResult<N> {
    /// Error estimate including the rounding floor.
    pub fn total_error(&self, c: usize) -> f64 {
        self.error[c].max(ROUNDING_FACTOR * f64::EPSILON * self.l1[c])
    }
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: [f64; N],
    l1: [f64; N],
    priority: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

fn kronrod<const N: usize, F>(f: &F, a: f64, b: f64, weights: &[f64; N]) -> Panel<N>
where
    F: Fn(f64) -> [Complex64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut k = zero;
    let mut g = zero;
    let mut l1 = [0.0; N];
    let mut samples = [[Complex64::new(0.0, 0.0); N]; 15];
    samples[14] = f(center);
    for c in 0..N {
        k[c] = samples[14][c] * WGK[7];
        g[c] = samples[14][c] * WG[3];
        l1[c] = samples[14][c].norm() * WGK[7];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        samples[2 * j] = f(center - dx);
        samples[2 * j + 1] = f(center + dx);
        for c in 0..N {
            let (f1, f2) = (samples[2 * j][c], samples[2 * j + 1][c]);
            k[c] += (f1 + f2) * WGK[j];
            l1[c] += (f1.norm() + f2.norm()) * WGK[j];
            if j % 2 == 1 {
                g[c] += (f1 + f2) * WG[j / 2];
            }
        }
    }
    let mut error = [0.0; N];
    let mut priority = 0.0_f64;
    for c in 0..N {
        // QUADPACK-style estimate: |K - G| rescaled by the mean deviation of
        // the integrand, floored at the rounding level of the panel.
        let mean = k[c] * 0.5;
        let mut asc = WGK[7] * (samples[14][c] - mean).norm();
        for j in 0..7 {
            asc += WGK[j] * ((samples[2 * j][c] - mean).norm() + (samples[2 * j + 1][c] - mean).norm());
        }
        k[c] *= half;
        g[c] *= half;
        l1[c] *= half.abs();
        asc *= half.abs();
        let mut err = (k[c] - g[c]).norm();
        if asc > 0.0 && err > 0.0 {
            err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
        }
        err = err.max(PANEL_ROUNDING * f64::EPSILON * l1[c]);
        error[c] = err;
        priority = priority.max(error[c] * weights[c]);
    }
    Panel {
        a,
        b,
        value: k,
        error,
        l1,
        priority,
    }
}

/// Integrate `f` over `[a, b]`, bisecting the panel with the largest
/// (normalised) error until every component meets its target.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [Complex64; N],
{
    integrate_partitioned(f, &[a, b], opts)
}

/// As [`integrate`], over `[points[0], points[last]]` with the initial panels
/// given by consecutive breakpoints. Seeding many short panels keeps the
/// first error estimates honest for long oscillatory intervals.
pub fn integrate_partitioned<const N: usize, F>(f: F, points: &[f64], opts: QuadOptions) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [Complex64; N],
{
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("quadrature needs at least two finite breakpoints"));
    }
    let unit = [1.0; N];
    let mut panels: Vec<Panel<N>> = points.windows(2).map(|w| kronrod(&f, w[0], w[1], &unit)).collect();
    let mut evaluations = 15 * panels.len();

    let sum = |panels: &mut dyn Iterator<Item = &Panel<N>>| {
        let mut value = [Complex64::new(0.0, 0.0); N];
        let mut error = [0.0; N];
        let mut l1 = [0.0; N];
        for p in panels {
            for c in 0..N {
                value[c] += p.value[c];
                error[c] += p.error[c];
                l1[c] += p.l1[c];
            }
        }
        (value, error, l1)
    };
    let target_of = |value: &[Complex64; N], l1: &[f64; N]| {
        let mut t = [0.0; N];
        for c in 0..N {
            t[c] = opts
                .abs_tol
                .max(opts.rel_tol * value[c].norm())
                .max(ROUNDING_FACTOR * f64::EPSILON * l1[c]);
        }
        t
    };

    // Normalise priorities by the first-pass targets so that components of
    // very different size are refined on an equal footing.
    let (value0, _, l10) = sum(&mut panels.iter());
    let t0 = target_of(&value0, &l10);
    let mut weights = [0.0; N];
    for c in 0..N {
        weights[c] = if t0[c] > 0.0 { 1.0 / t0[c] } else { 1.0 };
    }
    for p in panels.iter_mut() {
        p.priority = (0..N).map(|c| p.error[c] * weights[c]).fold(0.0, f64::max);
    }
    let mut heap: BinaryHeap<Panel<N>> = panels.into_iter().collect();
    let max_panels = opts.max_intervals.max(points.len());

    loop {
        let (value, error, l1) = sum(&mut heap.iter());
        if error.iter().any(|e| !e.is_finite()) || value.iter().any(|v| !v.is_finite()) {
            return Err(Error::Convergence("non-finite integrand value".into()));
        }
        let target = target_of(&value, &l1);
        if (0..N).all(|c| error[c] <= target[c]) {
            return Ok(QuadResult {
                value,
                error,
                l1,
                evaluations,
            });
        }
        if heap.len() >= max_panels {
            let worst = (0..N)
                .map(|c| error[c] / target[c].max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            return Err(Error::Convergence(format!(
                "quadrature budget of {max_panels} panels exhausted (error {worst:.2e}x target)"
            )));
        }
        // Bisect a batch of the worst panels before re-summing.
        let batch = (heap.len() / 8).clamp(1, 64);
        for _ in 0..batch {
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            heap.push(kronrod(&f, worst.a, mid, &weights));
            heap.push(kronrod(&f, mid, worst.b, &weights));
            evaluations += 30;
        }
    }
}
