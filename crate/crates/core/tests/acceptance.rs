//! Acceptance criteria 1–8. Each criterion prints one `PASS`/`FAIL` line on
//! the process stdout (bypassing the test-output capture) with its measured
//! values; the test fails if any criterion fails.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use hfscatter::ansatz::{
    estimate_prop1, estimate_prop2, mt_leading_amplitude, CoefficientFn, Convention, ExpansionConfig, ExpansionTerm,
    Prop2Source, DEFAULT_BAND_WIDTH, PROP1_MAX_RATE, PROP1_MIN_R_SQUARED,
};
use hfscatter::currents::{bt2_current_2d, bt2_current_2d_rationalized, kirchhoff_current, CurrentKind, ShadowMode};
use hfscatter::fock::{psi_asymptotic, psi_quadrature, FockEvaluator};
use hfscatter::geometry::{theta_with_normal, CurveGeometry, Region, WaveConfig};
use hfscatter::harness::{run_trace, validate, HarnessConfig};
use hfscatter::reference::{exact_current, mie_build};
use hfscatter::specfun::{airy_ai, airy_connection_residual, hankel1_derivatives, hankel1_sequence};
use hfscatter::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn report(n: usize, title: &str, o: &Outcome) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} criterion {n} ({title}): {}", if o.passed { "PASS" } else { "FAIL" }, o.detail).unwrap();
    out.flush().unwrap();
}

fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * (i as f64 + 0.5) / n as f64).collect()
}

fn circle() -> CurveGeometry {
    CurveGeometry::circle(1.0).unwrap()
}

fn waves(ks: &[f64]) -> Vec<WaveConfig> {
    ks.iter().map(|&k| WaveConfig::from_degrees(k, 0.0).unwrap()).collect()
}

/// Lit-region agreement of Kirchhoff, and the shadow behaviour of bt1, exact
/// and extended Kirchhoff at the deep-shadow pole. The largest moduli over the
/// whole deep-shadow label are reported alongside: that label starts at
/// n·ω = ε, where the Fock variable is still O(1) and every current there is
/// far from its shadow limit.
fn criterion_1() -> Outcome {
    let cfg = HarnessConfig::parse("wave.k = 150\ntrace.samples = 2048\ntrace.kinds = exact, kirchhoff, bt1\n").unwrap();
    let trace = run_trace(&cfg).unwrap();
    let exact = trace.column(CurrentKind::Exact).unwrap();
    let kirchhoff = trace.column(CurrentKind::Kirchhoff).unwrap();
    let bt1 = trace.column(CurrentKind::Bt1).unwrap();
    let in_region = |r: Region| trace.rows.iter().map(move |row| row.region == r);

    let (mut gap, mut peak) = (0.0_f64, 0.0_f64);
    for ((lit, e), k) in in_region(Region::Illuminated).zip(&exact).zip(&kirchhoff) {
        if lit {
            gap = gap.max((k - e).norm());
            peak = peak.max(e.norm());
        }
    }
    let lit_gap = gap / peak;

    let (mut label_bt1, mut label_exact) = (0.0_f64, 0.0_f64);
    for ((deep, e), b) in in_region(Region::DeepShadow).zip(&exact).zip(&bt1) {
        if deep {
            label_bt1 = label_bt1.max(b.norm());
            label_exact = label_exact.max(e.norm());
        }
    }

    let pole = &trace.rows[0];
    assert_eq!((pole.theta, pole.n_dot_omega), (0.0, 1.0));
    let wave = cfg.wave().unwrap();
    let extended = kirchhoff_current(&circle(), &wave, 0.0, ShadowMode::Extended).norm();
    let passed = lit_gap <= 0.15 && bt1[0].norm() <= 1.0 && exact[0].norm() <= 1.0 && extended >= 100.0;
    outcome(
        passed,
        format!(
            "lit relative gap {lit_gap:.4} (≤ 0.15); deep-shadow pole |bt1| {:.3e}, |exact| {:.3e} (≤ 1), \
             |extended kirchhoff| {extended:.1} (≥ 100); max over deep-shadow label: |bt1| {label_bt1:.1}, \
             |exact| {label_exact:.1}",
            bt1[0].norm(),
            exact[0].norm()
        ),
    )
}

fn criterion_2() -> Outcome {
    let est = estimate_prop1(
        &circle(),
        &waves(&[100.0, 200.0, 400.0, 800.0]),
        &uniform_grid(256),
        &ExpansionConfig::new(Convention::Calibrated),
    )
    .unwrap();
    outcome(
        est.satisfies_contract(),
        format!(
            "fitted rate {:.4} (≤ {PROP1_MAX_RATE}), R² {:.5} (≥ {PROP1_MIN_R_SQUARED}), gaps {:?}",
            est.fit.rate,
            est.fit.r_squared,
            est.max_relative_gap.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_3() -> Outcome {
    let geom = circle();
    let ws = waves(&[50.0, 100.0, 200.0, 400.0]);
    let grid = uniform_grid(2048);
    let ansatz = ExpansionConfig::new(Convention::Kirchhoff);
    let a = estimate_prop2(&geom, &ws, DEFAULT_BAND_WIDTH, &grid, &Prop2Source::Ansatz(ansatz)).unwrap();
    let e = estimate_prop2(&geom, &ws, DEFAULT_BAND_WIDTH, &grid, &Prop2Source::Exact).unwrap();
    outcome(
        a.fit.rate.abs() <= 0.15 && e.fit.rate.abs() <= 0.15,
        format!("exponent after k^(2/3): ansatz {:.4}, exact {:.4} (|·| ≤ 0.15)", a.fit.rate, e.fit.rate),
    )
}

fn criterion_4() -> Outcome {
    let geom = circle();
    let wave = WaveConfig::from_degrees(800.0, 0.0).unwrap();
    let theta = theta_with_normal(&geom, [-1.0, 0.0]);
    let cfg = ExpansionConfig::new(Convention::Kirchhoff);
    let ratio = mt_leading_amplitude(&geom, &wave, theta, &cfg).unwrap()
        / kirchhoff_current(&geom, &wave, theta, ShadowMode::Extended);
    let dev = (ratio - 1.0).norm();
    outcome(dev <= 0.05, format!("|ratio − 1| = {dev:.3e} at k = 800 (≤ 0.05)"))
}

fn criterion_5() -> Outcome {
    let eval = FockEvaluator::default();
    let mut agreement = 0.0_f64;
    for i in 0..=24 {
        let tau = 6.0 + 0.25 * i as f64;
        let q = psi_quadrature(tau, &eval.contour).unwrap();
        let a = psi_asymptotic(tau).unwrap();
        for l in 0..3 {
            agreement = agreement.max((q[l].value - a[l].value).norm() / (q[l].err_estimate + a[l].err_estimate));
        }
    }
    let decay = eval.eval(-6.0, 0).unwrap().value.norm() / eval.eval(2.0, 0).unwrap().value.norm();
    let h = 1e-4;
    let mut derivative = 0.0_f64;
    for i in 0..=40 {
        let tau = -5.0 + 0.25 * i as f64;
        let v = eval.eval_all(tau).unwrap();
        let lo = eval.eval_all(tau - h).unwrap();
        let hi = eval.eval_all(tau + h).unwrap();
        for l in 1..3 {
            let fd = (hi[l - 1].value - lo[l - 1].value) / (2.0 * h);
            derivative = derivative.max((v[l].value - fd).norm() / v[l].value.norm());
        }
    }
    outcome(
        agreement <= 1.0 && decay < 1e-2 && derivative <= 1e-4,
        format!(
            "max |quad − asym| / combined estimate {agreement:.3} (≤ 1); |Ψ(−6)/Ψ(2)| {decay:.3e} (< 1e-2); \
             derivative residual {derivative:.3e} (≤ 1e-4)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let (mut connection, mut rounded) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let z = Complex64::from_polar(rng.random_range(0.0..5.0), rng.random_range(0.0..2.0 * PI));
        connection = connection.max(airy_connection_residual(z).unwrap().norm());
        let r = airy_ai(z).unwrap().value + w * airy_ai(w * z).unwrap().value + w.conj() * airy_ai(w.conj() * z).unwrap().value;
        rounded = rounded.max(r.norm());
    }
    let mut wronskian = 0.0_f64;
    for _ in 0..50 {
        let x: f64 = rng.random_range(0.5..600.0);
        let n = rng.random_range(0..=(x as usize + 40));
        let h = hankel1_sequence(x, n).unwrap();
        let dh = hankel1_derivatives(x, &h).unwrap();
        let target = 2.0 / (PI * x);
        wronskian = wronskian.max(((h[n].conj() * dh[n]).im - target).abs() / target);
    }
    let wave = WaveConfig::from_degrees(150.0, 0.0).unwrap();
    let sol = mie_build(1.0, 150.0).unwrap();
    let more = sol.with_appended_modes(20).unwrap();
    let (mut convergence, mut dirichlet) = (0.0_f64, 0.0_f64);
    for i in 0..720 {
        let theta = 2.0 * PI * i as f64 / 720.0;
        let a = exact_current(&sol, theta, &wave);
        let b = exact_current(&more, theta, &wave);
        convergence = convergence.max((a - b).norm() / a.norm());
        dirichlet = dirichlet.max(sol.total_field(1.0, theta, &wave).unwrap().norm());
    }
    outcome(
        connection < 1e-12 && wronskian < 1e-9 && convergence < 1e-10 && dirichlet < 1e-9,
        format!(
            "Airy connection {connection:.3e} (< 1e-12; {rounded:.3e} with rounded rotations); Bessel Wronskian {wronskian:.3e} (< 1e-9); \
             Mie self-convergence {convergence:.3e} (< 1e-10); Dirichlet residual {dirichlet:.3e} (< 1e-9)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let geoms = [circle(), CurveGeometry::ellipse(2.0, 1.0).unwrap()];
    let (mut coupled_ok, mut perturbed_rejected, mut identity) = (0, 0, 0.0_f64);
    let trials = 50;
    for i in 0..trials {
        let geom = &geoms[i % 2];
        let wave = WaveConfig::from_degrees(rng.random_range(5.0..1000.0), rng.random_range(0.0..360.0)).unwrap();
        let c = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let m = rng.random_range(1..6) as f64;
        let a: CoefficientFn = Arc::new(move |_, _, t| c * (2.0 + (m * t).cos()));
        let a_for_b = a.clone();
        let b: CoefficientFn = Arc::new(move |g, w, t| -a_for_b(g, w, t) / Complex64::new(0.0, w.k));
        let shift = Complex64::from_polar(1e-6 * c.norm(), rng.random_range(0.0..2.0 * PI));
        let b_for_bad = b.clone();
        let bad: CoefficientFn = Arc::new(move |g, w, t| b_for_bad(g, w, t) + shift);
        let (p, l) = (rng.random_range(0..3), rng.random_range(1..3));
        if let Ok(term) = ExpansionTerm::from_pair(p, l, a.clone(), b.clone(), geom, &wave) {
            coupled_ok += 1;
            let t = rng.random_range(0.0..2.0 * PI);
            let residual = term.b(geom, &wave, t) * Complex64::new(0.0, wave.k) + term.a(geom, &wave, t);
            identity = identity.max(residual.norm() / term.a(geom, &wave, t).norm());
        }
        if matches!(ExpansionTerm::from_pair(p, l, a, bad, geom, &wave), Err(Error::Coupling(_))) {
            perturbed_rejected += 1;
        }
    }
    let mut forms = 0.0_f64;
    for i in 0..200 {
        let geom = &geoms[i % 2];
        let wave = WaveConfig::from_degrees(rng.random_range(1.0..1000.0), rng.random_range(0.0..360.0)).unwrap();
        let theta = rng.random_range(0.0..2.0 * PI);
        let a = bt2_current_2d(geom, &wave, theta);
        forms = forms.max((a - bt2_current_2d_rationalized(geom, &wave, theta)).norm() / a.norm());
    }
    outcome(
        coupled_ok == trials && perturbed_rejected == trials && identity <= 1e-12 && forms <= 1e-12,
        format!(
            "coupled pairs accepted {coupled_ok}/{trials}, perturbed rejected {perturbed_rejected}/{trials}, \
             ik·b + a residual {identity:.3e}; second-order forms differ by {forms:.3e} (≤ 1e-12)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let cfg = HarnessConfig::default();
    let first = validate(&cfg).to_text();
    let second = validate(&cfg).to_text();
    let summary = first.lines().last().unwrap_or_default().to_owned();
    outcome(first == second, format!("two reports identical: {}; {} bytes; {summary}", first == second, first.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("unit-circle comparison at k = 150", criterion_1),
        ("first-order error rate", criterion_2),
        ("shadow-band growth", criterion_3),
        ("Kirchhoff recovery", criterion_4),
        ("Fock function", criterion_5),
        ("special functions and Mie series", criterion_6),
        ("coefficient coupling and second-order forms", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        report(i + 1, title, &o);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
