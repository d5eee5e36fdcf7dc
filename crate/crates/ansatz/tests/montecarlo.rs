mod common;

use std::f64::consts::PI;

use common::*;
use filament_ansatz::*;
use filament_ode::PeriodicFunction;
use filament_reduction::*;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Slice position on a grid node, so predictions need no interpolation.
fn node(m: usize, x0: f64) -> (usize, f64) {
    let i = (x0 / (2.0 * PI) * m as f64).round() as usize;
    (i, 2.0 * PI * i as f64 / m as f64)
}

#[test]
fn radial_cdf_matches_quadrature() {
    let d = dim();
    let nn = d.big_n as i32;
    let s = RadialSampler::new(&d, 40.0).unwrap();
    for t in [0.1, 0.5, 0.9, 40.0 / 41.0] {
        let q = simpson(|u| u.powi(nn - 1) * (1.0 - u).powi(nn - 5), 0.0, t, 2000);
        assert!((s.cdf(t) - q).abs() < 1e-12, "{t}");
    }
    for u in [0.0, 0.2, 0.77, 1.0] {
        let r = s.radius(u);
        assert!((s.cdf(r / (1.0 + r)) - u * s.cdf(40.0 / 41.0)).abs() < 1e-14);
    }
}

#[test]
fn stratified_weights_integrate_radial_functions() {
    let d = dim();
    let nn = d.big_n as i32;
    let r_max = 25.0;
    let s = RadialSampler::new(&d, r_max).unwrap();
    let g = |r: f64| (1.0 + r * r).powi(-nn + 2);
    let strata = 20_000;
    let est: f64 = (0..strata).map(|k| {
        let r = s.radius((k as f64 + 0.5) / strata as f64);
        s.weight(r) * g(r)
    }).sum::<f64>() / strata as f64;
    // substitute r = t/(1−t) so the quadrature sees a smooth integrand
    let want = d.sphere_area()
        * simpson(|t| { let r = t / (1.0 - t); r.powi(nn - 1) * g(r) / (1.0 - t).powi(2) }, 0.0, r_max / (1.0 + r_max), 4000);
    assert!((est - want).abs() < 1e-6 * want, "{est} vs {want}");
}

#[test]
fn translation_channel_vanishes_without_shift_on_flat() {
    let p = AnsatzParams::generic(2.0 * PI, M, N - 1, 1.2, 0.01, Regime::Subcritical);
    let f = field(p, flat(), &PeriodicFunction::from_fn(2.0 * PI, M, |t| 0.5 + 0.2 * t.cos()));
    for k in [1, 4] {
        let e = project_residual(&f, k, 3.0, 20_000, 11, None).unwrap();
        assert!(e.estimate.abs() <= 2.0 * e.stderr + 1e-12, "{e:?}");
    }
}

fn prediction(p: &AnsatzParams) -> ProjectionPrediction {
    let s = perturbed_setup();
    let c = &constants().0;
    let sig = compute_sigma(&s.curv, &s.h, c).unwrap();
    predicted_projections(p, &sig, &s.curv, c).unwrap()
}

#[test]
fn generic_projections_approach_predicted_eps_coefficient() {
    let s = perturbed_setup();
    let m = s.curv.len();
    let (i, x0) = node(m, 1.0);
    let mu = 0.5 * s.report.mu0.mu.mean();
    let mut gaps = Vec::new();
    for eps in [1e-3, 2.5e-4] {
        let p = AnsatzParams::generic(2.0 * PI, m, N - 1, mu, eps, Regime::Subcritical);
        let pred = prediction(&p);
        let f = field(p, perturbed(), &s.h);
        let est = project_channels(&f.slice(x0).unwrap(), &[Channel::Z0, Channel::Dilation], 100_000, 3).unwrap();
        let want = [pred.z0_eps.values[i], pred.zn1_eps.values[i]];
        let gap: Vec<f64> = est.iter().zip(want).map(|(e, w)| (e.estimate / eps - w) / w).collect();
        assert!(gap.iter().all(|g| g.abs() < 0.02), "ε = {eps}: {gap:?}");
        gaps.push(gap);
    }
    // the remainder is one order higher in ε
    for c in 0..2 {
        let ratio = gaps[0][c] / gaps[1][c];
        assert!(ratio > 2.5 && ratio < 6.0, "{ratio}");
    }
}

#[test]
fn shifted_translation_channel_matches_prediction() {
    let s = perturbed_setup();
    let m = s.curv.len();
    let (i, x0) = node(m, PI / 2.0);
    let eps = 2.5e-4;
    let p = s.report.params(eps).with_shift(sine_shift(m, 1.0));
    let pred = prediction(&p);
    let f = field(p, perturbed(), &s.h);
    let est = project_channels(&f.slice(x0).unwrap(), &[Channel::Translation(1), Channel::Translation(2)], 50_000, 5).unwrap();
    let want = pred.zk.values[i][0];
    assert!(((est[0].estimate / eps.powf(1.5) - want) / want).abs() < 0.01);
    assert!(est[1].estimate.abs() < 1e-6 * est[0].estimate.abs());
}

#[test]
fn pipeline_projections_are_second_order() {
    let s = perturbed_setup();
    let m = s.curv.len();
    let (i, x0) = node(m, 1.0);
    let c = &constants().0;
    let mut est = Vec::new();
    for eps in [1e-3, 2.5e-4] {
        let p = s.report.params(eps);
        let pred = prediction(&p);
        assert!(pred.zn1_eps.values[i].abs() < 1e-9 * c.a1.abs());
        let f = field(p, perturbed(), &s.h);
        est.push(project_channels(&f.slice(x0).unwrap(), &[Channel::Z0, Channel::Dilation], 100_000, 9).unwrap());
    }
    for ch in 0..2 {
        let (a, b) = (&est[0][ch], &est[1][ch]);
        // the ε-coefficient extrapolates to the predicted zero
        assert!((b.estimate / 2.5e-4).abs() < 0.01 * c.a1.abs(), "{b:?}");
        let slope = (a.estimate / b.estimate).ln() / 4f64.ln();
        assert!((slope - 2.0).abs() < 0.15, "{} slope {slope}", a.channel);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let s = perturbed_setup();
    let f = field(s.report.params(0.01).with_shift(sine_shift(s.curv.len(), 1.0)), perturbed(), &s.h);
    let sl = f.slice(1.3).unwrap();
    let ch = [Channel::Z0, Channel::Translation(1), Channel::Dilation];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| project_channels(&sl, &ch, 20_000, 77).unwrap())
    };
    let base = run(1);
    for threads in [1, 4, 7] {
        for (a, b) in base.iter().zip(run(threads)) {
            assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
            assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        }
    }
    let other = project_channels(&sl, &ch, 20_000, 78).unwrap();
    assert_ne!(other[0].estimate, base[0].estimate);
}

#[test]
fn budget_channel_and_tolerance_errors() {
    let s = perturbed_setup();
    let f = field(s.report.params(0.01), perturbed(), &s.h);
    assert!(matches!(project_residual(&f, 0, 0.0, 9_999, 1, None), Err(AnsatzError::Budget(9_999))));
    assert!(matches!(project_residual(&f, N + 1, 0.0, 10_000, 1, None), Err(AnsatzError::Input(_))));
    assert!(matches!(project_residual(&f, 0, 0.0, 10_000, 1, Some(1e-12)), Err(AnsatzError::Tolerance { .. })));
    assert_eq!(Channel::from_index(N, N - 1).unwrap(), Channel::Dilation);
    assert_eq!(Channel::Translation(3).label(N - 1), "Z3");
}
