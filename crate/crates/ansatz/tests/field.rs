mod common;

use std::f64::consts::PI;

use common::*;
use filament_ansatz::*;
use filament_core::bubble::w;
use filament_reduction::{AnsatzParams, Regime};
use proptest::prelude::*;

fn flat_field(mu: f64, eps: f64, regime: Regime) -> AnsatzField {
    let p = AnsatzParams::generic(2.0 * PI, M, N - 1, mu, eps, regime);
    field(p, flat(), &filament_ode::PeriodicFunction::constant(2.0 * PI, M, 0.0))
}

#[test]
fn omega_at_origin_is_scaled_peak() {
    let d = dim();
    for regime in [Regime::Subcritical, Regime::Supercritical] {
        let f = flat_field(1.3, 0.02, regime);
        let p = f.at(0.4);
        assert!((f.omega(&p, &[0.0; N - 1]) - p.amplitude * d.c_n()).abs() < 1e-12 * d.c_n());
        // (1 + α)^{q−1} μ_ε^{−(N−2)sε/2} = 1
        let s = regime.sign();
        let balance = p.amplitude.powf(f.exponent() - 1.0) * p.mu_eps.powf(-(d.nf() - 2.0) * s * 0.02 / 2.0);
        assert!((balance - 1.0).abs() < 1e-13);
        // subcritical shrinks the peak for μ_ε < 1
        assert_eq!(p.amplitude < 1.0, s > 0.0);
    }
}

#[test]
fn amplitude_correction_is_eps_log_eps() {
    let d = dim();
    let limit = (d.nf() - 2.0).powi(2) / 16.0;
    let mut prev = f64::INFINITY;
    for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
        // μ_0 = 1 removes the ln μ_0 / ln ε part of the gap
        let f = flat_field(1.0, eps, Regime::Supercritical);
        let alpha = f.at(0.0).amplitude - 1.0;
        let gap = (alpha / (eps * eps.ln()) - limit).abs();
        assert!(gap < prev);
        prev = gap;
    }
    assert!(prev < 1e-6 * limit);
}

#[test]
fn cutoff_plateau_and_support() {
    assert_eq!(chi(0.0, 1.0), 1.0);
    assert_eq!(chi(1.0, 1.0), 1.0);
    assert_eq!(chi(2.0, 1.0), 0.0);
    assert_eq!(chi(5.0, 1.0), 0.0);
    assert!((chi(1.5, 1.0) - 0.5).abs() < 1e-15);
    let mut last = 1.0;
    for i in 0..=200 {
        let v = chi(1.0 + i as f64 / 200.0, 1.0);
        assert!(v <= last && (0.0..=1.0).contains(&v));
        last = v;
    }
}

#[test]
fn correction_is_uncut_on_the_plateau() {
    let s = perturbed_setup();
    let (_, pair) = constants();
    let eps = 0.01;
    let f = field(s.report.params(eps), perturbed(), &s.h);
    let p = f.at(1.0);
    let delta = AnsatzOptions::default().cutoff;
    for r in [0.0, 1.0, 5.0, delta / eps.sqrt()] {
        let mut y = vec![0.0; N - 1];
        y[2] = r;
        let want = p.amplitude * w(&dim(), r) + p.e_eps * pair.z0.eval(r);
        assert!((f.omega(&p, &y) - want).abs() < 1e-12 * want.abs());
    }
    let mut y = vec![0.0; N - 1];
    y[0] = 2.0 * delta / eps.sqrt();
    assert_eq!(f.omega(&p, &y), p.amplitude * w(&dim(), y[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn change_of_variables(x0 in 0.0..2.0 * PI, y in prop::collection::vec(-6.0..6.0f64, N - 1), eps in 1e-3..0.05f64) {
        let s = perturbed_setup();
        let f = field(s.report.params(eps).with_shift(sine_shift(s.curv.len(), 1.0)), perturbed(), &s.h);
        let p = f.at(x0);
        let x: Vec<f64> = y.iter().zip(&p.d_eps).map(|(yk, dk)| p.mu_eps * yk + dk).collect();
        let direct = p.mu_eps.powf(-dim().weight()) * f.omega(&p, &y);
        prop_assert!((f.u_tilde(&p, &x) - direct).abs() <= 1e-12 * direct.abs());
    }
}

#[test]
fn flat_bubble_residual_is_the_exponent_defect() {
    // flat, h = 0, e = 0, d = 0: S = (1+α)(w^q − w^p) exactly
    let d = dim();
    for regime in [Regime::Subcritical, Regime::Supercritical] {
        let f = flat_field(1.2, 1e-3, regime);
        let sl = f.slice(0.7).unwrap();
        let (amp, q) = (sl.center().amplitude, f.exponent());
        for r in [0.0, 0.3, 1.0, 2.5, 6.0] {
            let mut y = vec![0.0; N - 1];
            y[1] = r / 2f64.sqrt();
            y[4] = -r / 2f64.sqrt();
            let wr = w(&d, r);
            let want = amp * (wr.powf(q) - wr.powf(d.p));
            let got = sl.residual(&y).unwrap();
            assert!((got - want).abs() < 1e-8 * wr.powf(d.p), "r = {r}: {got} vs {want}");
        }
    }
}

#[test]
fn step_refinement_is_stable() {
    let s = perturbed_setup();
    let mut y = vec![0.0; N - 1];
    y[0] = 0.8;
    y[3] = -0.5;
    let at = |ratio: f64| {
        let opts = AnsatzOptions { step_ratio: ratio, ..AnsatzOptions::default() };
        let f = assemble(s.report.params(0.01), metric(perturbed()), &s.h, &constants().1, dim(), opts).unwrap();
        f.slice(1.0).unwrap().residual(&y).unwrap()
    };
    let (a, b, c) = (at(12.5), at(25.0), at(50.0));
    let (coarse, fine) = ((a - c).abs(), (b - c).abs());
    // sixth-order stencil: halving the step divides the error by ~64
    let order = ((coarse - fine) / fine).log2();
    assert!(order > 5.0 && order < 7.0, "{a} {b} {c} order {order}");
    // error at the default μ/50 is about fine/64
    assert!(fine / 64.0 < 1e-6 * c.abs(), "{a} {b} {c}");
}

#[test]
fn residual_at_maps_slow_variable() {
    let s = perturbed_setup();
    let eps = 0.01;
    let f = field(s.report.params(eps), perturbed(), &s.h);
    let y = [0.3, 0.0, -0.2, 0.0, 0.1, 0.0, 0.0];
    let y0 = 1.0 / eps.sqrt();
    assert_eq!(residual_at(&f, y0, &y).unwrap(), f.slice(1.0).unwrap().residual(&y).unwrap());
}

#[test]
fn chart_and_stencil_errors() {
    let s = perturbed_setup();
    let (_, pair) = constants();
    let big = AnsatzParams::generic(2.0 * PI, M, N - 1, 2.0, 0.01, Regime::Subcritical);
    assert!(matches!(
        assemble(big, metric(flat()), &filament_ode::PeriodicFunction::constant(2.0 * PI, M, 0.0), pair, dim(), AnsatzOptions::default()),
        Err(AnsatzError::ChartRadius { .. })
    ));
    let f = field(s.report.params(0.01), perturbed(), &s.h);
    let sl = f.slice(0.0).unwrap();
    let mut y = vec![0.0; N - 1];
    y[0] = sl.radius * 1.01;
    assert!(matches!(sl.residual(&y), Err(AnsatzError::OutsideChart { .. })));
    let opts = AnsatzOptions { step_ratio: 5.0, ..AnsatzOptions::default() };
    let f = assemble(s.report.params(0.01), metric(perturbed()), &s.h, pair, dim(), opts).unwrap();
    assert!(matches!(f.slice(0.0), Err(AnsatzError::StencilStep { .. })));
}
