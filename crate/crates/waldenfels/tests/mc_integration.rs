//! Monte Carlo integration tests against closed forms and matched-stream
//! identities.

use waldenfels::field::ScalarCoeff;
use waldenfels::geometry::DomainSpec;
use waldenfels::mc::{
    estimate_feynman_kac, estimate_gauge, estimate_mean_exit, estimate_survival, PathConfig,
};
use waldenfels::operator::presets;

fn interval() -> DomainSpec {
    DomainSpec::ball(vec![0.0], 1.0)
}

#[test]
fn gauge_matches_cosh_closed_form() {
    // (1/2)∂² on (−1,1), c ≡ 1: v(0) = 1/cosh(√2)
    let mut op = presets::laplacian(1);
    op.coeffs.c = ScalarCoeff::constant(1.0);
    let cfg = PathConfig {
        dt: 5e-4,
        t_max: 200.0,
        n_paths: 20_000,
        seed: 21,
        antithetic: false,
    };
    let est = estimate_gauge(&op, &interval(), &[0.0], &cfg).unwrap();
    let exact = 1.0 / (2.0_f64.sqrt()).cosh();
    assert!(
        (est.v.value - exact).abs() < 3.0 * est.v.ci_95 + 0.02,
        "v = {} ± {}, exact {exact}",
        est.v.value,
        est.v.ci_95
    );
}

#[test]
fn feynman_kac_equals_gauge_on_matched_streams() {
    // f = 0, g = 1, c = 1: the estimator is exp(−∫c) pathwise, identical
    // streams give bit-identical estimates
    let mut op = presets::laplacian(1);
    op.coeffs.c = ScalarCoeff::constant(1.0);
    let cfg = PathConfig {
        dt: 1e-3,
        t_max: 200.0,
        n_paths: 2_000,
        seed: 5,
        antithetic: false,
    };
    let fk = estimate_feynman_kac(&op, &interval(), &[0.0], &|_| 0.0, &|_| 1.0, &cfg).unwrap();
    let gauge = estimate_gauge(&op, &interval(), &[0.0], &cfg).unwrap();
    assert_eq!(fk.value.to_bits(), gauge.v.value.to_bits());
}

#[test]
fn feynman_kac_mean_exit_reference() {
    // f = 1, g = 0, c = 0 estimates E_0 τ = 1 − x0² = 1
    let op = presets::laplacian(1);
    let cfg = PathConfig {
        dt: 2.5e-4,
        t_max: 200.0,
        n_paths: 6_000,
        seed: 9,
        antithetic: false,
    };
    let est = estimate_feynman_kac(&op, &interval(), &[0.0], &|_| 1.0, &|_| 0.0, &cfg).unwrap();
    assert!(
        (est.value - 1.0).abs() < 3.0 * est.ci_95 + 0.02,
        "{} ± {}",
        est.value,
        est.ci_95
    );
}

#[test]
fn dt_refinement_within_ci_budget() {
    let op = presets::laplacian(1);
    let coarse = PathConfig {
        dt: 1e-3,
        t_max: 200.0,
        n_paths: 6_000,
        seed: 4,
        antithetic: false,
    };
    let fine = PathConfig { dt: 5e-4, ..coarse };
    let a = estimate_mean_exit(&op, &interval(), &[0.0], &coarse).unwrap();
    let b = estimate_mean_exit(&op, &interval(), &[0.0], &fine).unwrap();
    assert!(
        (a.value - b.value).abs() < a.ci_95 + b.ci_95 + 0.02,
        "{} vs {}",
        a.value,
        b.value
    );
}

#[test]
fn antithetic_mean_within_ci() {
    let op = presets::laplacian(1);
    let plain = PathConfig {
        dt: 1e-3,
        t_max: 200.0,
        n_paths: 8_000,
        seed: 6,
        antithetic: false,
    };
    let anti = PathConfig {
        antithetic: true,
        ..plain
    };
    let a = estimate_mean_exit(&op, &interval(), &[0.0], &plain).unwrap();
    let b = estimate_mean_exit(&op, &interval(), &[0.0], &anti).unwrap();
    assert!((a.value - b.value).abs() < a.ci_95 + b.ci_95 + 0.01);
}

#[test]
fn survival_decay_matches_principal_eigenvalue() {
    // log-slope of P(τ > t) at large t approaches −π²/8
    let op = presets::laplacian(1);
    let cfg = PathConfig {
        dt: 1e-3,
        t_max: 50.0,
        n_paths: 40_000,
        seed: 12,
        antithetic: false,
    };
    let grid = [1.0, 1.5, 2.0, 2.5];
    let surv = estimate_survival(&op, &interval(), &[0.0], &grid, &cfg).unwrap();
    let (t1, p1, _) = surv[0];
    let (t2, p2, _) = surv[3];
    let slope = (p2.ln() - p1.ln()) / (t2 - t1);
    let lambda = std::f64::consts::PI.powi(2) / 8.0;
    assert!((slope + lambda).abs() < 0.08, "slope {slope} vs -{lambda}");
}

#[test]
fn estimates_stay_in_range() {
    let mut op = presets::two_point_jump(1, 0.5, 1.0);
    op.coeffs.c = ScalarCoeff::constant(0.7);
    let cfg = PathConfig {
        dt: 1e-3,
        t_max: 200.0,
        n_paths: 3_000,
        seed: 8,
        antithetic: false,
    };
    let est = estimate_gauge(&op, &interval(), &[0.2], &cfg).unwrap();
    assert!(est.v.value > 0.0 && est.v.value <= 1.0);
    assert!(est.w >= 0.0);
    assert_eq!(est.v.horizon_fraction, 0.0);
}
