//! Cross-module pipeline tests: semigroup decay against the principal
//! eigenvalue, the gauge-modulus closed form, and the Harnack-corollary
//! ratio on grid-certified cases.

use waldenfels::barrier::rho_modulus;
use waldenfels::field::ScalarCoeff;
use waldenfels::geometry::DomainSpec;
use waldenfels::grid::{assemble, gauge_grid, principal_eigenpair, semigroup};
use waldenfels::operator::presets;
use waldenfels::report::Verdict;
use waldenfels::verify::{check_harnack_corollary, check_weak_max, gen_subsolution};

fn interval() -> DomainSpec {
    DomainSpec::ball(vec![0.0], 1.0)
}

#[test]
fn semigroup_decay_rate_matches_lambda() {
    // ‖P_t 1‖∞ decays like e^{−λ_D t} at large t; slope within 2%
    let op = presets::laplacian(1);
    let (_g, disc) = assemble(&op, &interval(), 0.01).unwrap();
    let pair = principal_eigenpair(&disc, 1e-10).unwrap();
    let n = disc.n_interior();
    let g0 = vec![0.0; disc.n_exterior()];
    let ones = vec![1.0; n];
    let (t1, t2) = (2.0, 3.0);
    let u1 = semigroup(&disc, t1, &ones, &g0).unwrap();
    let u2 = semigroup(&disc, t2, &ones, &g0).unwrap();
    let sup1 = u1.iter().cloned().fold(0.0_f64, f64::max);
    let sup2 = u2.iter().cloned().fold(0.0_f64, f64::max);
    let rate = -(sup2.ln() - sup1.ln()) / (t2 - t1);
    assert!(
        (rate / pair.lambda - 1.0).abs() < 0.02,
        "decay rate {rate} vs lambda {}",
        pair.lambda
    );
}

#[test]
fn rho_modulus_closed_form() {
    // 1D Brownian, c ≡ 1: rho(r) = 1 − cosh((1−r)√2)/cosh(√2)
    let mut op = presets::laplacian(1);
    op.coeffs.c = ScalarCoeff::constant(1.0);
    let dom = interval();
    let (grid, disc) = assemble(&op, &dom, 0.0025).unwrap();
    let gg = gauge_grid(&disc).unwrap();
    let table = rho_modulus(&gg.w, &grid, &dom, &[0.25, 0.5, 0.75]).unwrap();
    let s2 = 2.0_f64.sqrt();
    for (r, rho) in &table {
        let exact = 1.0 - ((1.0 - r) * s2).cosh() / s2.cosh();
        assert!(
            (rho - exact).abs() < 5e-3,
            "rho({r}) = {rho}, exact {exact}"
        );
        assert!((0.0..=1.0).contains(rho));
    }
    // nondecreasing
    assert!(table.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12));
    // the specific value at r = 0.5
    assert!((table[1].1 - 0.42126).abs() < 5e-3, "{}", table[1].1);
}

#[test]
fn constant_case_margin_zero() {
    // u = 1, g = 1, c = 0: the weak maximum margin is exactly 0
    let op = presets::laplacian(1);
    let (_g, disc) = assemble(&op, &interval(), 0.05).unwrap();
    let solver = disc.factor(0.0).unwrap();
    let z = vec![0.0; disc.n_interior()];
    let ones = vec![1.0; disc.n_exterior()];
    let case = gen_subsolution(&disc, &solver, &z, &ones, 0).unwrap();
    let rep = check_weak_max(&case, &disc, 1e-9);
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.margin().abs() < 1e-10);
}

#[test]
fn harnack_corollary_ratio() {
    // harmonic u (f = 0) with nonconstant boundary data: positive informational ratio
    let op = presets::laplacian(1);
    let dom = interval();
    let (grid, disc) = assemble(&op, &dom, 0.01).unwrap();
    let solver = disc.factor(0.0).unwrap();
    let z = vec![0.0; grid.n_interior()];
    let g: Vec<f64> = (0..grid.n_exterior())
        .map(|k| {
            let x = grid.exterior_position(k);
            if x[0] > 0.0 {
                1.0
            } else {
                0.25
            }
        })
        .collect();
    let case = gen_subsolution(&disc, &solver, &z, &g, 0).unwrap();
    let x0 = grid.interior_nodes_in(&DomainSpec::ball(vec![0.0], 1e-9))[0];
    let rep = check_harnack_corollary(&case, &disc, &dom, x0);
    assert_eq!(rep.verdict, Verdict::Info);
    let ratio = rep.margins.iter().find(|(n, _)| n == "ratio").unwrap().1;
    assert!(ratio > 0.0, "ratio {ratio}");

    // constant data: not applicable
    let ones = vec![1.0; grid.n_exterior()];
    let case = gen_subsolution(&disc, &solver, &z, &ones, 1).unwrap();
    let rep = check_harnack_corollary(&case, &disc, &dom, x0);
    assert_eq!(rep.verdict, Verdict::NotApplicable);
}
