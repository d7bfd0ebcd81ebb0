//! Property tests for the operator module: linearity, annihilation of
//! constants, and monotonicity of the sampled bounds.

use proptest::prelude::*;
use waldenfels::field::{QuadraticField, SmoothField};
use waldenfels::geometry::{reachable_set_contains, DomainSpec};
use waldenfels::operator::{
    operator_bounds, presets, DisplacementDensity, LevyKernelSpec, OperatorSpec, QuadratureConfig,
    SamplingConfig,
};

fn combine(a: f64, u: &QuadraticField, b: f64, v: &QuadraticField) -> QuadraticField {
    let d = u.dim;
    QuadraticField {
        dim: d,
        m: u.m.iter().zip(&v.m).map(|(x, y)| a * x + b * y).collect(),
        v: u.v.iter().zip(&v.v).map(|(x, y)| a * x + b * y).collect(),
        k: a * u.k + b * v.k,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // apply(a·u + b·v) = a·apply(u) + b·apply(v) within quadrature tolerance
    #[test]
    fn apply_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        m1 in -1.0f64..1.0,
        m2 in -1.0f64..1.0,
        v1 in -1.0f64..1.0,
        x1 in -0.5f64..0.5,
        x2 in -0.5f64..0.5,
    ) {
        let op = presets::two_point_jump(2, 0.7, 1.3);
        let quad = QuadratureConfig::default();
        let mut u = QuadraticField::squared_norm(2);
        u.m[0] = m1;
        u.v[0] = v1;
        let mut v = QuadraticField::squared_norm(2);
        v.m[3] = m2;
        let w = combine(a, &u, b, &v);
        let x = [x1, x2];
        let lhs = op.apply(&w, &x, &quad).unwrap();
        let rhs = a * op.apply(&u, &x, &quad).unwrap() + b * op.apply(&v, &x, &quad).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    // constants are annihilated exactly for atomic kernels
    #[test]
    fn constants_annihilated(k in -5.0f64..5.0, x1 in -1.0f64..1.0) {
        let op = presets::two_point_jump(1, 0.5, 2.0);
        let quad = QuadratureConfig::default();
        let c = QuadraticField::constant(1, k);
        let v = op.apply(&c, &[x1], &quad).unwrap();
        prop_assert_eq!(v, 0.0);
    }

    // lambda_K is monotone under region inclusion on matched lattices
    #[test]
    fn bounds_monotone_in_region(r_small in 0.2f64..0.8) {
        let q = waldenfels::field::matrix_registry("diag-one-plusx1", 2).unwrap();
        let op = OperatorSpec {
            coeffs: waldenfels::operator::CoefficientField::new(
                2,
                q,
                waldenfels::field::VectorCoeff::constant(vec![0.0, 0.0]),
                waldenfels::field::ScalarCoeff::constant(0.0),
            ),
            kernel: LevyKernelSpec::Zero,
        };
        let cfg = SamplingConfig { per_axis: 9, quasi_random: 128 };
        let small = DomainSpec::ball(vec![0.5, 0.0], r_small);
        let big = DomainSpec::ball(vec![0.5, 0.0], 1.0);
        let lam_small = operator_bounds(&op, &small, &cfg).unwrap().lambda_k;
        let lam_big = operator_bounds(&op, &big, &cfg).unwrap().lambda_k;
        // the smaller region is contained in the larger one; a sampled
        // minimum over fewer points can only be larger up to sampling slack
        prop_assert!(lam_small >= lam_big - 1e-9);
    }

    // reachability is monotone in the kernel support radius
    #[test]
    fn reachable_monotone_in_radius(rho in 0.1f64..1.0, z1 in -3.0f64..3.0, z2 in -3.0f64..3.0) {
        let dom = DomainSpec::ball(vec![0.0, 0.0], 1.0);
        let small = LevyKernelSpec::FiniteActivity {
            intensity: waldenfels::field::ScalarCoeff::constant(1.0),
            density: DisplacementDensity::UniformBall { radius: rho },
            support_radius: rho,
        };
        let large = LevyKernelSpec::FiniteActivity {
            intensity: waldenfels::field::ScalarCoeff::constant(1.0),
            density: DisplacementDensity::UniformBall { radius: rho * 2.0 },
            support_radius: rho * 2.0,
        };
        let z = [z1, z2];
        if reachable_set_contains(&dom, &small, &z) {
            prop_assert!(reachable_set_contains(&dom, &large, &z));
        }
    }
}

#[test]
fn barrier_oracles_match_finite_differences_second_order() {
    // barrier gradient/Hessian oracles vs central differences at h = 1e-4
    let eta = waldenfels::barrier::RadialExpField {
        dim: 3,
        center: vec![0.1, -0.2, 0.05],
        alpha: 3.0,
        amp: 1.0,
        offset: -0.3,
    };
    let x = [0.4, 0.1, -0.3];
    let h = 1e-4;
    let mut g = [0.0; 3];
    eta.gradient(&x, &mut g);
    let mut hess = [0.0; 9];
    eta.hessian(&x, &mut hess);
    for i in 0..3 {
        let mut xp = x;
        xp[i] += h;
        let mut xm = x;
        xm[i] -= h;
        let fd = (eta.value(&xp) - eta.value(&xm)) / (2.0 * h);
        assert!((fd - g[i]).abs() / g[i].abs().max(1e-6) < 1e-6);
        for j in 0..3 {
            let mut xpp = xp;
            xpp[j] += h;
            let mut xpm = xp;
            xpm[j] -= h;
            let mut xmp = xm;
            xmp[j] += h;
            let mut xmm = xm;
            xmm[j] -= h;
            let fd2 = (eta.value(&xpp) - eta.value(&xpm) - eta.value(&xmp) + eta.value(&xmm))
                / (4.0 * h * h);
            assert!(
                (fd2 - hess[i * 3 + j]).abs() / hess[i * 3 + j].abs().max(1.0) < 1e-5,
                "({i},{j}): {fd2} vs {}",
                hess[i * 3 + j]
            );
        }
    }
}
