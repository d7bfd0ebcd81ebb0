//! The acceptance matrix: each criterion as a reusable function producing
//! verification reports, plus the suite runner that executes a named preset
//! and emits the report files.

use std::path::Path;
use std::time::Instant;

use waldenfels::barrier::{choose_constants, verify_barrier, BarrierInputs, BarrierSampling};
use waldenfels::field::{scalar_registry, ScalarCoeff};
use waldenfels::geometry::{self, DomainSpec};
use waldenfels::grid::{
    adjoint_spec, assemble, duality_check, duality_check_transpose, gauge_grid, minorization,
    principal_eigenpair, resolvent, resolvent_kernel, scheme_tolerance, semigroup,
    DiscreteOperator,
};
use waldenfels::mc::rng::StepRng;
use waldenfels::mc::{estimate_gauge, PathConfig};
use waldenfels::operator::{presets as op_presets, OperatorSpec, QuadratureConfig};
use waldenfels::report::{
    digest, summary_table, write_csv, write_jsonl, write_svg_curves, write_svg_heatmap,
    write_svg_histogram, Verdict, VerificationReport,
};
use waldenfels::verify::{
    check_bony, check_delta_bound, check_hopf, check_qhl_ia, check_qhl_ib, check_qhl_iia,
    check_qhl_iib, check_strong_max, check_weak_harnack, check_weak_max, gen_subsolution,
    gen_supersolution, mc_vs_grid, random_source,
};
use waldenfels::{LabError, Result};

use crate::presets::{self};

const PI: f64 = std::f64::consts::PI;

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Criterion 1: principal eigenpair reference on the 1D interval,
/// h = 1/200; λ within 1% of π²/8 and φ within 0.01 of cos(πx/2).
pub fn criterion_1_eigen(out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let op = op_presets::laplacian(1);
    let dom = presets::interval();
    let (grid, disc) = assemble(&op, &dom, 1.0 / 200.0)?;
    let pair = principal_eigenpair(&disc, 1e-10)?;
    let exact = PI * PI / 8.0;
    let lambda_rel = (pair.lambda / exact - 1.0).abs();
    let mut phi_err = 0.0_f64;
    let mut rows = Vec::new();
    for k in 0..grid.n_interior() {
        let x = grid.interior_position(k)[0];
        let reference = (PI * x / 2.0).cos();
        phi_err = phi_err.max((pair.phi[k] - reference).abs());
        rows.push(vec![x, pair.phi[k], reference]);
    }
    if let Some(dir) = out {
        write_csv(
            &dir.join("eigenfunction.csv"),
            &["x", "phi", "cos_reference"],
            &rows,
        )?;
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let phi: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let cosr: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        write_svg_curves(
            &dir.join("eigenfunction.svg"),
            "principal eigenfunction vs cos(pi x/2)",
            &xs,
            &[("phi", &phi), ("reference", &cosr)],
        )?;
    }
    Ok(vec![
        VerificationReport::from_margin(
            "eigen-lambda",
            digest(&["eigen", "1d", "h=1/200"]),
            0.01 - lambda_rel,
            0.0,
            "1% relative, pinned by the acceptance row",
        )
        .with_margin("lambda", pair.lambda)
        .with_detail("reference", format!("{exact}"))
        .with_detail("iterations", format!("{}", pair.iterations)),
        VerificationReport::from_margin(
            "eigen-phi",
            digest(&["eigen-phi", "1d"]),
            0.01 - phi_err,
            0.0,
            "sup-norm 0.01, pinned by the acceptance row",
        )
        .with_margin("phi_sup_error", phi_err),
    ])
}

/// Criterion 2: gauge closed form `w(0) = 1 − 1/cosh(√2)` for `c ≡ 1`,
/// grid within 1e−3 and Monte Carlo within `3 CI + 0.02`.
pub fn criterion_2_gauge(out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut op = op_presets::laplacian(1);
    op.coeffs.c = ScalarCoeff::constant(1.0);
    let dom = presets::interval();
    let (grid, disc) = assemble(&op, &dom, 1.0 / 200.0)?;
    let gg = gauge_grid(&disc)?;
    let exact_v = 1.0 / (2.0_f64.sqrt()).cosh();
    let exact_w = 1.0 - exact_v;
    let k0 = grid.interior_nodes_in(&DomainSpec::ball(vec![0.0], 1e-9))[0];
    let grid_err = (gg.w[k0] - exact_w).abs();

    let cfg = PathConfig {
        dt: 1e-4,
        t_max: 200.0,
        n_paths: 100_000,
        seed: 2,
        antithetic: false,
    };
    let est = estimate_gauge(&op, &dom, &[0.0], &cfg)?;
    let mc_err = (est.v.value - exact_v).abs();
    let budget = 3.0 * est.v.ci_95 + 0.02;

    if let Some(dir) = out {
        let rows: Vec<Vec<f64>> = (0..grid.n_interior())
            .map(|k| {
                let x = grid.interior_position(k)[0];
                let exact = 1.0 - (x * 2.0_f64.sqrt()).cosh() / (2.0_f64.sqrt()).cosh();
                vec![x, gg.w[k], exact]
            })
            .collect();
        write_csv(&dir.join("gauge.csv"), &["x", "w_grid", "w_exact"], &rows)?;
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let wg: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let we: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        write_svg_curves(
            &dir.join("gauge.svg"),
            "gauge w on (-1,1), c = 1",
            &xs,
            &[("w_grid", &wg), ("w_exact", &we)],
        )?;
    }
    Ok(vec![
        VerificationReport::from_margin(
            "gauge-grid",
            digest(&["gauge-grid", "c=1"]),
            1e-3 - grid_err,
            0.0,
            "1e-3 absolute, pinned by the acceptance row",
        )
        .with_margin("w0", gg.w[k0])
        .with_detail("exact", format!("{exact_w}"))
        .with_detail("cross_residual", format!("{:.3e}", gg.cross_residual)),
        VerificationReport::from_margin(
            "gauge-mc",
            digest(&["gauge-mc", "c=1", "n=1e5"]),
            budget - mc_err,
            0.0,
            "3 CI + 0.02, pinned by the acceptance row",
        )
        .with_margin("v_mc", est.v.value)
        .with_margin("ci_95", est.v.ci_95)
        .with_detail("horizon_fraction", format!("{}", est.v.horizon_fraction)),
    ])
}

/// Criterion 3: Feynman-Kac consistency between Monte Carlo and the grid
/// solve on three bundled scenarios.
pub fn criterion_3_feynman_kac(_out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let dom = presets::interval();
    let cfg = PathConfig {
        dt: 1e-4,
        t_max: 200.0,
        n_paths: 20_000,
        seed: 3,
        antithetic: false,
    };

    // pure diffusion: f = 1, g = 0, u(0) = 1
    {
        let op = op_presets::laplacian(1);
        let (_g, disc) = assemble(&op, &dom, 0.005)?;
        let tol_grid = scheme_tolerance(&op, &dom, 0.01, 1.0)? + 2.0 * cfg.dt.sqrt();
        let rep = mc_vs_grid(&op, &dom, &disc, &|_| 1.0, &|_| 0.0, &[0.0], &cfg, tol_grid)?;
        reports.push(rename(rep, "fk-pure-diffusion"));
    }
    // drifted diffusion: f = 1, g = 0
    {
        let op = OperatorSpec {
            coeffs: waldenfels::operator::CoefficientField::new(
                1,
                waldenfels::field::MatrixCoeff::identity(1),
                waldenfels::field::VectorCoeff::constant(vec![0.5]),
                ScalarCoeff::constant(0.0),
            ),
            kernel: waldenfels::operator::LevyKernelSpec::Zero,
        };
        let (_g, disc) = assemble(&op, &dom, 0.005)?;
        let tol_grid = scheme_tolerance(&op, &dom, 0.01, 1.0)? + 2.0 * cfg.dt.sqrt();
        let rep = mc_vs_grid(&op, &dom, &disc, &|_| 1.0, &|_| 0.0, &[0.2], &cfg, tol_grid)?;
        reports.push(rename(rep, "fk-drifted"));
    }
    // two-point jump kernel: f = 0, smooth exterior data, gauge weight c = 1
    {
        let mut op = op_presets::two_point_jump(1, 0.5, 1.0);
        op.coeffs.c = ScalarCoeff::constant(1.0);
        let (_g, disc) = assemble(&op, &dom, 0.005)?;
        let tol_grid = scheme_tolerance(&op, &dom, 0.01, 1.0)? + 2.0 * cfg.dt.sqrt();
        let g_fn = |x: &[f64]| 0.5 + 0.25 * x[0] * x[0];
        let rep = mc_vs_grid(&op, &dom, &disc, &|_| 0.0, &g_fn, &[0.3], &cfg, tol_grid)?;
        reports.push(rename(rep, "fk-two-point"));
    }
    Ok(reports)
}

fn rename(mut rep: VerificationReport, name: &str) -> VerificationReport {
    rep.check = name.to_string();
    rep
}

/// Criterion 4: discrete weak maximum principle over 200 random certified
/// subsolutions per bundled operator preset.
pub fn criterion_4_weak_max(out: Option<&Path>, cases: usize) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for bundle in presets::operator_bundles() {
        let (_grid, disc) = assemble(&bundle.operator, &bundle.domain, bundle.h)?;
        let solver = disc.factor(0.0)?;
        let mut margins = Vec::new();
        for seed in 0..cases as u64 {
            let f = random_source(&disc, seed, 2.0);
            let mut rng = StepRng::new(seed, 77, 0);
            let g: Vec<f64> = (0..disc.n_exterior())
                .map(|_| 2.0 * rng.uniform() - 1.0)
                .collect();
            let case = gen_subsolution(&disc, &solver, &f, &g, seed)?;
            let mut rep = check_weak_max(&case, &disc, 1e-9);
            rep.check = format!("weak-max-{}", bundle.name);
            rep = rep.with_detail("seed", format!("{seed}"));
            margins.push(rep.margin());
            reports.push(rep);
        }
        if let Some(dir) = out {
            write_svg_histogram(
                &dir.join(format!("weak-max-margins-{}.svg", bundle.name)),
                &format!("weak maximum margins, {}", bundle.name),
                &margins,
                24,
            )?;
            write_csv(
                &dir.join(format!("weak-max-margins-{}.csv", bundle.name)),
                &["seed", "margin"],
                &margins
                    .iter()
                    .enumerate()
                    .map(|(i, m)| vec![i as f64, *m])
                    .collect::<Vec<_>>(),
            )?;
        }
    }
    Ok(reports)
}

/// Criterion 5: barrier constant selection and verification at `K = 1` for
/// the pure-diffusion (1D and 2D) and finite-activity (1D) presets.
pub fn criterion_5_barrier(out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let scenarios: Vec<(&str, OperatorSpec, Vec<f64>)> = vec![
        ("barrier-laplacian-1d", op_presets::laplacian(1), vec![0.0]),
        (
            "barrier-laplacian-2d",
            op_presets::laplacian(2),
            vec![0.0, 0.0],
        ),
        (
            "barrier-two-point-1d",
            op_presets::two_point_jump(1, 0.5, 1.0),
            vec![0.0],
        ),
    ];
    for (name, op, ybar) in scenarios {
        let inputs = BarrierInputs::from_operator(&op, 1.0);
        let sel = choose_constants(&inputs, 1.0)?;
        let params = sel.params(ybar, sel.r0)?;
        let sampling = BarrierSampling::default();
        let v = verify_barrier(&op, &params, &sampling, &quad())?;
        if let Some(dir) = out {
            let rows: Vec<Vec<f64>> = v
                .samples
                .iter()
                .map(|(x, m)| {
                    let mut r = x.clone();
                    r.push(*m);
                    r
                })
                .collect();
            let mut header: Vec<&str> = ["x1", "x2", "x3"][..op.dim()].to_vec();
            header.push("margin");
            write_csv(&dir.join(format!("{name}.csv")), &header, &rows)?;
            if op.dim() >= 2 {
                let pts: Vec<(f64, f64, f64)> =
                    v.samples.iter().map(|(x, m)| (x[0], x[1], *m)).collect();
                write_svg_heatmap(
                    &dir.join(format!("{name}.svg")),
                    &format!("(A - c) eta over V*, {name}"),
                    &pts,
                )?;
            } else {
                let xs: Vec<f64> = v.samples.iter().map(|(x, _)| x[0]).collect();
                let ms: Vec<f64> = v.samples.iter().map(|(_, m)| *m).collect();
                write_svg_curves(
                    &dir.join(format!("{name}.svg")),
                    &format!("(A - c) eta over V*, {name}"),
                    &xs,
                    &[("margin", &ms)],
                )?;
            }
        }
        reports.push(
            VerificationReport::from_margin(
                name,
                digest(&[name, "K=1"]),
                v.margin - 1.0,
                1e-9,
                "margin >= K = 1, pinned by the acceptance row",
            )
            .with_margin("barrier_margin", v.margin)
            .with_detail("r0", format!("{:.6e}", sel.r0))
            .with_detail("alpha0", format!("{:.6e}", sel.alpha0))
            .with_detail("gamma_star", format!("{}", sel.gamma_star)),
        );
    }
    Ok(reports)
}

/// Criterion 6: the Hopf inequality on the 2D ball reference (closed-form
/// boundary slope 2) plus random drifted-diffusion cases.
pub fn criterion_6_hopf(out: Option<&Path>, cases: usize) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();

    // reference: u = |x|² − 1 on Ball(0,1), (1/2)Δ, d = 2
    {
        let op = op_presets::laplacian(2);
        let dom = presets::disc();
        let (_g, disc) = assemble(&op, &dom, 1.0 / 32.0)?;
        let solver = disc.factor(0.0)?;
        let f = vec![2.0; disc.n_interior()];
        let g: Vec<f64> = (0..disc.n_exterior())
            .map(|k| {
                let x = disc.grid.exterior_position(k);
                x[0] * x[0] + x[1] * x[1] - 1.0
            })
            .collect();
        let case = gen_subsolution(&disc, &solver, &f, &g, 0)?;
        let sel = choose_constants(&BarrierInputs::from_operator(&op, 1.0), 1.0)?;
        let mut rep = check_hopf(&case, &disc, &dom, &sel, 1e-6);
        rep.check = "hopf-ball-reference".into();
        let lnd = rep
            .margins
            .iter()
            .find(|(n, _)| n == "lower_normal_derivative")
            .map(|(_, v)| *v)
            .unwrap_or(f64::NAN);
        rep = rep.with_detail("closed_form_lhs", "2");
        if (lnd - 2.0).abs() > 0.05 {
            rep.verdict = Verdict::Fail;
            rep = rep.with_detail("lhs_check", format!("lnd {lnd} drifted from 2"));
        }
        reports.push(rep);
    }

    // random drifted diffusions on the interval
    let dom = presets::interval();
    let mut margins = Vec::new();
    for seed in 0..cases as u64 {
        let mut rng = StepRng::new(seed, 600, 0);
        let b = 1.6 * rng.uniform() - 0.8;
        let op = OperatorSpec {
            coeffs: waldenfels::operator::CoefficientField::new(
                1,
                waldenfels::field::MatrixCoeff::identity(1),
                waldenfels::field::VectorCoeff::constant(vec![b]),
                ScalarCoeff::constant(0.0),
            ),
            kernel: waldenfels::operator::LevyKernelSpec::Zero,
        };
        let (_g, disc) = assemble(&op, &dom, 0.01)?;
        let solver = disc.factor(0.0)?;
        let f = random_source(&disc, seed + 1000, 1.0);
        let g = vec![0.0; disc.n_exterior()];
        let case = gen_subsolution(&disc, &solver, &f, &g, seed)?;
        let sel = choose_constants(&BarrierInputs::from_operator(&op, 1.0), 1.0)?;
        let mut rep = check_hopf(&case, &disc, &dom, &sel, 1e-6);
        rep.check = "hopf-drifted".into();
        rep = rep
            .with_detail("seed", format!("{seed}"))
            .with_detail("b", format!("{b}"));
        margins.push(rep.margin());
        reports.push(rep);
    }
    if let Some(dir) = out {
        write_svg_histogram(&dir.join("hopf-margins.svg"), "Hopf margins", &margins, 20)?;
        write_csv(
            &dir.join("hopf-margins.csv"),
            &["seed", "margin"],
            &margins
                .iter()
                .enumerate()
                .map(|(i, m)| vec![i as f64, *m])
                .collect::<Vec<_>>(),
        )?;
    }
    Ok(reports)
}

struct QhlContext {
    op: OperatorSpec,
    dom: DomainSpec,
    disc: DiscreteOperator,
    solver: waldenfels::grid::DirectSolver,
    eigen: waldenfels::grid::EigenPair,
    minor: waldenfels::grid::Minorization,
    sel: waldenfels::barrier::ConstantSelection,
    gauge_w: Vec<f64>,
}

fn qhl_context(dim: usize, h: f64, c: ScalarCoeff, lambda: f64) -> Result<QhlContext> {
    let mut op = op_presets::laplacian(dim);
    op.coeffs.c = c;
    let dom = if dim == 1 {
        presets::interval()
    } else {
        presets::disc()
    };
    let (_g, disc) = assemble(&op, &dom, h)?;
    let solver = disc.factor(0.0)?;
    // killing-free eigenpair on the same lattice
    let (_g2, disc_free) = assemble(&op_presets::laplacian(dim), &dom, h)?;
    let eigen = principal_eigenpair(&disc_free, 1e-10)?;
    let kern = resolvent_kernel(&disc, 1.0)?;
    let minor = minorization(&kern, disc.cell_volume(), disc.n_interior() / 2)?;
    let sel = choose_constants(&BarrierInputs::from_operator(&op, lambda), 1.0)?;
    let gauge_w = gauge_grid(&disc)?.w;
    Ok(QhlContext {
        op,
        dom,
        disc,
        solver,
        eigen,
        minor,
        sel,
        gauge_w,
    })
}

/// Criterion 7: the four quantitative Hopf suites on the 1D and 2D ball
/// presets; `c ≡ 1` for I.A/II.A/II.B and compactly supported `c` for I.B.
pub fn criterion_7_qhl(out: Option<&Path>, cases: usize) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let mut all_margins: Vec<f64> = Vec::new();
    for (dim, h) in [(1usize, 0.01), (2usize, 1.0 / 24.0)] {
        let ctx_const = qhl_context(dim, h, ScalarCoeff::constant(1.0), 1.0)?;
        let ctx_bump = qhl_context(dim, h, scalar_registry("bump-half", dim)?, 1.0)?;
        for seed in 0..cases as u64 {
            let f = random_source(&ctx_const.disc, seed + 7000, 0.5);
            let g = vec![1.0; ctx_const.disc.n_exterior()];
            let case = gen_subsolution(&ctx_const.disc, &ctx_const.solver, &f, &g, seed)?;

            let mut rep = check_qhl_ia(
                &case,
                &ctx_const.disc,
                &ctx_const.op,
                &ctx_const.dom,
                &ctx_const.sel,
                &quad(),
                1e-8,
            );
            rep.check = format!("qhl-IA-{dim}d");
            all_margins.push(rep.margin());
            reports.push(rep.with_detail("seed", format!("{seed}")));

            let mut rep = check_qhl_iia(
                &case,
                &ctx_const.disc,
                &ctx_const.eigen,
                &ctx_const.minor,
                1e-8,
            );
            rep.check = format!("qhl-IIA-{dim}d");
            all_margins.push(rep.margin());
            reports.push(rep.with_detail("seed", format!("{seed}")));

            let mut rep = check_qhl_iib(&case, &ctx_const.disc, &ctx_const.eigen, 1e-8);
            rep.check = format!("qhl-IIB-{dim}d");
            all_margins.push(rep.margin());
            reports.push(rep.with_detail("seed", format!("{seed}")));

            let fb = random_source(&ctx_bump.disc, seed + 9000, 0.5);
            let gb = vec![1.0; ctx_bump.disc.n_exterior()];
            let case_b = gen_subsolution(&ctx_bump.disc, &ctx_bump.solver, &fb, &gb, seed)?;
            let mut rep = check_qhl_ib(
                &case_b,
                &ctx_bump.disc,
                &ctx_bump.dom,
                &ctx_bump.sel,
                &ctx_bump.gauge_w,
                1e-8,
            );
            rep.check = format!("qhl-IB-{dim}d");
            all_margins.push(rep.margin());
            reports.push(rep.with_detail("seed", format!("{seed}")));
        }
    }
    if let Some(dir) = out {
        let finite: Vec<f64> = all_margins
            .iter()
            .cloned()
            .filter(|m| m.is_finite())
            .collect();
        write_svg_histogram(
            &dir.join("qhl-margins.svg"),
            "quantitative Hopf margins",
            &finite,
            24,
        )?;
    }
    Ok(reports)
}

/// Criterion 8: the `δ_D` lower bound on the 1D reference (`a_fit ≈ 1`) and
/// its documented degradation on the cusp domain.
pub fn criterion_8_delta(out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let op = op_presets::laplacian(1);
    let dom = presets::interval();
    let (_g, disc) = assemble(&op, &dom, 0.01)?;
    let rep = check_delta_bound(&disc, &dom, &vec![1.0; disc.n_interior()], 0.0, 0.9)?;
    reports.push(rename(rep, "delta-bound-1d"));

    // cusp negative control: a_fit decays toward zero under refinement
    let cusp = presets::cusp_domain();
    let op2 = op_presets::laplacian(2);
    let mut fits = Vec::new();
    for h in [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0] {
        let (_g, disc) = assemble(&op2, &cusp, h)?;
        let rep = check_delta_bound(&disc, &cusp, &vec![1.0; disc.n_interior()], 0.0, 0.0)?;
        let a_fit = rep
            .margins
            .iter()
            .find(|(n, _)| n == "a_fit")
            .map(|(_, v)| *v)
            .unwrap_or(f64::NAN);
        fits.push((h, a_fit));
    }
    let degraded =
        fits.windows(2).all(|w| w[1].1 < w[0].1) && fits.last().unwrap().1 < 0.5 * fits[0].1;
    let mut rep = VerificationReport::named(
        "delta-bound-cusp-degradation",
        digest(&["delta-cusp"]),
        if degraded {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .with_detail(
        "expected",
        "a_fit decays toward 0 under refinement: the uniform two-sided ball condition fails \
         at the cusp, so no uniform delta lower bound exists",
    );
    for (h, a) in &fits {
        rep = rep.with_margin(format!("a_fit_h_{h:.4}"), *a);
    }
    reports.push(rep);
    if let Some(dir) = out {
        write_csv(
            &dir.join("delta-cusp.csv"),
            &["h", "a_fit"],
            &fits.iter().map(|(h, a)| vec![*h, *a]).collect::<Vec<_>>(),
        )?;
    }
    Ok(reports)
}

/// Criterion 9: weak Harnack over random nonnegative supersolutions on
/// `V = D_{1/4}`.
pub fn criterion_9_weak_harnack(
    out: Option<&Path>,
    cases: usize,
) -> Result<Vec<VerificationReport>> {
    let mut op = op_presets::laplacian(1);
    op.coeffs.c = scalar_registry("bump-half", 1)?;
    let dom = presets::interval();
    let (_g, disc) = assemble(&op, &dom, 0.02)?;
    let solver = disc.factor(0.0)?;
    let kern = resolvent_kernel(&disc, 1.0)?;
    let minor = minorization(&kern, disc.cell_volume(), disc.n_interior() / 2)?;
    let v_region = geometry::shrink(&dom, 0.25)
        .ok_or_else(|| LabError::Geometry("D_{1/4} is empty".into()))?;
    let mut reports = Vec::new();
    let mut margins = Vec::new();
    for seed in 0..cases as u64 {
        let f = random_source(&disc, seed + 5000, 1.5);
        let mut rng = StepRng::new(seed, 12, 0);
        let g: Vec<f64> = (0..disc.n_exterior()).map(|_| rng.uniform()).collect();
        let case = gen_supersolution(&disc, &solver, &f, &g, seed)?;
        let mut rep = check_weak_harnack(&case, &disc, &v_region, &minor, 1e-9);
        rep.check = "weak-harnack".into();
        margins.push(rep.margin());
        reports.push(rep.with_detail("seed", format!("{seed}")));
    }
    if let Some(dir) = out {
        write_svg_histogram(
            &dir.join("weak-harnack-margins.svg"),
            "weak Harnack margins",
            &margins,
            24,
        )?;
    }
    Ok(reports)
}

/// Criterion 10: structural identities — resolvent identity, eigen
/// identity through the semigroup, minorization slack, transpose duality,
/// and the first-order decay of the analytic-adjoint duality residual.
pub fn criterion_10_structural(_out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();

    // resolvent identity on the jump preset
    {
        let op = op_presets::two_point_jump(1, 0.5, 1.0);
        let dom = presets::interval();
        let (_g, disc) = assemble(&op, &dom, 0.01)?;
        let n = disc.n_interior();
        let g = vec![0.0; disc.n_exterior()];
        let mut worst = 0.0_f64;
        for (i, (alpha, beta)) in [(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)].iter().enumerate() {
            let mut rng = StepRng::new(10 + i as u64, 0, 0);
            let f: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            let ra = resolvent(&disc, *alpha, &f, &g)?;
            let rb = resolvent(&disc, *beta, &f, &g)?;
            let rarb = resolvent(&disc, *alpha, &rb, &g)?;
            for i in 0..n {
                worst = worst.max((ra[i] - rb[i] - (beta - alpha) * rarb[i]).abs());
            }
        }
        reports.push(
            VerificationReport::from_margin(
                "resolvent-identity",
                digest(&["res-id"]),
                1e-8 - worst,
                0.0,
                "1e-8 absolute, pinned by the acceptance row",
            )
            .with_margin("residual", worst),
        );
    }

    // eigen identity through the semigroup
    {
        let op = op_presets::laplacian(1);
        let dom = presets::interval();
        let (_g, disc) = assemble(&op, &dom, 1.0 / 200.0)?;
        let pair = principal_eigenpair(&disc, 1e-10)?;
        let g0 = vec![0.0; disc.n_exterior()];
        let mut worst = 0.0_f64;
        for t in [0.1, 1.0] {
            let pt = semigroup(&disc, t, &pair.phi, &g0)?;
            let decay = (-pair.lambda * t).exp();
            for k in 0..disc.n_interior() {
                worst = worst.max((pt[k] - decay * pair.phi[k]).abs());
            }
        }
        reports.push(
            VerificationReport::from_margin(
                "eigen-identity",
                digest(&["eigen-id"]),
                1e-6 - worst,
                0.0,
                "1e-6 sup-norm, pinned by the acceptance row",
            )
            .with_margin("residual", worst),
        );
    }

    // minorization entrywise nonnegativity
    {
        let mut op = op_presets::laplacian(1);
        op.coeffs.c = ScalarCoeff::constant(1.0);
        let dom = presets::interval();
        let (_g, disc) = assemble(&op, &dom, 0.02)?;
        let kern = resolvent_kernel(&disc, 1.0)?;
        let minor = minorization(&kern, disc.cell_volume(), disc.n_interior() / 2)?;
        reports.push(VerificationReport::from_margin(
            "minorization-slack",
            digest(&["minorization"]),
            minor.min_slack,
            1e-12,
            "entrywise r >= psi_bar phi_bar' - 1e-12, pinned by the acceptance row",
        ));
    }

    // duality: transpose-exact and analytic O(h)
    {
        let op = op_presets::laplacian(1);
        let dom = presets::interval();
        let (_g, disc) = assemble(&op, &dom, 0.01)?;
        let worst = duality_check_transpose(&disc, 1.0, 8, 44)?;
        reports.push(
            VerificationReport::from_margin(
                "duality-transpose",
                digest(&["duality-T"]),
                1e-10 - worst,
                0.0,
                "1e-10 relative, pinned by the acceptance row",
            )
            .with_margin("residual", worst),
        );

        let opv = OperatorSpec {
            coeffs: waldenfels::operator::CoefficientField::new(
                1,
                waldenfels::field::MatrixCoeff::identity(1),
                waldenfels::field::vector_registry("linear-x", 1)?,
                ScalarCoeff::constant(0.0),
            ),
            kernel: waldenfels::operator::LevyKernelSpec::Zero,
        };
        let hat = adjoint_spec(&opv)?;
        let mut residuals = Vec::new();
        for h in [0.04, 0.02] {
            let (_ga, d1) = assemble(&opv, &dom, h)?;
            let (_gb, d2) = assemble(&hat, &dom, h)?;
            residuals.push(duality_check(&d1, &d2, 1.0, 4, 7)?);
        }
        let decayed = residuals[1] < 0.75 * residuals[0];
        reports.push(
            VerificationReport::named(
                "duality-analytic-adjoint",
                digest(&["duality-analytic"]),
                if decayed {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
            )
            .with_margin("residual_h", residuals[0])
            .with_margin("residual_h_half", residuals[1])
            .with_detail("expected", "O(h) decay over one refinement"),
        );
    }
    Ok(reports)
}

/// Criterion 11 (negative controls): every checker must FAIL on a
/// hand-built violating input. Each control is wrapped so the emitted
/// report PASSES exactly when the inner checker failed.
pub fn criterion_11_negative_controls(_out: Option<&Path>) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    let mut op = op_presets::laplacian(1);
    op.coeffs.c = ScalarCoeff::constant(1.0);
    let dom = presets::interval();
    let (_g, disc) = assemble(&op, &dom, 0.02)?;
    let solver = disc.factor(0.0)?;
    let n = disc.n_interior();
    let g1 = vec![1.0; disc.n_exterior()];

    let forged = |seed: u64| -> Result<waldenfels::verify::SolutionCase> {
        let f = random_source(&disc, seed, 1.0);
        let mut case = gen_subsolution(&disc, &solver, &f, &g1, seed)?;
        let mid = case.u.len() / 2;
        case.u[mid] += 1.0; // violates the certified inequality
        Ok(case)
    };

    let mut wrap = |name: &str, inner: VerificationReport| {
        let failed = inner.verdict == Verdict::Fail;
        reports.push(
            VerificationReport::named(
                format!("negative-control-{name}"),
                inner.inputs_digest.clone(),
                if failed { Verdict::Pass } else { Verdict::Fail },
            )
            .with_detail("inner_verdict", format!("{:?}", inner.verdict)),
        );
    };

    wrap("weak-max", check_weak_max(&forged(1)?, &disc, 1e-9));
    wrap("strong-max", check_strong_max(&forged(2)?, &disc, 1e-8));
    {
        // dishonest argmax claim for the Bony check
        let mut u = vec![0.0; n];
        for k in 0..n {
            let x = disc.grid.interior_position(k);
            u[k] = x[0] * x[0];
        }
        let ge: Vec<f64> = (0..disc.n_exterior())
            .map(|k| {
                let x = disc.grid.exterior_position(k);
                x[0] * x[0]
            })
            .collect();
        let center = disc
            .grid
            .interior_nodes_in(&DomainSpec::ball(vec![0.0], 1e-9))[0];
        wrap(
            "bony",
            check_bony(&u, &ge, &disc, &op, center, &[0.5, 0.25], 1e-9),
        );
    }
    {
        let sel = choose_constants(&BarrierInputs::from_operator(&op, 1.0), 1.0)?;
        wrap("hopf", check_hopf(&forged(3)?, &disc, &dom, &sel, 1e-6));
        wrap(
            "qhl-ia",
            check_qhl_ia(&forged(4)?, &disc, &op, &dom, &sel, &quad(), 1e-8),
        );
        let gauge_w = gauge_grid(&disc)?.w;
        wrap(
            "qhl-ib",
            check_qhl_ib(&forged(5)?, &disc, &dom, &sel, &gauge_w, 1e-8),
        );
        let (_g2, disc_free) = assemble(&op_presets::laplacian(1), &dom, 0.02)?;
        let eigen = principal_eigenpair(&disc_free, 1e-10)?;
        let kern = resolvent_kernel(&disc, 1.0)?;
        let minor = minorization(&kern, disc.cell_volume(), n / 2)?;
        wrap(
            "qhl-iia",
            check_qhl_iia(&forged(6)?, &disc, &eigen, &minor, 1e-8),
        );
        wrap("qhl-iib", check_qhl_iib(&forged(7)?, &disc, &eigen, 1e-8));

        // weak Harnack: forged nonnegativity
        let f = random_source(&disc, 8, 1.0);
        let mut sup_case = gen_supersolution(&disc, &solver, &f, &vec![0.5; disc.n_exterior()], 8)?;
        sup_case.u[n / 3] = -0.5;
        let v_region = geometry::shrink(&dom, 0.25).unwrap();
        wrap(
            "weak-harnack",
            check_weak_harnack(&sup_case, &disc, &v_region, &minor, 1e-9),
        );

        // barrier verification with sabotaged constants: margin below K
        let bad_params = waldenfels::barrier::BarrierParams {
            ybar: vec![0.0],
            r: 0.5,
            alpha: sel.gamma_star / (0.5 * 0.5) / 1e6,
            gamma_star: sel.gamma_star / 1e6,
            r0: 0.5,
            m: sel.m,
            k_target: 1.0,
        };
        let v = verify_barrier(&op, &bad_params, &BarrierSampling::default(), &quad())?;
        wrap(
            "barrier",
            VerificationReport::from_margin(
                "barrier-sabotaged",
                digest(&["barrier-neg"]),
                v.margin - 1.0,
                1e-9,
                "sabotaged alpha must miss K",
            ),
        );

        // delta bound at the cusp with the 1D pass level: genuine FAIL
        let cusp = presets::cusp_domain();
        let (_gc, disc_c) = assemble(&op_presets::laplacian(2), &cusp, 1.0 / 48.0)?;
        wrap(
            "delta-bound",
            check_delta_bound(&disc_c, &cusp, &vec![1.0; disc_c.n_interior()], 0.0, 0.9)?,
        );

        // Monte Carlo against the wrong grid problem
        let cfg = PathConfig {
            dt: 1e-3,
            t_max: 200.0,
            n_paths: 2000,
            seed: 77,
            antithetic: false,
        };
        let op_drift = OperatorSpec {
            coeffs: waldenfels::operator::CoefficientField::new(
                1,
                waldenfels::field::MatrixCoeff::identity(1),
                waldenfels::field::VectorCoeff::constant(vec![1.5]),
                ScalarCoeff::constant(0.0),
            ),
            kernel: waldenfels::operator::LevyKernelSpec::Zero,
        };
        let (_gl, disc_lap) = assemble(&op_presets::laplacian(1), &dom, 0.01)?;
        wrap(
            "mc-vs-grid",
            mc_vs_grid(
                &op_drift,
                &dom,
                &disc_lap,
                &|_| 1.0,
                &|_| 0.0,
                &[0.0],
                &cfg,
                0.02,
            )?,
        );
    }
    Ok(reports)
}

/// Outcome of one criterion run.
pub struct CriterionOutcome {
    pub name: &'static str,
    pub reports: Vec<VerificationReport>,
    pub elapsed_s: f64,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passing())
    }
}

fn timed(
    name: &'static str,
    f: impl FnOnce() -> Result<Vec<VerificationReport>>,
) -> Result<CriterionOutcome> {
    let t0 = Instant::now();
    let reports = f()?;
    Ok(CriterionOutcome {
        name,
        reports,
        elapsed_s: t0.elapsed().as_secs_f64(),
    })
}

/// Runs a named suite, writing `report.jsonl`, `summary.txt` and
/// `metadata.json` (timestamps live only in the metadata file) under
/// `out_dir`. Returns the per-criterion outcomes.
pub fn run_suite(name: &str, out_dir: &Path) -> Result<Vec<CriterionOutcome>> {
    std::fs::create_dir_all(out_dir)?;
    let out = Some(out_dir);
    let outcomes: Vec<CriterionOutcome> = match name {
        "paper-core" => vec![
            timed("1-eigen", || criterion_1_eigen(out))?,
            timed("2-gauge", || criterion_2_gauge(out))?,
            timed("3-feynman-kac", || criterion_3_feynman_kac(out))?,
            timed("4-weak-max", || criterion_4_weak_max(out, 200))?,
            timed("5-barrier", || criterion_5_barrier(out))?,
            timed("6-hopf", || criterion_6_hopf(out, 50))?,
            timed("7-qhl", || criterion_7_qhl(out, 50))?,
            timed("8-delta", || criterion_8_delta(out))?,
            timed("9-weak-harnack", || criterion_9_weak_harnack(out, 200))?,
            timed("10-structural", || criterion_10_structural(out))?,
            timed("11-negative-controls", || {
                criterion_11_negative_controls(out)
            })?,
        ],
        "smoke" => vec![
            timed("1-eigen", || criterion_1_eigen(out))?,
            timed("4-weak-max", || criterion_4_weak_max(out, 25))?,
            timed("8-delta", || criterion_8_delta(out))?,
            timed("10-structural", || criterion_10_structural(out))?,
        ],
        other => {
            return Err(LabError::Contract(format!(
                "unknown suite preset '{other}'; valid presets: paper-core, smoke"
            )))
        }
    };

    let all: Vec<VerificationReport> = outcomes
        .iter()
        .flat_map(|o| o.reports.iter().cloned())
        .collect();
    write_jsonl(&out_dir.join("report.jsonl"), &all)?;
    let mut summary = String::new();
    for o in &outcomes {
        let pass = o.reports.iter().filter(|r| r.passing()).count();
        summary.push_str(&format!(
            "criterion {:<22} {:>4}/{:<4} passing\n",
            o.name,
            pass,
            o.reports.len()
        ));
    }
    summary.push('\n');
    summary.push_str(&summary_table(&all));
    std::fs::write(out_dir.join("summary.txt"), &summary)?;
    let meta = format!(
        "{{\n  \"suite\": \"{name}\",\n  \"wall_seconds\": {:?},\n  \"unix_time\": {}\n}}\n",
        outcomes
            .iter()
            .map(|o| (o.name, o.elapsed_s))
            .collect::<Vec<_>>(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    );
    std::fs::write(out_dir.join("metadata.json"), meta)?;
    Ok(outcomes)
}
