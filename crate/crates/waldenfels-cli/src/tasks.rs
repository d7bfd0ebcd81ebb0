//! Task dispatch for `run`: executes one scenario and emits its report and
//! artifacts under the configured output directory.

use std::path::Path;

use waldenfels::barrier::{choose_constants, verify_barrier, BarrierInputs, BarrierSampling};
use waldenfels::geometry::{self, DomainSpec};
use waldenfels::grid::{
    assemble, gauge_grid, minorization, principal_eigenpair, resolvent_kernel, DiscreteOperator,
};
use waldenfels::mc::rng::StepRng;
use waldenfels::mc::{
    estimate_gauge, estimate_mean_exit, estimate_survival, simulate_path, PathConfig,
};
use waldenfels::operator::{operator_bounds, QuadratureConfig, SamplingConfig};
use waldenfels::report::{
    digest, summary_table, write_csv, write_jsonl, write_svg_curves, write_svg_heatmap, Verdict,
    VerificationReport,
};
use waldenfels::verify::{
    check_bony, check_delta_bound, check_harnack_corollary, check_hopf, check_qhl_ia, check_qhl_ib,
    check_qhl_iia, check_qhl_iib, check_strong_max, check_weak_harnack, check_weak_max,
    gen_subsolution, gen_supersolution, mc_vs_grid, random_source,
};
use waldenfels::{LabError, Result};

use crate::config::ScenarioConfig;
use crate::suite;

fn path_config(cfg: &ScenarioConfig, lambda: f64) -> PathConfig {
    PathConfig {
        dt: cfg.dt,
        t_max: cfg
            .t_max
            .unwrap_or_else(|| PathConfig::default_t_max(&cfg.domain, lambda)),
        n_paths: cfg.n_paths,
        seed: cfg.seed,
        antithetic: cfg.antithetic,
    }
}

fn lambda_for(cfg: &ScenarioConfig) -> Result<f64> {
    if let Some(l) = cfg.lambda {
        return Ok(l);
    }
    let b = operator_bounds(&cfg.operator, &cfg.domain, &SamplingConfig::default())?;
    Ok(b.lambda_k)
}

struct GridSetup {
    disc: DiscreteOperator,
    solver: waldenfels::grid::DirectSolver,
}

fn grid_setup(cfg: &ScenarioConfig) -> Result<GridSetup> {
    let (_grid, disc) = assemble(&cfg.operator, &cfg.domain, cfg.h)?;
    let solver = disc.factor(0.0)?;
    Ok(GridSetup { disc, solver })
}

fn case_suite(
    cfg: &ScenarioConfig,
    setup: &GridSetup,
    ext_range: (f64, f64),
) -> Result<Vec<waldenfels::verify::SolutionCase>> {
    let mut out = Vec::with_capacity(cfg.seeds);
    for seed in 0..cfg.seeds as u64 {
        let f = random_source(&setup.disc, seed.wrapping_add(cfg.seed), 2.0);
        let mut rng = StepRng::new(cfg.seed, seed, 0);
        let g: Vec<f64> = (0..setup.disc.n_exterior())
            .map(|_| ext_range.0 + (ext_range.1 - ext_range.0) * rng.uniform())
            .collect();
        out.push(gen_subsolution(&setup.disc, &setup.solver, &f, &g, seed)?);
    }
    Ok(out)
}

/// Executes the configured task; returns the reports it emitted.
pub fn execute(cfg: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let out = &cfg.out_dir;
    std::fs::create_dir_all(out)?;
    let quadrature = QuadratureConfig::default();
    let reports: Vec<VerificationReport> = match cfg.task.as_str() {
        "operator-check" => {
            let b = operator_bounds(&cfg.operator, &cfg.domain, &SamplingConfig::default())?;
            vec![VerificationReport::named(
                "operator-check",
                digest(&["operator-check"]),
                Verdict::Info,
            )
            .with_margin("lambda_K", b.lambda_k)
            .with_margin("M_A", b.m_a)
            .with_margin("N_star", b.n_star)
            .with_detail("samples", format!("{}", b.samples_used))]
        }
        "simulate" => run_simulate(cfg, out)?,
        "eigen" => run_eigen(cfg, out)?,
        "gauge" => run_gauge(cfg, out)?,
        "barrier" => {
            let lambda = lambda_for(cfg)?;
            let inputs = BarrierInputs::from_operator(&cfg.operator, lambda);
            let sel = choose_constants(&inputs, cfg.k_target)?;
            let params = sel.params(cfg.x0.clone(), sel.r0)?;
            let v = verify_barrier(
                &cfg.operator,
                &params,
                &BarrierSampling::default(),
                &quadrature,
            )?;
            let rows: Vec<Vec<f64>> = v
                .samples
                .iter()
                .map(|(x, m)| {
                    let mut r = x.clone();
                    r.push(*m);
                    r
                })
                .collect();
            let mut header: Vec<&str> = ["x1", "x2", "x3"][..cfg.operator.dim()].to_vec();
            header.push("margin");
            write_csv(&out.join("barrier-margins.csv"), &header, &rows)?;
            if cfg.operator.dim() >= 2 {
                let pts: Vec<(f64, f64, f64)> =
                    v.samples.iter().map(|(x, m)| (x[0], x[1], *m)).collect();
                write_svg_heatmap(&out.join("barrier-heat.svg"), "(A - c) eta over V*", &pts)?;
            }
            vec![VerificationReport::from_margin(
                "barrier",
                digest(&["barrier-task"]),
                v.margin - cfg.k_target,
                1e-9,
                "margin >= K",
            )
            .with_margin("barrier_margin", v.margin)
            .with_detail("r0", format!("{:.6e}", sel.r0))]
        }
        "verify-weak-max" => {
            let setup = grid_setup(cfg)?;
            case_suite(cfg, &setup, (-1.0, 1.0))?
                .iter()
                .map(|case| check_weak_max(case, &setup.disc, 1e-9))
                .collect()
        }
        "verify-strong-max" => {
            let setup = grid_setup(cfg)?;
            let mut reps = Vec::new();
            // constant case plus the randomized premise guard
            let ones = vec![1.0; setup.disc.n_exterior()];
            let z = vec![0.0; setup.disc.n_interior()];
            let c0 = gen_subsolution(&setup.disc, &setup.solver, &z, &ones, 0)?;
            reps.push(check_strong_max(&c0, &setup.disc, 1e-8));
            for case in case_suite(cfg, &setup, (0.0, 1.0))? {
                reps.push(check_strong_max(&case, &setup.disc, 1e-8));
            }
            reps
        }
        "verify-bony" => {
            let setup = grid_setup(cfg)?;
            let grid = &setup.disc.grid;
            let n = grid.n_interior();
            // concave reference field with an honest interior maximum
            let mut u = vec![0.0; n];
            for k in 0..n {
                let x = grid.interior_position(k);
                let r2: f64 = x.iter().zip(&cfg.x0).map(|(a, b)| (a - b) * (a - b)).sum();
                u[k] = -r2;
            }
            let g: Vec<f64> = (0..grid.n_exterior())
                .map(|k| {
                    let x = grid.exterior_position(k);
                    let r2: f64 = x.iter().zip(&cfg.x0).map(|(a, b)| (a - b) * (a - b)).sum();
                    -r2
                })
                .collect();
            let xhat = (0..n)
                .max_by(|a, b| u[*a].total_cmp(&u[*b]))
                .expect("nonempty grid");
            vec![check_bony(
                &u,
                &g,
                &setup.disc,
                &cfg.operator,
                xhat,
                &[0.5, 0.25, 0.1],
                1e-9,
            )]
        }
        "verify-hopf" => {
            let setup = grid_setup(cfg)?;
            let lambda = lambda_for(cfg)?;
            let sel = choose_constants(&BarrierInputs::from_operator(&cfg.operator, lambda), 1.0)?;
            let mut reps = Vec::new();
            for seed in 0..cfg.seeds as u64 {
                let f = random_source(&setup.disc, seed.wrapping_add(cfg.seed), 1.0);
                let g = vec![0.0; setup.disc.n_exterior()];
                let case = gen_subsolution(&setup.disc, &setup.solver, &f, &g, seed)?;
                reps.push(check_hopf(&case, &setup.disc, &cfg.domain, &sel, 1e-6));
            }
            reps
        }
        "verify-qhl-ia" | "verify-qhl-ib" | "verify-qhl-iia" | "verify-qhl-iib" => {
            run_qhl(cfg, &quadrature)?
        }
        "verify-delta-bound" => {
            let setup = grid_setup(cfg)?;
            let f = vec![1.0; setup.disc.n_interior()];
            vec![check_delta_bound(
                &setup.disc,
                &cfg.domain,
                &f,
                cfg.alpha,
                cfg.pass_level,
            )?]
        }
        "verify-weak-harnack" => {
            let setup = grid_setup(cfg)?;
            let kern = resolvent_kernel(&setup.disc, 1.0)?;
            let minor = minorization(&kern, setup.disc.cell_volume(), setup.disc.n_interior() / 2)?;
            let v_region = geometry::shrink(&cfg.domain, 0.25)
                .ok_or_else(|| LabError::Geometry("D_{1/4} is empty".into()))?;
            let mut reps = Vec::new();
            for seed in 0..cfg.seeds as u64 {
                let f = random_source(&setup.disc, seed.wrapping_add(cfg.seed), 1.5);
                let mut rng = StepRng::new(cfg.seed, seed, 1);
                let g: Vec<f64> = (0..setup.disc.n_exterior())
                    .map(|_| rng.uniform())
                    .collect();
                let case = gen_supersolution(&setup.disc, &setup.solver, &f, &g, seed)?;
                reps.push(check_weak_harnack(
                    &case,
                    &setup.disc,
                    &v_region,
                    &minor,
                    1e-9,
                ));
            }
            reps
        }
        "verify-harnack-corollary" => {
            let setup = grid_setup(cfg)?;
            // A-harmonic: f = 0 with nonnegative exterior data
            let z = vec![0.0; setup.disc.n_interior()];
            let mut rng = StepRng::new(cfg.seed, 0, 3);
            let g: Vec<f64> = (0..setup.disc.n_exterior())
                .map(|_| 0.5 + rng.uniform())
                .collect();
            let case = gen_subsolution(&setup.disc, &setup.solver, &z, &g, cfg.seed)?;
            let x0_node = setup
                .disc
                .grid
                .interior_nodes_in(&DomainSpec::ball(cfg.x0.clone(), 2.0 * cfg.h))
                .first()
                .cloned()
                .ok_or_else(|| LabError::Geometry("x0 captured no node".into()))?;
            vec![check_harnack_corollary(
                &case,
                &setup.disc,
                &cfg.domain,
                x0_node,
            )]
        }
        "verify-mc-vs-grid" => {
            let setup = grid_setup(cfg)?;
            let lambda = lambda_for(cfg)?;
            let mc_cfg = path_config(cfg, lambda);
            let tol_grid =
                waldenfels::grid::scheme_tolerance(&cfg.operator, &cfg.domain, cfg.h * 2.0, 1.0)?
                    + 2.0 * cfg.dt.sqrt();
            vec![mc_vs_grid(
                &cfg.operator,
                &cfg.domain,
                &setup.disc,
                &|_| 1.0,
                &|_| 0.0,
                &cfg.x0,
                &mc_cfg,
                tol_grid,
            )?]
        }
        "verify-structural" => suite::criterion_10_structural(Some(out))?,
        "verify-negative-controls" => suite::criterion_11_negative_controls(Some(out))?,
        "suite" => {
            let outcomes = suite::run_suite(&cfg.suite, out)?;
            return Ok(outcomes.into_iter().flat_map(|o| o.reports).collect());
        }
        "report" => {
            let text = std::fs::read_to_string(out.join("report.jsonl")).map_err(|e| {
                LabError::Contract(format!("no report.jsonl under {}: {e}", out.display()))
            })?;
            let reports: Vec<VerificationReport> = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| serde_json::from_str(l).map_err(|e| LabError::Contract(e.to_string())))
                .collect::<Result<_>>()?;
            println!("{}", summary_table(&reports));
            return Ok(reports);
        }
        other => {
            return Err(LabError::Contract(format!(
                "task '{other}' is not implemented"
            )));
        }
    };
    write_jsonl(&out.join("report.jsonl"), &reports)?;
    std::fs::write(out.join("summary.txt"), summary_table(&reports))?;
    Ok(reports)
}

fn run_simulate(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<VerificationReport>> {
    let lambda = lambda_for(cfg)?;
    let mc_cfg = path_config(cfg, lambda);
    let mean = estimate_mean_exit(&cfg.operator, &cfg.domain, &cfg.x0, &mc_cfg)?;
    let surv = estimate_survival(&cfg.operator, &cfg.domain, &cfg.x0, &cfg.t_grid, &mc_cfg)?;
    let rows: Vec<Vec<f64>> = surv.iter().map(|(t, p, ci)| vec![*t, *p, *ci]).collect();
    write_csv(
        &out.join("survival.csv"),
        &["t", "p_survive", "ci_95"],
        &rows,
    )?;
    let ts: Vec<f64> = surv.iter().map(|r| r.0).collect();
    let ps: Vec<f64> = surv.iter().map(|r| r.1).collect();
    write_svg_curves(
        &out.join("survival.svg"),
        "survival curve",
        &ts,
        &[("P(tau > t)", &ps)],
    )?;
    if cfg.audit_paths > 0 {
        let rows: Vec<Vec<f64>> = (0..cfg.audit_paths.min(cfg.n_paths))
            .map(|i| {
                let o = simulate_path(&cfg.operator, &cfg.domain, &cfg.x0, &mc_cfg, i)?;
                let mut r = vec![i as f64, o.tau, o.c_integral, o.hit_horizon as u8 as f64];
                r.extend_from_slice(&o.x_tau);
                Ok(r)
            })
            .collect::<Result<_>>()?;
        let mut header = vec!["path", "tau", "c_integral", "hit_horizon"];
        header.extend(["x_tau_1", "x_tau_2", "x_tau_3"][..cfg.operator.dim()].iter());
        write_csv(&out.join("paths.csv"), &header, &rows)?;
    }
    Ok(vec![VerificationReport::named(
        "simulate",
        digest(&["simulate", &format!("{}", cfg.seed)]),
        Verdict::Info,
    )
    .with_margin("mean_exit", mean.value)
    .with_margin("ci_95", mean.ci_95)
    .with_detail(
        "horizon_fraction",
        format!("{}", mean.horizon_fraction),
    )])
}

fn run_eigen(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<VerificationReport>> {
    let (grid, disc) = assemble(&cfg.operator, &cfg.domain, cfg.h)?;
    std::fs::write(out.join("grid.json"), disc.grid_metadata_json())?;
    if cfg.export_matrices {
        DiscreteOperator::write_coo(&disc.a_int, &out.join("a_int.coo"))?;
        DiscreteOperator::write_coo(&disc.b_ext, &out.join("b_ext.coo"))?;
    }
    let pair = principal_eigenpair(&disc, 1e-10)?;
    let rows: Vec<Vec<f64>> = (0..grid.n_interior())
        .map(|k| {
            let mut r = grid.interior_position(k);
            r.push(pair.phi[k]);
            r
        })
        .collect();
    let mut header: Vec<&str> = ["x1", "x2", "x3"][..grid.dim].to_vec();
    header.push("phi");
    write_csv(&out.join("eigenpair.csv"), &header, &rows)?;
    if grid.dim == 1 {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let phi: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        write_svg_curves(
            &out.join("eigenpair.svg"),
            "principal eigenfunction",
            &xs,
            &[("phi", &phi)],
        )?;
    } else {
        let pts: Vec<(f64, f64, f64)> = rows
            .iter()
            .map(|r| (r[0], r[1], *r.last().unwrap()))
            .collect();
        write_svg_heatmap(&out.join("eigenpair.svg"), "principal eigenfunction", &pts)?;
    }
    Ok(vec![VerificationReport::from_margin(
        "eigen",
        digest(&["eigen-task", &format!("{}", cfg.h)]),
        1e-8 - pair.residual,
        0.0,
        "power-iteration residual <= 1e-8",
    )
    .with_margin("lambda", pair.lambda)
    .with_margin("residual", pair.residual)])
}

fn run_gauge(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<VerificationReport>> {
    let (grid, disc) = assemble(&cfg.operator, &cfg.domain, cfg.h)?;
    let gg = gauge_grid(&disc)?;
    let rows: Vec<Vec<f64>> = (0..grid.n_interior())
        .map(|k| {
            let mut r = grid.interior_position(k);
            r.push(gg.w[k]);
            r
        })
        .collect();
    let mut header: Vec<&str> = ["x1", "x2", "x3"][..grid.dim].to_vec();
    header.push("w");
    write_csv(&out.join("gauge.csv"), &header, &rows)?;
    if grid.dim == 1 {
        let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let w: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        write_svg_curves(&out.join("gauge.svg"), "gauge w", &xs, &[("w", &w)])?;
    }
    let lambda = lambda_for(cfg)?;
    let mc_cfg = path_config(cfg, lambda);
    let est = estimate_gauge(&cfg.operator, &cfg.domain, &cfg.x0, &mc_cfg)?;
    let g0 = vec![0.0; grid.n_exterior()];
    let grid_w = grid
        .interpolate(&gg.w, &g0, &cfg.x0)
        .ok_or_else(|| LabError::Geometry("x0 outside lattice".into()))?;
    let budget = 3.0 * est.v.ci_95 + 0.02;
    let gap = (est.w - grid_w).abs();
    Ok(vec![VerificationReport::from_margin(
        "gauge",
        digest(&["gauge-task", &format!("{}", cfg.seed)]),
        budget - gap,
        0.0,
        "grid vs MC within 3 CI + 0.02",
    )
    .with_margin("w_grid", grid_w)
    .with_margin("w_mc", est.w)
    .with_detail(
        "cross_residual",
        format!("{:.3e}", gg.cross_residual),
    )])
}

fn run_qhl(cfg: &ScenarioConfig, quadrature: &QuadratureConfig) -> Result<Vec<VerificationReport>> {
    let setup = grid_setup(cfg)?;
    let lambda = lambda_for(cfg)?;
    let sel = choose_constants(&BarrierInputs::from_operator(&cfg.operator, lambda), 1.0)?;
    // killing-free eigenpair on the same lattice for the II-family bounds
    let mut op_free = cfg.operator.clone();
    op_free.coeffs.c = waldenfels::field::ScalarCoeff::constant(0.0);
    let (_g, disc_free) = assemble(&op_free, &cfg.domain, cfg.h)?;
    let eigen = principal_eigenpair(&disc_free, 1e-10)?;
    let need_minor = cfg.task == "verify-qhl-iia";
    let minor = if need_minor {
        let kern = resolvent_kernel(&setup.disc, 1.0)?;
        Some(minorization(
            &kern,
            setup.disc.cell_volume(),
            setup.disc.n_interior() / 2,
        )?)
    } else {
        None
    };
    let gauge_w = gauge_grid(&setup.disc)?.w;
    let mut reps = Vec::new();
    for seed in 0..cfg.seeds as u64 {
        let f = random_source(&setup.disc, seed.wrapping_add(cfg.seed), 0.5);
        let g = vec![1.0; setup.disc.n_exterior()];
        let case = gen_subsolution(&setup.disc, &setup.solver, &f, &g, seed)?;
        let rep = match cfg.task.as_str() {
            "verify-qhl-ia" => check_qhl_ia(
                &case,
                &setup.disc,
                &cfg.operator,
                &cfg.domain,
                &sel,
                quadrature,
                1e-8,
            ),
            "verify-qhl-ib" => check_qhl_ib(&case, &setup.disc, &cfg.domain, &sel, &gauge_w, 1e-8),
            "verify-qhl-iia" => check_qhl_iia(
                &case,
                &setup.disc,
                &eigen,
                minor.as_ref().expect("minorization prepared"),
                1e-8,
            ),
            _ => check_qhl_iib(&case, &setup.disc, &eigen, 1e-8),
        };
        reps.push(rep);
    }
    Ok(reps)
}
