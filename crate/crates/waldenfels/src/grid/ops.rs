//! Solver-backed operations on the discrete operator: resolvent, semigroup
//! by uniformization, principal eigenpair, resolvent kernel, rank-one
//! minorization, gauge solve, and adjoint duality checks.

use nalgebra::DMatrix;

use crate::error::{LabError, Result};
use crate::grid::csr::Csr;
use crate::grid::solve::{DirectSolver, SOLVER_TOL};
use crate::grid::DiscreteOperator;
use crate::mc::rng::StepRng;
use crate::operator::{DisplacementDensity, LevyKernelSpec, OperatorSpec};

impl DiscreteOperator {
    /// System matrix `M_α = α I − A_int + diag(c)`.
    pub fn system_matrix(&self, alpha: f64) -> Csr {
        let n = self.grid.n_interior();
        let mut trip = Vec::with_capacity(self.a_int.data.len() + n);
        for r in 0..n {
            let (cols, vals) = self.a_int.row(r);
            for (c, v) in cols.iter().zip(vals) {
                trip.push((r, *c, -*v));
            }
            trip.push((r, r, alpha + self.c_vec[r]));
        }
        Csr::from_triplets(n, n, &trip)
    }

    /// Factors `M_α`; requires the solvability certificate when `α = 0`.
    pub fn factor(&self, alpha: f64) -> Result<DirectSolver> {
        if alpha < 0.0 {
            return Err(LabError::Contract("alpha must be nonnegative".into()));
        }
        if alpha == 0.0 && !self.certificate.alpha0_solvable && self.c_vec.iter().all(|&c| c == 0.0)
        {
            return Err(LabError::Singular(
                "alpha = 0 resolvent requires the drain certificate (exterior coupling or killing \
                 in every communicating class)"
                    .into(),
            ));
        }
        DirectSolver::new(self.system_matrix(alpha))
    }

    /// Right-hand side `f + B_ext g` of the Dirichlet resolvent problem.
    pub fn rhs(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        let mut rhs = self.b_ext.matvec(g);
        for (r, fv) in rhs.iter_mut().zip(f) {
            *r += fv;
        }
        rhs
    }

    /// Residual of the equation `(A − c) u + B g = f_out` recomputed from
    /// the assembled matrices (not from any solver state).
    pub fn apply_minus_c(&self, u: &[f64], g: &[f64]) -> Vec<f64> {
        let mut out = self.a_int.matvec(u);
        let bg = self.b_ext.matvec(g);
        for i in 0..out.len() {
            out[i] += bg[i] - self.c_vec[i] * u[i];
        }
        out
    }

    pub fn n_interior(&self) -> usize {
        self.grid.n_interior()
    }

    pub fn n_exterior(&self) -> usize {
        self.grid.n_exterior()
    }

    pub fn cell_volume(&self) -> f64 {
        self.grid.h.powi(self.grid.dim as i32)
    }
}

/// Solves `(α I − A_int + diag c) u = f + B_ext g`: the discrete
/// `R^D_α f` with exterior data `g`.
pub fn resolvent(disc: &DiscreteOperator, alpha: f64, f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    let solver = disc.factor(alpha)?;
    solver.solve(&disc.rhs(f, g))
}

/// Positivity-preserving approximation of `P_t` with exterior data `g`
/// frozen: uniformization of `G = A_int − diag(c)` with constant source
/// `B_ext g`, substepped whenever `β t` is large.
pub fn semigroup(disc: &DiscreteOperator, t: f64, f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    if t < 0.0 {
        return Err(LabError::Contract("t must be nonnegative".into()));
    }
    let n = disc.n_interior();
    let mut u = f.to_vec();
    if t == 0.0 {
        return Ok(u);
    }
    // generator and uniformization rate
    let mut beta = 0.0_f64;
    for r in 0..n {
        let gdiag = disc.a_int.get(r, r) - disc.c_vec[r];
        beta = beta.max(-gdiag);
    }
    let beta = beta.max(1e-12);
    let source = disc.b_ext.matvec(g);
    // source split keeps the series positivity-preserving for g of any sign
    let src_pos: Vec<f64> = source.iter().map(|v| v.max(0.0)).collect();
    let src_neg: Vec<f64> = source.iter().map(|v| (-v).max(0.0)).collect();
    let has_neg = src_neg.iter().any(|&v| v > 0.0);

    let n_sub = ((beta * t) / 500.0).ceil().max(1.0) as usize;
    let dt = t / n_sub as f64;
    for _ in 0..n_sub {
        u = uniform_step(disc, beta, dt, &u, &src_pos)?;
        if has_neg {
            let zero = vec![0.0; n];
            let neg = uniform_step(disc, beta, dt, &zero, &src_neg)?;
            for i in 0..n {
                u[i] -= neg[i];
            }
        }
    }
    Ok(u)
}

/// One uniformized substep: `e^{dt G} u + ∫_0^dt e^{s G} src ds` with the
/// transition kernel `P = I + G/β` applied in a truncated Poisson series.
fn uniform_step(
    disc: &DiscreteOperator,
    beta: f64,
    dt: f64,
    u: &[f64],
    src: &[f64],
) -> Result<Vec<f64>> {
    let n = disc.n_interior();
    let bt = beta * dt;
    let apply_p = |x: &[f64], out: &mut Vec<f64>| {
        disc.a_int.matvec_into(x, out);
        for i in 0..n {
            out[i] = x[i] + (out[i] - disc.c_vec[i] * x[i]) / beta;
        }
    };
    let mut pk = (-bt).exp();
    if pk == 0.0 {
        return Err(LabError::Contract(
            "uniformization substep too large; internal substepping failed".into(),
        ));
    }
    let mut cdf = pk;
    let mut v = u.to_vec(); // P^k u
    let mut w = src.to_vec(); // P^k src
    let mut acc: Vec<f64> = v.iter().map(|x| x * pk).collect();
    let mut acc_src: Vec<f64> = w.iter().map(|x| x * (1.0 - cdf)).collect();
    let mut buf = vec![0.0; n];
    let mut k = 0usize;
    let k_cap = (bt + 60.0 * (bt + 40.0).sqrt() + 200.0) as usize;
    while cdf < 1.0 - 1e-14 && k < k_cap {
        k += 1;
        apply_p(&v, &mut buf);
        std::mem::swap(&mut v, &mut buf);
        apply_p(&w, &mut buf);
        std::mem::swap(&mut w, &mut buf);
        pk *= bt / k as f64;
        cdf += pk;
        let tail = (1.0 - cdf).max(0.0);
        for i in 0..n {
            acc[i] += pk * v[i];
            acc_src[i] += tail * w[i];
        }
    }
    for i in 0..n {
        acc[i] += acc_src[i] / beta;
    }
    Ok(acc)
}

/// Principal eigenpair of the discrete operator (with its killing term):
/// `A φ − c φ = −λ φ`, `φ > 0`, `‖φ‖_∞ = 1`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub lambda: f64,
    pub phi: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Power iteration on `f ↦ R_1 f`; `λ = 1/ρ(R_1) − 1`.
pub fn principal_eigenpair(disc: &DiscreteOperator, tol: f64) -> Result<EigenPair> {
    let n = disc.n_interior();
    check_irreducible(&disc.a_int)?;
    let solver = disc.factor(1.0)?;
    let mut v = vec![1.0; n];
    let mut rho_prev = 0.0;
    let max_iter = 10_000;
    for it in 1..=max_iter {
        let w = solver.solve(&v)?;
        let num: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        let rho = num / den;
        let wmax = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if wmax <= 0.0 {
            return Err(LabError::Irreducibility(
                "power iterate lost positivity; the discrete kernel is not irreducible".into(),
            ));
        }
        // residual of R v = ρ v against the pre-normalization iterate
        let resid = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rho * b).abs())
            .fold(0.0_f64, f64::max)
            / wmax;
        let vn: Vec<f64> = w.iter().map(|x| x / wmax).collect();
        let rel = (rho - rho_prev).abs() / rho.abs().max(1e-300);
        v = vn;
        rho_prev = rho;
        if it > 2 && rel < tol && resid < 10.0 * tol {
            if v.iter().any(|&x| x <= 0.0) {
                return Err(LabError::Irreducibility(
                    "nonpositive eigenvector entry; check stencil connectivity".into(),
                ));
            }
            return Ok(EigenPair {
                lambda: 1.0 / rho - 1.0,
                phi: v,
                residual: resid,
                iterations: it,
            });
        }
    }
    Err(LabError::EigenNonConvergence(max_iter))
}

fn check_irreducible(a: &Csr) -> Result<()> {
    let n = a.n_rows;
    let forward = bfs_all(a, 0);
    let back = bfs_all(&a.transpose(), 0);
    if forward.iter().all(|&x| x) && back.iter().all(|&x| x) {
        Ok(())
    } else {
        let missing = forward
            .iter()
            .filter(|&&x| !x)
            .count()
            .max(back.iter().filter(|&&x| !x).count());
        Err(LabError::Irreducibility(format!(
            "stencil graph is not strongly connected ({missing}/{n} nodes unreachable); \
             the interior node set is disconnected at this h"
        )))
    }
}

fn bfs_all(a: &Csr, start: usize) -> Vec<bool> {
    let n = a.n_rows;
    let mut seen = vec![false; n];
    let mut queue = vec![start];
    seen[start] = true;
    while let Some(i) = queue.pop() {
        let (cols, vals) = a.row(i);
        for (c, v) in cols.iter().zip(vals) {
            if *c != i && *v > 0.0 && !seen[*c] {
                seen[*c] = true;
                queue.push(*c);
            }
        }
    }
    seen
}

/// Dense resolvent kernel `r_α(x, y)`: columns are solves against indicator
/// loads scaled by the cell volume. All entries must be positive.
pub fn resolvent_kernel(disc: &DiscreteOperator, alpha: f64) -> Result<DMatrix<f64>> {
    let n = disc.n_interior();
    if n > 4000 {
        return Err(LabError::Unsupported(format!(
            "dense resolvent kernel for {n} interior nodes exceeds the desk-scale budget; \
             use a coarser grid"
        )));
    }
    let solver = disc.factor(alpha)?;
    let hd = disc.cell_volume();
    let mut kern = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = solver.solve(&e)?;
        e[j] = 0.0;
        for i in 0..n {
            kern[(i, j)] = col[i] / hd;
        }
    }
    let min_entry = kern.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_entry <= 0.0 {
        return Err(LabError::Irreducibility(format!(
            "resolvent kernel has a nonpositive entry ({min_entry:.3e})"
        )));
    }
    Ok(kern)
}

/// Constructive rank-one minorization of a positive kernel:
/// `φ̄(y) = r(x0, y)`, `ψ̄(x) = min_y r(x,y)/φ̄(y)`, so
/// `r(x,y) ≥ ψ̄(x) φ̄(y)` entrywise with `ψ̄(x0) = 1`. `ψ` is the resolvent
/// applied to `ψ̄` and `χ` the density of `B ↦ ∫ φ̄ R 1_B`.
#[derive(Clone, Debug)]
pub struct Minorization {
    pub psi_bar: Vec<f64>,
    pub phi_bar: Vec<f64>,
    pub psi: Vec<f64>,
    pub chi: Vec<f64>,
    /// Minimum of `r − ψ̄ φ̄ᵀ` over all entries (≥ −1e−12 by construction).
    pub min_slack: f64,
}

pub fn minorization(kernel: &DMatrix<f64>, cell_volume: f64, x0: usize) -> Result<Minorization> {
    let n = kernel.nrows();
    if x0 >= n {
        return Err(LabError::Contract("reference node out of range".into()));
    }
    let phi_bar: Vec<f64> = (0..n).map(|y| kernel[(x0, y)]).collect();
    if phi_bar.iter().any(|&v| v <= 0.0) {
        return Err(LabError::Irreducibility(
            "kernel row at x0 has a nonpositive entry".into(),
        ));
    }
    let mut psi_bar = vec![f64::INFINITY; n];
    for x in 0..n {
        for y in 0..n {
            psi_bar[x] = psi_bar[x].min(kernel[(x, y)] / phi_bar[y]);
        }
    }
    if psi_bar.iter().all(|&v| v <= 0.0) {
        return Err(LabError::Irreducibility(
            "minorization degenerated to zero".into(),
        ));
    }
    let mut min_slack = f64::INFINITY;
    for x in 0..n {
        for y in 0..n {
            min_slack = min_slack.min(kernel[(x, y)] - psi_bar[x] * phi_bar[y]);
        }
    }
    // ψ = R ψ̄ and χ = φ̄ᵀ R, both through the same kernel
    let mut psi = vec![0.0; n];
    let mut chi = vec![0.0; n];
    for x in 0..n {
        let mut acc = 0.0;
        for y in 0..n {
            acc += kernel[(x, y)] * psi_bar[y];
        }
        psi[x] = acc * cell_volume;
    }
    for y in 0..n {
        let mut acc = 0.0;
        for x in 0..n {
            acc += phi_bar[x] * kernel[(x, y)];
        }
        chi[y] = acc * cell_volume;
    }
    if psi.iter().any(|&v| v <= 0.0) || chi.iter().any(|&v| v <= 0.0) {
        return Err(LabError::Irreducibility(
            "ψ or χ lost strict positivity".into(),
        ));
    }
    Ok(Minorization {
        psi_bar,
        phi_bar,
        psi,
        chi,
        min_slack,
    })
}

/// Grid gauge `w` solving `(−A + c) w = c` with zero exterior data, plus an
/// independent cross-check through the killing-free resolvent:
/// `w = R^D(c (1 − w))`.
#[derive(Clone, Debug)]
pub struct GaugeGrid {
    pub w: Vec<f64>,
    pub cross_residual: f64,
}

pub fn gauge_grid(disc: &DiscreteOperator) -> Result<GaugeGrid> {
    let n = disc.n_interior();
    let solver = disc.factor(0.0)?;
    let w = solver.solve(&disc.c_vec)?;
    let tol = 1e-8;
    for (i, &v) in w.iter().enumerate() {
        if !(-tol..=1.0 + tol).contains(&v) {
            return Err(LabError::Contract(format!(
                "gauge left [0,1] at node {i}: {v}"
            )));
        }
    }
    // cross-check against the killing-free solve
    let cross_residual = if disc.c_vec.iter().any(|&c| c > 0.0) {
        let mut free = disc.clone();
        free.c_vec = vec![0.0; n];
        let rhs: Vec<f64> = disc
            .c_vec
            .iter()
            .zip(&w)
            .map(|(c, wi)| c * (1.0 - wi))
            .collect();
        let w2 = free.factor(0.0)?.solve(&rhs)?;
        w.iter()
            .zip(&w2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max)
    } else {
        0.0
    };
    Ok(GaugeGrid { w, cross_residual })
}

/// Formal adjoint spec: drift negated, kernel reflected, and for the named
/// drift fields with closed-form divergence the extra killing `div b` is
/// added. Errors for coefficient fields whose adjoint would pick up
/// derivative terms this crate does not assemble.
pub fn adjoint_spec(op: &OperatorSpec) -> Result<OperatorSpec> {
    let d = op.dim();
    let q = op
        .coeffs
        .q
        .as_const()
        .ok_or_else(|| LabError::Unsupported("adjoint assembly needs constant Q".into()))?;
    let (b_hat, div_b) = match &op.coeffs.b {
        crate::field::VectorCoeff::Const(b) => (
            crate::field::VectorCoeff::constant(b.iter().map(|v| -v).collect()),
            0.0,
        ),
        crate::field::VectorCoeff::Named { name, .. } => {
            let div = crate::field::vector_divergence(name, d).ok_or_else(|| {
                LabError::Unsupported(format!("no closed-form divergence for drift '{name}'"))
            })?;
            let neg_name = if let Some(stripped) = name.strip_prefix("neg-") {
                stripped.to_string()
            } else {
                format!("neg-{name}")
            };
            (crate::field::vector_registry(&neg_name, d)?, div)
        }
    };
    let c_hat = match op.coeffs.c.as_const() {
        Some(c0) => {
            let v = c0 + div_b;
            if v < 0.0 {
                return Err(LabError::Unsupported(
                    "adjoint killing c + div b is negative; not representable".into(),
                ));
            }
            crate::field::ScalarCoeff::constant(v)
        }
        None => {
            if div_b != 0.0 {
                return Err(LabError::Unsupported(
                    "adjoint of variable drift needs constant c".into(),
                ));
            }
            op.coeffs.c.clone()
        }
    };
    let kernel = match &op.kernel {
        LevyKernelSpec::Zero => LevyKernelSpec::Zero,
        LevyKernelSpec::FiniteActivity {
            intensity,
            density,
            support_radius,
        } => {
            if intensity.as_const().is_none() {
                return Err(LabError::Unsupported(
                    "adjoint assembly needs constant jump intensity".into(),
                ));
            }
            let refl = match density {
                DisplacementDensity::Atoms(atoms) => DisplacementDensity::Atoms(
                    atoms
                        .iter()
                        .map(|(y, w)| (y.iter().map(|v| -v).collect(), *w))
                        .collect(),
                ),
                DisplacementDensity::UniformBall { radius } => {
                    DisplacementDensity::UniformBall { radius: *radius }
                }
            };
            LevyKernelSpec::FiniteActivity {
                intensity: intensity.clone(),
                density: refl,
                support_radius: *support_radius,
            }
        }
        ts @ LevyKernelSpec::TruncatedStable { .. } => ts.clone(),
    };
    Ok(OperatorSpec {
        coeffs: crate::operator::CoefficientField::new(
            d,
            crate::field::MatrixCoeff::constant(q.to_vec()),
            b_hat,
            c_hat,
        ),
        kernel,
    })
}

/// `max over trials of |⟨R̂ f, g⟩ − ⟨f, R g⟩| / (‖f‖ ‖g‖ scale)` for random
/// nonnegative `f, g`; `disc_hat` may be an independently assembled adjoint
/// (O(h) residual) or the transpose system (solver-tolerance residual, see
/// [`duality_check_transpose`]).
pub fn duality_check(
    disc: &DiscreteOperator,
    disc_hat: &DiscreteOperator,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = disc.n_interior();
    if disc_hat.n_interior() != n {
        return Err(LabError::Contract(
            "adjoint must live on the same grid".into(),
        ));
    }
    let s = disc.factor(alpha)?;
    let sh = disc_hat.factor(alpha)?;
    let hd = disc.cell_volume();
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let mut rng = StepRng::new(seed, trial as u64, 0);
        let f: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let rf = sh.solve(&f)?;
        let rg = s.solve(&g)?;
        let lhs: f64 = rf.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() * hd;
        let rhs: f64 = f.iter().zip(&rg).map(|(a, b)| a * b).sum::<f64>() * hd;
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// Duality against the discrete transpose `M_αᵀ`; exact up to solver
/// tolerance.
pub fn duality_check_transpose(
    disc: &DiscreteOperator,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = disc.n_interior();
    let m = disc.system_matrix(alpha);
    let mt = m.transpose();
    let s = DirectSolver::new(m)?;
    let st = DirectSolver::new(mt)?;
    let hd = disc.cell_volume();
    let mut worst = 0.0_f64;
    for trial in 0..trials {
        let mut rng = StepRng::new(seed, trial as u64, 1);
        let f: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
        let rf = st.solve(&f)?;
        let rg = s.solve(&g)?;
        let lhs: f64 = rf.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() * hd;
        let rhs: f64 = f.iter().zip(&rg).map(|(a, b)| a * b).sum::<f64>() * hd;
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

/// Scheme-consistency estimate by Richardson comparison of a reference
/// solve on two grids: `‖u_h − u_{h/2}‖_∞ · 4/3` plus the solver floor.
pub fn scheme_tolerance(
    op: &OperatorSpec,
    dom: &crate::geometry::DomainSpec,
    h: f64,
    f_const: f64,
) -> Result<f64> {
    let (grid_h, disc_h) = crate::grid::assemble(op, dom, h)?;
    let (grid_h2, disc_h2) = crate::grid::assemble(op, dom, h / 2.0)?;
    let u_h = resolvent(
        &disc_h,
        0.0,
        &vec![f_const; grid_h.n_interior()],
        &vec![0.0; grid_h.n_exterior()],
    )?;
    let u_h2 = resolvent(
        &disc_h2,
        0.0,
        &vec![f_const; grid_h2.n_interior()],
        &vec![0.0; grid_h2.n_exterior()],
    )?;
    let g_h2 = vec![0.0; grid_h2.n_exterior()];
    let mut worst = 0.0_f64;
    for k in 0..grid_h.n_interior() {
        let x = grid_h.interior_position(k);
        if let Some(v2) = grid_h2.interpolate(&u_h2, &g_h2, &x) {
            worst = worst.max((u_h[k] - v2).abs());
        }
    }
    Ok(worst * 4.0 / 3.0 + 10.0 * SOLVER_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::grid::assemble;
    use crate::operator::presets;

    fn interval_disc(h: f64) -> DiscreteOperator {
        let op = presets::laplacian(1);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        assemble(&op, &dom, h).unwrap().1
    }

    #[test]
    fn resolvent_alpha0_matches_closed_form() {
        // (1/2) u'' = -1 on (-1,1): u = 1 - x^2
        let disc = interval_disc(0.01);
        let n = disc.n_interior();
        let u = resolvent(&disc, 0.0, &vec![1.0; n], &vec![0.0; disc.n_exterior()]).unwrap();
        for k in 0..n {
            let x = disc.grid.interior_position(k)[0];
            assert!((u[k] - (1.0 - x * x)).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn trivial_resolvent_inputs() {
        let disc = interval_disc(0.05);
        let u = resolvent(
            &disc,
            1.0,
            &vec![0.0; disc.n_interior()],
            &vec![0.0; disc.n_exterior()],
        )
        .unwrap();
        assert!(u.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn resolvent_identity() {
        let disc = interval_disc(0.02);
        let n = disc.n_interior();
        let g = vec![0.0; disc.n_exterior()];
        let f: Vec<f64> = (0..n).map(|i| ((i * 13 % 7) as f64 + 1.0) / 7.0).collect();
        for (alpha, beta) in [(0.5, 2.0), (0.0, 1.0), (1.0, 3.5)] {
            let ra = resolvent(&disc, alpha, &f, &g).unwrap();
            let rb = resolvent(&disc, beta, &f, &g).unwrap();
            let rarb = resolvent(&disc, alpha, &rb, &g).unwrap();
            let mut worst = 0.0_f64;
            for i in 0..n {
                worst = worst.max((ra[i] - rb[i] - (beta - alpha) * rarb[i]).abs());
            }
            assert!(worst < 1e-8, "resolvent identity residual {worst}");
        }
    }

    #[test]
    fn resolvent_positivity() {
        let disc = interval_disc(0.05);
        let n = disc.n_interior();
        let f: Vec<f64> = (0..n).map(|i| (i % 3) as f64).collect();
        let g: Vec<f64> = (0..disc.n_exterior()).map(|i| (i % 2) as f64).collect();
        let u = resolvent(&disc, 0.7, &f, &g).unwrap();
        assert!(u.iter().all(|&v| v >= -1e-12));
    }

    #[test]
    fn semigroup_conservation_and_start() {
        let op = presets::two_point_jump(1, 0.5, 1.0);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let (_g, disc) = assemble(&op, &dom, 0.05).unwrap();
        let n = disc.n_interior();
        let f: Vec<f64> = (0..n).map(|i| (i as f64).sin().abs()).collect();
        let g0 = vec![0.0; disc.n_exterior()];
        let u0 = semigroup(&disc, 0.0, &f, &g0).unwrap();
        assert_eq!(u0, f);
        // full exterior data 1, start 1, c = 0: stays 1
        let ones_f = vec![1.0; n];
        let ones_g = vec![1.0; disc.n_exterior()];
        let u = semigroup(&disc, 0.7, &ones_f, &ones_g).unwrap();
        for v in &u {
            assert!((v - 1.0).abs() < 1e-10, "{v}");
        }
        // positivity for nonnegative input
        let u = semigroup(&disc, 0.3, &f, &g0).unwrap();
        assert!(u.iter().all(|&v| v >= -1e-13));
    }

    #[test]
    fn eigenpair_1d_reference() {
        let disc = interval_disc(0.01);
        let pair = principal_eigenpair(&disc, 1e-10).unwrap();
        let exact = std::f64::consts::PI * std::f64::consts::PI / 8.0;
        assert!(
            (pair.lambda - exact).abs() / exact < 1e-3,
            "{}",
            pair.lambda
        );
        // eigenvector close to cos(pi x / 2), sup-normalized
        for k in 0..disc.n_interior() {
            let x = disc.grid.interior_position(k)[0];
            let expect = (std::f64::consts::PI * x / 2.0).cos();
            assert!((pair.phi[k] - expect).abs() < 5e-3);
        }
        // eigen identity through the semigroup
        for t in [0.1, 1.0] {
            let pt = semigroup(&disc, t, &pair.phi, &vec![0.0; disc.n_exterior()]).unwrap();
            let decay = (-pair.lambda * t).exp();
            let mut worst = 0.0_f64;
            for k in 0..disc.n_interior() {
                worst = worst.max((pt[k] - decay * pair.phi[k]).abs());
            }
            assert!(worst < 1e-6, "eigen identity residual {worst} at t={t}");
        }
    }

    #[test]
    fn eigen_shift_and_scale() {
        // adding constant killing c shifts lambda by exactly c
        let op = presets::laplacian(1);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let (_g, disc0) = assemble(&op, &dom, 0.02).unwrap();
        let mut disc_c = disc0.clone();
        for c in disc_c.c_vec.iter_mut() {
            *c = 0.7;
        }
        let p0 = principal_eigenpair(&disc0, 1e-10).unwrap();
        let pc = principal_eigenpair(&disc_c, 1e-10).unwrap();
        assert!(pc.lambda >= p0.lambda + 0.7 - 1e-8);

        // scaling the operator scales lambda and fixes phi
        let mut disc_s = disc0.clone();
        for v in disc_s.a_int.data.iter_mut() {
            *v *= 3.0;
        }
        for v in disc_s.b_ext.data.iter_mut() {
            *v *= 3.0;
        }
        let ps = principal_eigenpair(&disc_s, 1e-10).unwrap();
        assert!((ps.lambda - 3.0 * p0.lambda).abs() < 1e-6 * ps.lambda.max(1.0));
        let amax0 = p0
            .phi
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let amaxs = ps
            .phi
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(amax0, amaxs);
    }

    #[test]
    fn kernel_symmetry_and_minorization() {
        let disc = interval_disc(0.05);
        let n = disc.n_interior();
        let kern = resolvent_kernel(&disc, 0.0).unwrap();
        // symmetric operator → symmetric kernel
        let mut asym = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((kern[(i, j)] - kern[(j, i)]).abs());
            }
        }
        assert!(asym < 1e-7 * kern.max(), "{asym}");
        // row sums x cell volume at alpha = 0 = discrete mean exit time
        let hd = disc.cell_volume();
        let u = resolvent(&disc, 0.0, &vec![1.0; n], &vec![0.0; disc.n_exterior()]).unwrap();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| kern[(i, j)]).sum::<f64>() * hd;
            assert!((row - u[i]).abs() < 1e-7);
        }
        // rank-one minorization
        let m = minorization(&kern, hd, n / 2).unwrap();
        assert!(m.min_slack >= -1e-12);
        assert!((m.psi_bar[n / 2] - 1.0).abs() < 1e-12);
        assert!(m.psi.iter().all(|&v| v > 0.0));
        assert!(m.chi.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn single_node_kernel() {
        // one interior node: kernel is the scalar 1/((alpha + |diag| + c) h^d)
        let disc = interval_disc(1.2);
        assert_eq!(disc.n_interior(), 1);
        let kern = resolvent_kernel(&disc, 2.0).unwrap();
        let diag = disc.a_int.get(0, 0);
        let expect = 1.0 / ((2.0 - diag) * disc.cell_volume());
        assert!((kern[(0, 0)] - expect).abs() < 1e-10);
        let m = minorization(&kern, disc.cell_volume(), 0).unwrap();
        assert_eq!(m.psi_bar[0], 1.0);
        assert!((m.phi_bar[0] - kern[(0, 0)]).abs() < 1e-14);
    }

    #[test]
    fn gauge_grid_reference() {
        // c ≡ 1 on (-1,1) under (1/2)∂²: w(0) = 1 − 1/cosh(√2)
        let op = presets::laplacian(1);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let (_g, mut disc) = assemble(&op, &dom, 0.005).unwrap();
        for c in disc.c_vec.iter_mut() {
            *c = 1.0;
        }
        let gg = gauge_grid(&disc).unwrap();
        let k0 = disc
            .grid
            .interior_nodes_in(&DomainSpec::ball(vec![0.0], 1e-6))[0];
        let exact = 1.0 - 1.0 / (2.0_f64.sqrt()).cosh();
        assert!((gg.w[k0] - exact).abs() < 1e-4, "{} vs {exact}", gg.w[k0]);
        assert!(gg.cross_residual < 1e-9, "{}", gg.cross_residual);

        // c ≡ 0 → w ≡ 0
        let (_g, disc0) = assemble(&op, &dom, 0.05).unwrap();
        let gg0 = gauge_grid(&disc0).unwrap();
        assert!(gg0.w.iter().all(|&v| v.abs() < 1e-12));

        // monotone in c entrywise
        let mut disc_big = disc.clone();
        for c in disc_big.c_vec.iter_mut() {
            *c = 10.0;
        }
        let gg_big = gauge_grid(&disc_big).unwrap();
        for (a, b) in gg_big.w.iter().zip(&gg.w) {
            assert!(a + 1e-12 >= *b);
        }
    }

    #[test]
    fn transpose_duality_is_exact() {
        let disc = interval_disc(0.02);
        let worst = duality_check_transpose(&disc, 1.0, 5, 99).unwrap();
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn constant_drift_adjoint_is_transpose_exact() {
        // with constant coefficients the upwind scheme transposes exactly
        // onto the reflected-drift assembly, so the residual sits at the
        // solver floor at every h
        use crate::field::{MatrixCoeff, ScalarCoeff, VectorCoeff};
        let op = OperatorSpec {
            coeffs: crate::operator::CoefficientField::new(
                1,
                MatrixCoeff::identity(1),
                VectorCoeff::constant(vec![0.8]),
                ScalarCoeff::constant(0.0),
            ),
            kernel: LevyKernelSpec::Zero,
        };
        let hat = adjoint_spec(&op).unwrap();
        assert_eq!(hat.coeffs.b.as_const().unwrap()[0], -0.8);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let (_ga, disc) = assemble(&op, &dom, 0.02).unwrap();
        let (_gb, disc_hat) = assemble(&hat, &dom, 0.02).unwrap();
        let r = duality_check(&disc, &disc_hat, 1.0, 4, 7).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn analytic_adjoint_residual_decays_first_order() {
        // variable drift b(x) = 0.4x: the adjoint carries the extra killing
        // div b, and the upwind bias makes the duality residual O(h)
        use crate::field::{vector_registry, MatrixCoeff, ScalarCoeff};
        let op = OperatorSpec {
            coeffs: crate::operator::CoefficientField::new(
                1,
                MatrixCoeff::identity(1),
                vector_registry("linear-x", 1).unwrap(),
                ScalarCoeff::constant(0.0),
            ),
            kernel: LevyKernelSpec::Zero,
        };
        let hat = adjoint_spec(&op).unwrap();
        assert_eq!(hat.coeffs.c.as_const().unwrap(), 0.4);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let mut residuals = Vec::new();
        for h in [0.04, 0.02] {
            let (_ga, disc) = assemble(&op, &dom, h).unwrap();
            let (_gb, disc_hat) = assemble(&hat, &dom, h).unwrap();
            residuals.push(duality_check(&disc, &disc_hat, 1.0, 4, 7).unwrap());
        }
        assert!(
            residuals[1] < 0.75 * residuals[0] && residuals[0] > 1e-8,
            "expected O(h) decay: {residuals:?}"
        );
    }

    #[test]
    fn discrete_weak_maximum_principle_random_instances() {
        // for u with (A - c) u >= 0 at interior nodes and exterior data g:
        // max u <= max(sup g+, 0), an exact property of the monotone scheme
        let op = presets::two_point_jump(1, 0.5, 1.0);
        let dom = DomainSpec::ball(vec![0.0], 1.0);
        let (_g, mut disc) = assemble(&op, &dom, 0.05).unwrap();
        for (i, c) in disc.c_vec.iter_mut().enumerate() {
            *c = if i % 3 == 0 { 0.5 } else { 0.0 };
        }
        let n = disc.n_interior();
        let solver = disc.factor(0.0).unwrap();
        for seed in 0..25u64 {
            let mut rng = StepRng::new(seed, 0, 0);
            let f: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
            let g: Vec<f64> = (0..disc.n_exterior())
                .map(|_| 2.0 * rng.uniform() - 1.0)
                .collect();
            // u solves (A - c) u = f >= 0 with data g
            let rhs: Vec<f64> = disc
                .b_ext
                .matvec(&g)
                .iter()
                .zip(&f)
                .map(|(bg, fv)| bg - fv)
                .collect();
            let u = solver.solve(&rhs).unwrap();
            let max_u = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let bound = g.iter().cloned().fold(0.0_f64, f64::max);
            assert!(max_u <= bound + 1e-9, "max u {max_u} bound {bound}");
        }
    }
}
