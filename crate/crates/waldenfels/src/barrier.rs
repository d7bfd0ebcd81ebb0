//! Explicit barrier functions and the constants feeding the quantitative
//! Hopf bounds.
//!
//! The interior barrier is `η(x) = exp(−α|x−ȳ|²) − exp(−α r²)` with
//! `α r² = γ*` held exactly; the constant selection grows `(M, α)` by
//! doubling until the evaluated lower bound on `(A − c) η` over the annulus
//! `V^*(ȳ, r)` clears the requested level `K`. Also here: the exterior
//! Dirichlet barrier, the gauge modulus `ρ(r) = inf_{D_r} w`, and the
//! exit-probability bound behind the Hopf I.A constant.

use crate::error::{LabError, Result};
use crate::field::{halton, SmoothField};
use crate::geometry::{annuli, DomainSpec};
use crate::grid::Grid;
use crate::operator::{LevyKernelSpec, OperatorSpec, QuadratureConfig};

/// Radial exponential field `amp · exp(−α|x−c|²) + offset` with exact
/// gradient and Hessian oracles; covers both the interior barrier and the
/// exit-probability test function.
#[derive(Clone, Debug)]
pub struct RadialExpField {
    pub dim: usize,
    pub center: Vec<f64>,
    pub alpha: f64,
    pub amp: f64,
    pub offset: f64,
}

impl SmoothField for RadialExpField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) * (a - c))
            .sum();
        self.amp * (-self.alpha * r2).exp() + self.offset
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) * (a - c))
            .sum();
        let e = self.amp * (-self.alpha * r2).exp();
        for i in 0..self.dim {
            out[i] = -2.0 * self.alpha * (x[i] - self.center[i]) * e;
        }
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let r2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) * (a - c))
            .sum();
        let e = self.amp * (-self.alpha * r2).exp();
        for i in 0..d {
            for j in 0..d {
                let xi = x[i] - self.center[i];
                let xj = x[j] - self.center[j];
                let mut v = 4.0 * self.alpha * self.alpha * xi * xj * e;
                if i == j {
                    v -= 2.0 * self.alpha * e;
                }
                out[i * d + j] = v;
            }
        }
    }
}

/// Barrier parameters for a ball `B(ȳ, r)`: `α r² = γ*` exactly.
#[derive(Clone, Debug)]
pub struct BarrierParams {
    pub ybar: Vec<f64>,
    pub r: f64,
    pub alpha: f64,
    pub gamma_star: f64,
    pub r0: f64,
    pub m: f64,
    pub k_target: f64,
}

impl BarrierParams {
    pub fn eta(&self) -> RadialExpField {
        RadialExpField {
            dim: self.ybar.len(),
            center: self.ybar.clone(),
            alpha: self.alpha,
            amp: 1.0,
            offset: -(-self.alpha * self.r * self.r).exp(),
        }
    }

    /// Radial slope magnitude of `η` on the sphere `|x−ȳ| = r`:
    /// `2 α r e^{−α r²}`.
    pub fn boundary_slope(&self) -> f64 {
        2.0 * self.alpha * self.r * (-self.alpha * self.r * self.r).exp()
    }
}

/// Inputs to the constant selection, taken from recorded operator bounds.
#[derive(Clone, Debug)]
pub struct BarrierInputs {
    pub lambda: f64,
    pub trace_q_sup: f64,
    pub b_norm_sup: f64,
    pub c_sup: f64,
    pub n_total: f64,
    pub kernel: LevyKernelSpec,
    pub dim: usize,
}

impl BarrierInputs {
    pub fn from_operator(op: &OperatorSpec, lambda: f64) -> Self {
        let d = op.dim();
        BarrierInputs {
            lambda,
            trace_q_sup: op.coeffs.trace_q_sup() + d as f64 * op.diffusion_correction(),
            b_norm_sup: op.coeffs.b_norm_sup(),
            c_sup: op.coeffs.c.sup(),
            n_total: op.kernel.total_mass_sup(d),
            kernel: op.kernel.clone(),
            dim: d,
        }
    }
}

/// The outcome of the constant search: a factory producing
/// [`BarrierParams`] for any center and radius `r ≤ r0`.
#[derive(Clone, Debug)]
pub struct ConstantSelection {
    pub gamma_star: f64,
    pub alpha0: f64,
    pub m: f64,
    pub r0: f64,
    pub k_target: f64,
}

impl ConstantSelection {
    pub fn params(&self, ybar: Vec<f64>, r: f64) -> Result<BarrierParams> {
        if !(r > 0.0 && r <= self.r0 && r <= 1.0) {
            return Err(LabError::Contract(format!(
                "barrier radius must satisfy 0 < r ≤ r0 = {:.4e} (and ≤ 1), got {r}",
                self.r0
            )));
        }
        Ok(BarrierParams {
            alpha: self.gamma_star / (r * r),
            ybar,
            r,
            gamma_star: self.gamma_star,
            r0: self.r0,
            m: self.m,
            k_target: self.k_target,
        })
    }
}

/// `γ* = (4/λ)(‖Tr Q‖ + (3/2)‖b‖)`, the exponent the barrier is built on.
pub fn gamma_star(inputs: &BarrierInputs) -> f64 {
    4.0 / inputs.lambda * (inputs.trace_q_sup + 1.5 * inputs.b_norm_sup)
}

/// Chooses `γ*`, then doubles `M` and `α` until the evaluated lower bound
/// `α { γ*/(2λ) e^{−9γ*/4} − n(M√(γ*/α)) − 2(√γ*/(2√α) + 3/(2M) +
/// e^{−M²γ*/4}) ‖N‖ }` exceeds `K + 2‖N‖ + ‖c‖`; `r0 = √(γ*/α0)`. The
/// doubling is capped at 2^40 and fails loudly rather than returning a
/// vacuous radius.
pub fn choose_constants(inputs: &BarrierInputs, k_target: f64) -> Result<ConstantSelection> {
    if inputs.lambda <= 0.0 {
        return Err(LabError::Ellipticity(
            "barrier selection needs λ > 0".into(),
        ));
    }
    let gamma = gamma_star(inputs);
    if gamma <= 0.0 {
        return Err(LabError::ConstantSelection("γ* must be positive".into()));
    }
    // Dini check: the small-ball modulus must vanish toward zero radius
    let n_tiny = inputs.kernel.small_ball_mass(inputs.dim, 1e-9);
    if n_tiny > 1e-12 * (1.0 + inputs.n_total) {
        return Err(LabError::ConstantSelection(format!(
            "kernel modulus n(r) does not decay near zero (n(1e-9) = {n_tiny:.3e}); \
             the Dini condition fails"
        )));
    }
    let need = k_target + 2.0 * inputs.n_total + inputs.c_sup;
    let diffusion_gain = gamma / (2.0 * inputs.lambda) * (-2.25 * gamma).exp();
    let cap = 2.0_f64.powi(40);
    let mut m = 16.0;
    while m <= cap {
        let mut alpha = (gamma.max(1.0)) * 2.0;
        while alpha <= cap {
            let small_jump = inputs
                .kernel
                .small_ball_mass(inputs.dim, m * (gamma / alpha).sqrt());
            let tail = 2.0
                * (gamma.sqrt() / (2.0 * alpha.sqrt()) + 1.5 / m + (-m * m * gamma / 4.0).exp())
                * inputs.n_total;
            let lower = alpha * (diffusion_gain - small_jump - tail);
            if lower >= need {
                return Ok(ConstantSelection {
                    gamma_star: gamma,
                    alpha0: alpha,
                    m,
                    r0: (gamma / alpha).sqrt().min(1.0),
                    k_target,
                });
            }
            alpha *= 2.0;
        }
        m *= 2.0;
    }
    Err(LabError::ConstantSelection(format!(
        "doubling search exhausted (cap 2^40) without reaching K = {k_target}; \
         the kernel mass ‖N‖ = {} may be too large for this ellipticity",
        inputs.n_total
    )))
}

/// Sampling density for barrier verification: a lattice of about
/// `per_unit` points per unit length per axis (never fewer than
/// `min_per_axis` across the annulus) plus quasi-random interior points.
#[derive(Clone, Copy, Debug)]
pub struct BarrierSampling {
    pub per_unit: usize,
    pub min_per_axis: usize,
    pub quasi_random: usize,
}

impl Default for BarrierSampling {
    fn default() -> Self {
        BarrierSampling {
            per_unit: 32,
            min_per_axis: 17,
            quasi_random: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BarrierVerification {
    pub margin: f64,
    pub worst_point: Vec<f64>,
    pub k_target: f64,
    pub passed: bool,
    /// Sampled `(x, (A−c)η(x))` pairs for the emitted artifacts.
    pub samples: Vec<(Vec<f64>, f64)>,
}

/// Samples `(A − c) η` over the annulus `V^*(ȳ, r)` and reports the
/// minimum; PASS when it stays above `K − tol`.
pub fn verify_barrier(
    op: &OperatorSpec,
    params: &BarrierParams,
    sampling: &BarrierSampling,
    quad: &QuadratureConfig,
) -> Result<BarrierVerification> {
    let d = op.dim();
    let eta = params.eta();
    let (_v_star, v_up) = annuli(&params.ybar, params.r);
    let span = 3.0 * params.r;
    let n_axis = ((sampling.per_unit as f64 * span).ceil() as usize).max(sampling.min_per_axis);
    let lo: Vec<f64> = params.ybar.iter().map(|c| c - 1.5 * params.r).collect();

    let mut samples = Vec::new();
    let mut margin = f64::INFINITY;
    let mut worst = vec![0.0; d];
    let mut eval = |x: &[f64]| -> Result<()> {
        if !v_up.contains(x) {
            return Ok(());
        }
        let v = op.apply(&eta, x, quad)? - op.coeffs.c.eval(x) * eta.value(x);
        samples.push((x.to_vec(), v));
        if v < margin {
            margin = v;
            worst.copy_from_slice(x);
        }
        Ok(())
    };

    let mut x = vec![0.0; d];
    let mut idx = vec![0usize; d];
    loop {
        for i in 0..d {
            x[i] = lo[i] + span * idx[i] as f64 / (n_axis - 1) as f64;
        }
        eval(&x)?;
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < n_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d {
                break;
            }
        }
        if k == d {
            break;
        }
    }
    let mut p = vec![0.0; d];
    for i in 0..sampling.quasi_random {
        halton(i, d, &mut p);
        for j in 0..d {
            x[j] = lo[j] + span * p[j];
        }
        eval(&x)?;
    }
    if samples.is_empty() {
        return Err(LabError::Contract(
            "annulus produced no sample points".into(),
        ));
    }
    let tol = 1e-9 * (1.0 + params.k_target.abs());
    Ok(BarrierVerification {
        margin,
        worst_point: worst,
        k_target: params.k_target,
        passed: margin >= params.k_target - tol,
        samples,
    })
}

/// Exterior Dirichlet barrier `ψ(x) = scale (r^{−σ} − |x−y₀|^{−σ})` on the
/// shell `r/10 < |x−y₀| < m_out`, clamped flat outside it.
#[derive(Clone, Debug)]
pub struct ExteriorBarrier {
    pub dim: usize,
    pub y0: Vec<f64>,
    pub r: f64,
    pub sigma: f64,
    pub scale: f64,
    pub m_out: f64,
}

impl ExteriorBarrier {
    fn rho(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.y0)
            .map(|(a, c)| (a - c) * (a - c))
            .sum::<f64>()
            .sqrt()
    }

    fn clamped(&self, rho: f64) -> f64 {
        rho.clamp(self.r / 10.0, self.m_out)
    }
}

impl SmoothField for ExteriorBarrier {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let rho = self.clamped(self.rho(x));
        self.scale * (self.r.powf(-self.sigma) - rho.powf(-self.sigma))
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let rho = self.rho(x);
        if rho <= self.r / 10.0 || rho >= self.m_out {
            out.fill(0.0);
            return;
        }
        let c = self.scale * self.sigma * rho.powf(-self.sigma - 2.0);
        for i in 0..self.dim {
            out[i] = c * (x[i] - self.y0[i]);
        }
    }

    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let rho = self.rho(x);
        if rho <= self.r / 10.0 || rho >= self.m_out {
            out.fill(0.0);
            return;
        }
        let c = self.scale * self.sigma;
        let p2 = rho.powf(-self.sigma - 2.0);
        let p4 = (self.sigma + 2.0) * rho.powf(-self.sigma - 4.0);
        for i in 0..d {
            for j in 0..d {
                let xi = x[i] - self.y0[i];
                let xj = x[j] - self.y0[j];
                let mut v = -c * p4 * xi * xj;
                if i == j {
                    v += c * p2;
                }
                out[i * d + j] = v;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExteriorBarrierReport {
    pub min_neg_a_psi: f64,
    pub worst_point: Vec<f64>,
    pub passed: bool,
}

/// Samples `−A ψ` over `D`; the barrier certifies Dirichlet regularity when
/// it stays nonnegative.
pub fn verify_exterior_barrier(
    op: &OperatorSpec,
    psi: &ExteriorBarrier,
    dom: &DomainSpec,
    n_samples: usize,
    quad: &QuadratureConfig,
) -> Result<ExteriorBarrierReport> {
    let d = op.dim();
    let (lo, hi) = dom.bounding_box();
    let mut worst = f64::INFINITY;
    let mut worst_point = vec![0.0; d];
    let mut p = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut used = 0;
    for i in 0..n_samples * 4 {
        if used >= n_samples {
            break;
        }
        halton(i, d, &mut p);
        for j in 0..d {
            x[j] = lo[j] + (hi[j] - lo[j]) * p[j];
        }
        if !dom.contains(&x) {
            continue;
        }
        used += 1;
        let v = -op.apply(psi, &x, quad)?;
        if v < worst {
            worst = v;
            worst_point.copy_from_slice(&x);
        }
    }
    if used == 0 {
        return Err(LabError::Contract(
            "no interior samples for exterior barrier".into(),
        ));
    }
    Ok(ExteriorBarrierReport {
        min_neg_a_psi: worst,
        worst_point,
        passed: worst >= -1e-9,
    })
}

/// Table `ρ(r) = inf over grid nodes of w on D_r`, nondecreasing in `r` and
/// valued in [0,1]. Radii that empty the shrunken set inherit the last
/// nonempty value.
pub fn rho_modulus(
    w: &[f64],
    grid: &Grid,
    dom: &DomainSpec,
    r_values: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if w.len() != grid.n_interior() {
        return Err(LabError::Contract(
            "gauge vector does not match the grid".into(),
        ));
    }
    let mut rs: Vec<f64> = r_values.to_vec();
    rs.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(rs.len());
    let mut x = vec![0.0; grid.dim];
    let mut last = 0.0_f64;
    for &r in &rs {
        let mut inf = f64::INFINITY;
        for k in 0..grid.n_interior() {
            grid.position_of_flat(grid.interior[k], &mut x);
            if dom.delta_d(&x) > r {
                inf = inf.min(w[k]);
            }
        }
        let val = if inf.is_finite() { inf } else { last };
        let val = val.max(last); // enforce the nondecreasing convention
        out.push((r, val.clamp(0.0, 1.0)));
        last = val;
    }
    Ok(out)
}

/// Exit-probability bound from the Gaussian test function
/// `ρ(x) = exp(−|x−x̄|²/r²)`: `P(τ_B ≤ t) ≤ (t/a) sup_B (Aρ)⁻` with
/// `a = inf_{B^c} (1−ρ) = 1 − e^{−1}`, and the derived constant
/// `a* = max_t (1 − e^{−c̲ t})(1 − bound(t))`.
#[derive(Clone, Debug)]
pub struct ExitBound {
    pub bound_at_t: f64,
    pub sup_neg_a_rho: f64,
    pub a_floor: f64,
    pub a_star: f64,
    pub t_star: f64,
    pub vacuous: bool,
}

pub fn exit_probability_bound(
    op: &OperatorSpec,
    xbar: &[f64],
    r: f64,
    t: f64,
    c_lower: f64,
    quad: &QuadratureConfig,
) -> Result<ExitBound> {
    if r <= 0.0 || t < 0.0 {
        return Err(LabError::Contract("need r > 0 and t ≥ 0".into()));
    }
    let d = op.dim();
    let rho = RadialExpField {
        dim: d,
        center: xbar.to_vec(),
        alpha: 1.0 / (r * r),
        amp: 1.0,
        offset: 0.0,
    };
    let a_floor = 1.0 - (-1.0_f64).exp();
    // sup of (Aρ)⁻ over the ball by lattice + quasi-random sampling
    let mut sup_neg = 0.0_f64;
    let mut x = vec![0.0; d];
    let mut p = vec![0.0; d];
    let n_axis = 13;
    let mut idx = vec![0usize; d];
    loop {
        let mut n2 = 0.0;
        for i in 0..d {
            x[i] = xbar[i] - r + 2.0 * r * idx[i] as f64 / (n_axis - 1) as f64;
            let tdx = x[i] - xbar[i];
            n2 += tdx * tdx;
        }
        if n2 < r * r {
            sup_neg = sup_neg.max(-op.apply(&rho, &x, quad)?);
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < n_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d {
                break;
            }
        }
        if k == d {
            break;
        }
    }
    for i in 0..512 {
        halton(i, d, &mut p);
        let mut n2 = 0.0;
        for j in 0..d {
            x[j] = xbar[j] + r * (2.0 * p[j] - 1.0);
            let tdx = x[j] - xbar[j];
            n2 += tdx * tdx;
        }
        if n2 < r * r {
            sup_neg = sup_neg.max(-op.apply(&rho, &x, quad)?);
        }
    }

    let bound = |tt: f64| tt * sup_neg / a_floor;
    let mut a_star = 0.0_f64;
    let mut t_star = 0.0_f64;
    for k in 0..280 {
        let tt = 10.0_f64.powf(-12.0 + 14.0 * k as f64 / 279.0);
        let val = (1.0 - (-c_lower * tt).exp()) * (1.0 - bound(tt));
        if val > a_star {
            a_star = val;
            t_star = tt;
        }
    }
    Ok(ExitBound {
        bound_at_t: bound(t),
        sup_neg_a_rho: sup_neg,
        a_floor,
        a_star: a_star.max(0.0),
        t_star,
        vacuous: a_star <= 0.0,
    })
}
