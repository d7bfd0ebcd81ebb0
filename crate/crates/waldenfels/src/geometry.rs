//! Bounded domains and the geometric queries the theorem checks need:
//! distance to the complement, interior/exterior tangent balls, generalized
//! outward normals, kernel reachable sets, shrunken domains, annuli, and
//! lower outward normal derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::field::ScalarFn;
use crate::operator::LevyKernelSpec;

#[derive(Clone)]
pub enum DomainVariant {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Annulus {
        center: Vec<f64>,
        r_in: f64,
        r_out: f64,
    },
    /// Signed-distance oracle from the registry: negative inside, positive
    /// outside, 1-Lipschitz (possibly only distance-like, not the exact
    /// distance).
    Implicit {
        name: String,
        sd: ScalarFn,
        bbox: (Vec<f64>, Vec<f64>),
    },
}

impl fmt::Debug for DomainVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainVariant::Ball { center, radius } => write!(f, "Ball({center:?}, {radius})"),
            DomainVariant::Box { lo, hi } => write!(f, "Box({lo:?}, {hi:?})"),
            DomainVariant::Annulus {
                center,
                r_in,
                r_out,
            } => {
                write!(f, "Annulus({center:?}, {r_in}, {r_out})")
            }
            DomainVariant::Implicit { name, bbox, .. } => {
                write!(f, "Implicit({name}, bbox={bbox:?})")
            }
        }
    }
}

/// A bounded open set with a signed-distance query. Analytic variants carry
/// the exact distance.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    pub dim: usize,
    pub variant: DomainVariant,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

impl DomainSpec {
    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        let dim = center.len();
        DomainSpec {
            dim,
            variant: DomainVariant::Ball { center, radius },
        }
    }

    pub fn boxdom(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        let dim = lo.len();
        DomainSpec {
            dim,
            variant: DomainVariant::Box { lo, hi },
        }
    }

    pub fn annulus(center: Vec<f64>, r_in: f64, r_out: f64) -> Self {
        let dim = center.len();
        DomainSpec {
            dim,
            variant: DomainVariant::Annulus {
                center,
                r_in,
                r_out,
            },
        }
    }

    pub fn implicit(
        name: impl Into<String>,
        dim: usize,
        sd: ScalarFn,
        bbox: (Vec<f64>, Vec<f64>),
    ) -> Self {
        DomainSpec {
            dim,
            variant: DomainVariant::Implicit {
                name: name.into(),
                sd,
                bbox,
            },
        }
    }

    /// Signed distance: negative inside, positive outside, zero on the
    /// boundary.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match &self.variant {
            DomainVariant::Ball { center, radius } => {
                let mut n2 = 0.0;
                for i in 0..self.dim {
                    let t = x[i] - center[i];
                    n2 += t * t;
                }
                n2.sqrt() - radius
            }
            DomainVariant::Box { lo, hi } => {
                let mut out2 = 0.0;
                let mut inside = f64::NEG_INFINITY;
                for i in 0..self.dim {
                    let q = (lo[i] - x[i]).max(x[i] - hi[i]);
                    if q > 0.0 {
                        out2 += q * q;
                    }
                    inside = inside.max(q);
                }
                if out2 > 0.0 {
                    out2.sqrt()
                } else {
                    inside
                }
            }
            DomainVariant::Annulus {
                center,
                r_in,
                r_out,
            } => {
                let mut n2 = 0.0;
                for i in 0..self.dim {
                    let t = x[i] - center[i];
                    n2 += t * t;
                }
                let rho = n2.sqrt();
                (rho - r_out).max(r_in - rho)
            }
            DomainVariant::Implicit { sd, .. } => sd(x),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.signed_distance(x) < 0.0
    }

    /// `δ_D(x) = dist(x, D^c)`; zero outside `D`.
    pub fn delta_d(&self, x: &[f64]) -> f64 {
        (-self.signed_distance(x)).max(0.0)
    }

    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.variant {
            DomainVariant::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            DomainVariant::Box { lo, hi } => (lo.clone(), hi.clone()),
            DomainVariant::Annulus { center, r_out, .. } => (
                center.iter().map(|c| c - r_out).collect(),
                center.iter().map(|c| c + r_out).collect(),
            ),
            DomainVariant::Implicit { bbox, .. } => bbox.clone(),
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        norm(&lo.iter().zip(&hi).map(|(a, b)| b - a).collect::<Vec<_>>())
    }

    /// Radius of the largest ball around the deepest sampled interior point;
    /// exact for the analytic variants.
    pub fn inradius(&self) -> f64 {
        match &self.variant {
            DomainVariant::Ball { radius, .. } => *radius,
            DomainVariant::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| (b - a) / 2.0)
                .fold(f64::INFINITY, f64::min),
            DomainVariant::Annulus { r_in, r_out, .. } => (r_out - r_in) / 2.0,
            DomainVariant::Implicit { .. } => {
                let (lo, hi) = self.bounding_box();
                let n = 33;
                let d = self.dim;
                let mut best = 0.0_f64;
                let mut idx = vec![0usize; d];
                let mut x = vec![0.0; d];
                loop {
                    for i in 0..d {
                        x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] as f64 / (n - 1) as f64;
                    }
                    best = best.max(self.delta_d(&x));
                    let mut k = 0;
                    loop {
                        idx[k] += 1;
                        if idx[k] < n {
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
                best
            }
        }
    }

    /// Outward direction estimate at a point near the boundary, from the
    /// signed-distance gradient (central differences for implicit domains,
    /// closed forms otherwise).
    pub fn outward_direction(&self, x: &[f64]) -> Vec<f64> {
        match &self.variant {
            DomainVariant::Ball { center, .. } | DomainVariant::Annulus { center, .. } => {
                let mut v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let n = norm(&v);
                if n < 1e-14 {
                    v[0] = 1.0;
                    return v;
                }
                if let DomainVariant::Annulus {
                    center,
                    r_in,
                    r_out,
                } = &self.variant
                {
                    let rho = n;
                    // inner boundary points outward toward the hole
                    if (rho - r_in).abs() < (rho - r_out).abs() {
                        return v.iter().map(|t| -t / n).collect();
                    }
                    let _ = center;
                }
                v.iter().map(|t| t / n).collect()
            }
            _ => {
                let d = self.dim;
                let h = 1e-6;
                let mut g = vec![0.0; d];
                let mut xp = x.to_vec();
                for i in 0..d {
                    xp[i] = x[i] + h;
                    let fp = self.signed_distance(&xp);
                    xp[i] = x[i] - h;
                    let fm = self.signed_distance(&xp);
                    xp[i] = x[i];
                    g[i] = (fp - fm) / (2.0 * h);
                }
                let n = norm(&g);
                if n < 1e-12 {
                    g[0] = 1.0;
                } else {
                    for v in g.iter_mut() {
                        *v /= n;
                    }
                }
                g
            }
        }
    }

    /// Nearest boundary point (projection along the outward direction).
    pub fn project_to_boundary(&self, x: &[f64]) -> Vec<f64> {
        let s = self.signed_distance(x);
        let n = self.outward_direction(x);
        x.iter().zip(&n).map(|(a, v)| a - s * v).collect()
    }
}

/// Certification density used when sampling candidate tangent balls.
#[derive(Clone, Copy, Debug)]
pub struct BallResolution {
    /// Points sampled on the candidate ball boundary.
    pub boundary_samples: usize,
    /// Bisection steps on the radius.
    pub bisection_steps: usize,
    /// Containment slack for the oracle values.
    pub tol: f64,
}

impl Default for BallResolution {
    fn default() -> Self {
        BallResolution {
            boundary_samples: 256,
            bisection_steps: 40,
            tol: 1e-9,
        }
    }
}

fn sphere_dirs(d: usize, n: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        _ => {
            // Fibonacci sphere for d = 3
            let mut out = Vec::with_capacity(n);
            let ga = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
            for k in 0..n {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let th = ga * k as f64;
                out.push(vec![r * th.cos(), r * th.sin(), z]);
            }
            out
        }
    }
}

/// Checks `B(center, r) ⊆ D` by sampling the ball boundary and a few
/// interior shells.
fn ball_inside(dom: &DomainSpec, center: &[f64], r: f64, res: &BallResolution) -> bool {
    if dom.signed_distance(center) >= -res.tol {
        return false;
    }
    let dirs = sphere_dirs(dom.dim, res.boundary_samples);
    let mut y = vec![0.0; dom.dim];
    for frac in [1.0, 0.75, 0.5] {
        for dir in &dirs {
            for i in 0..dom.dim {
                y[i] = center[i] + frac * r * dir[i];
            }
            if dom.signed_distance(&y) > res.tol {
                return false;
            }
        }
    }
    true
}

fn ball_outside(dom: &DomainSpec, center: &[f64], r: f64, res: &BallResolution) -> bool {
    if dom.signed_distance(center) <= res.tol {
        return false;
    }
    let dirs = sphere_dirs(dom.dim, res.boundary_samples);
    let mut y = vec![0.0; dom.dim];
    for frac in [1.0, 0.75, 0.5] {
        for dir in &dirs {
            for i in 0..dom.dim {
                y[i] = center[i] + frac * r * dir[i];
            }
            if dom.signed_distance(&y) < -res.tol {
                return false;
            }
        }
    }
    true
}

/// `𝔯(x̂) ∈ [0,1]`: the largest radius ≤ 1 of a ball inside `D` tangent at
/// the boundary point `x̂`. Closed forms for the analytic variants;
/// bisection along the inward normal for implicit domains. Returns 0 when
/// no interior ball is found at the resolution.
pub fn interior_ball_radius(dom: &DomainSpec, xhat: &[f64], res: &BallResolution) -> Result<f64> {
    let sd = dom.signed_distance(xhat);
    if sd.abs() > 1e-6 {
        return Err(LabError::Geometry(format!(
            "point is not on the boundary (signed distance {sd:.3e})"
        )));
    }
    match &dom.variant {
        DomainVariant::Ball { radius, .. } => Ok(radius.min(1.0)),
        DomainVariant::Box { lo, hi } => {
            // tangent ball at a face point: limited by the distances to the
            // other faces; zero at edges and corners
            let d = dom.dim;
            let mut face_axis = None;
            for i in 0..d {
                if (xhat[i] - lo[i]).abs() < 1e-9 || (xhat[i] - hi[i]).abs() < 1e-9 {
                    if face_axis.is_some() {
                        return Ok(0.0); // edge or corner
                    }
                    face_axis = Some(i);
                }
            }
            let Some(axis) = face_axis else {
                return Err(LabError::Geometry(
                    "box boundary point off every face".into(),
                ));
            };
            let mut r = (hi[axis] - lo[axis]).min(1.0);
            for i in 0..d {
                if i != axis {
                    r = r.min(xhat[i] - lo[i]).min(hi[i] - xhat[i]);
                }
            }
            Ok(r.clamp(0.0, 1.0))
        }
        DomainVariant::Annulus {
            center,
            r_in,
            r_out,
        } => {
            let rho = norm(
                &xhat
                    .iter()
                    .zip(center)
                    .map(|(a, c)| a - c)
                    .collect::<Vec<_>>(),
            );
            let half = (r_out - r_in) / 2.0;
            if (rho - r_out).abs() < (rho - r_in).abs() {
                Ok(half.min(1.0))
            } else {
                // tangent to the inner boundary: limited by curvature and width
                Ok(half.min(1.0))
            }
        }
        DomainVariant::Implicit { .. } => {
            let n = dom.outward_direction(xhat);
            let mut lo_r = 0.0;
            let mut hi_r = 1.0;
            let mut center = vec![0.0; dom.dim];
            let mut feasible = |r: f64| {
                for i in 0..dom.dim {
                    center[i] = xhat[i] - r * n[i];
                }
                ball_inside(dom, &center, r * (1.0 - 1e-7), res)
            };
            if !feasible(1e-4) {
                return Ok(0.0);
            }
            for _ in 0..res.bisection_steps {
                let mid = 0.5 * (lo_r + hi_r);
                if feasible(mid) {
                    lo_r = mid;
                } else {
                    hi_r = mid;
                }
            }
            Ok(lo_r)
        }
    }
}

/// Generalized unit outward normals `n = (x̂ − y)/r` over found interior
/// balls `B(y, r)` tangent at `x̂`. A single vector for the smooth variants;
/// a direction sweep for implicit domains. Empty when the interior ball
/// condition fails at `x̂`.
pub fn generalized_normals(
    dom: &DomainSpec,
    xhat: &[f64],
    res: &BallResolution,
) -> Result<Vec<Vec<f64>>> {
    match &dom.variant {
        DomainVariant::Ball { .. } | DomainVariant::Annulus { .. } => {
            Ok(vec![dom.outward_direction(xhat)])
        }
        DomainVariant::Box { .. } => {
            if interior_ball_radius(dom, xhat, res)? > 0.0 {
                Ok(vec![dom.outward_direction(xhat)])
            } else {
                Ok(vec![])
            }
        }
        DomainVariant::Implicit { .. } => {
            let d = dom.dim;
            let dirs = sphere_dirs(d, if d == 1 { 2 } else { 64 });
            let mut found: Vec<Vec<f64>> = Vec::new();
            let mut center = vec![0.0; d];
            for m in &dirs {
                // try a tangent ball with inward direction -m
                let mut lo_r = 0.0;
                let mut hi_r = 1.0;
                let mut feasible = |r: f64| {
                    for i in 0..d {
                        center[i] = xhat[i] - r * m[i];
                    }
                    ball_inside(dom, &center, r * (1.0 - 1e-6), res)
                };
                if !feasible(1e-3) {
                    continue;
                }
                for _ in 0..res.bisection_steps / 2 {
                    let mid = 0.5 * (lo_r + hi_r);
                    if feasible(mid) {
                        lo_r = mid;
                    } else {
                        hi_r = mid;
                    }
                }
                if lo_r > 1e-3 {
                    found.push(m.clone());
                }
            }
            Ok(found)
        }
    }
}

/// A tangent exterior ball at `x̂`, when one exists at the resolution.
pub fn exterior_ball(
    dom: &DomainSpec,
    xhat: &[f64],
    res: &BallResolution,
) -> Result<Option<(Vec<f64>, f64)>> {
    let n = dom.outward_direction(xhat);
    let d = dom.dim;
    let mut center = vec![0.0; d];
    let mut best = 0.0_f64;
    let mut feasible = |r: f64| {
        for i in 0..d {
            center[i] = xhat[i] + r * n[i];
        }
        ball_outside(dom, &center, r * (1.0 - 1e-7), res)
    };
    let mut lo_r = 0.0;
    let mut hi_r = 1.0;
    if feasible(1e-4) {
        for _ in 0..res.bisection_steps {
            let mid = 0.5 * (lo_r + hi_r);
            if feasible(mid) {
                lo_r = mid;
            } else {
                hi_r = mid;
            }
        }
        best = lo_r;
    }
    if best <= 1e-4 {
        return Ok(None);
    }
    let c = xhat.iter().zip(&n).map(|(a, v)| a + best * v).collect();
    Ok(Some((c, best)))
}

/// Membership in `𝒮(D) ∪ D̄` where `𝒮(D)` is over-approximated by the
/// Minkowski sum of `D` with the kernel's support ball (exact for atomic
/// kernels).
pub fn reachable_set_contains(dom: &DomainSpec, kernel: &LevyKernelSpec, z: &[f64]) -> bool {
    let sd = dom.signed_distance(z);
    if sd <= 0.0 {
        return true;
    }
    match kernel {
        LevyKernelSpec::Zero => false,
        LevyKernelSpec::FiniteActivity {
            density: crate::operator::DisplacementDensity::Atoms(atoms),
            ..
        } => {
            // exact: z ∈ S(D) iff z - y ∈ D for some atom y
            let d = dom.dim;
            let mut w = vec![0.0; d];
            atoms.iter().any(|(y, wt)| {
                if *wt <= 0.0 {
                    return false;
                }
                for i in 0..d {
                    w[i] = z[i] - y[i];
                }
                dom.signed_distance(&w) < 0.0
            })
        }
        k => sd <= k.support_radius(),
    }
}

/// `D_r = {x ∈ D : dist(x, ∂D) > r}`. Returns `None` when the shrunken set
/// is empty at the given `r`.
pub fn shrink(dom: &DomainSpec, r: f64) -> Option<DomainSpec> {
    if r >= dom.inradius() {
        return None;
    }
    Some(match &dom.variant {
        DomainVariant::Ball { center, radius } => DomainSpec::ball(center.clone(), radius - r),
        DomainVariant::Box { lo, hi } => DomainSpec::boxdom(
            lo.iter().map(|v| v + r).collect(),
            hi.iter().map(|v| v - r).collect(),
        ),
        DomainVariant::Annulus {
            center,
            r_in,
            r_out,
        } => DomainSpec::annulus(center.clone(), r_in + r, r_out - r),
        DomainVariant::Implicit { name, sd, bbox } => {
            let inner = sd.clone();
            DomainSpec::implicit(
                format!("{name}-shrunk"),
                dom.dim,
                Arc::new(move |x: &[f64]| inner(x) + r),
                bbox.clone(),
            )
        }
    })
}

/// The annuli `V_* = B(ȳ,r) \ B̄(ȳ,r/2)` and `V^* = B(ȳ,3r/2) \ B̄(ȳ,r/2)`.
pub fn annuli(ybar: &[f64], r: f64) -> (DomainSpec, DomainSpec) {
    (
        DomainSpec::annulus(ybar.to_vec(), r / 2.0, r),
        DomainSpec::annulus(ybar.to_vec(), r / 2.0, 1.5 * r),
    )
}

/// Result of the lower-outward-normal-derivative proxy: a finite minimum of
/// difference quotients over a geometric `h`-grid (ratio 1/2 from `h_max`
/// down to `h_min`), recorded for the report. A stated proxy for the
/// liminf, not the liminf itself.
#[derive(Clone, Debug)]
pub struct NormalDerivative {
    pub value: f64,
    pub h_grid: Vec<f64>,
    pub quotients: Vec<f64>,
}

pub fn lower_normal_derivative(
    u: &dyn Fn(&[f64]) -> f64,
    dom: &DomainSpec,
    xhat: &[f64],
    n: &[f64],
    h_min: f64,
    h_max: f64,
) -> Result<NormalDerivative> {
    if h_min <= 0.0 || h_max < h_min {
        return Err(LabError::Contract("need 0 < h_min <= h_max".into()));
    }
    let d = dom.dim;
    let u_hat = u(xhat);
    let mut h = h_max;
    let mut grid = Vec::new();
    let mut quotients = Vec::new();
    let mut x = vec![0.0; d];
    while h >= h_min {
        for i in 0..d {
            x[i] = xhat[i] - h * n[i];
        }
        if dom.contains(&x) {
            grid.push(h);
            quotients.push((u_hat - u(&x)) / h);
        }
        h *= 0.5;
    }
    if quotients.is_empty() {
        return Err(LabError::Geometry(
            "no admissible step: x̂ − h n never lands in D on the h-grid".into(),
        ));
    }
    let value = quotients.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(NormalDerivative {
        value,
        h_grid: grid,
        quotients,
    })
}

/// Registry of named built-in signed-distance functions for implicit
/// domains.
///
/// * `spike`: `{0 < x_1 < 1, |x_2| < x_1²/2}`, a power cusp at the origin —
///   interior and exterior ball conditions hold pointwise but not uniformly.
/// * `disc-minus-wedge`: unit disc minus the convex wedge `{x_1 ≥ |x_2|}` —
///   the wedge vertex admits a whole family of tangent interior balls.
/// * `disc-minus-cusp`: unit disc minus the parabolic sliver
///   `{x_1 ≥ 0, |x_2| ≤ x_1²/2}` — no exterior ball at the sliver tip.
pub fn implicit_registry(name: &str) -> Result<DomainSpec> {
    match name {
        "spike" => Ok(DomainSpec::implicit(
            "spike",
            2,
            Arc::new(|x: &[f64]| {
                let wall = (x[1].abs() - x[0] * x[0] / 2.0) / 1.5;
                wall.max(-x[0]).max(x[0] - 1.0)
            }),
            (vec![0.0, -0.75], vec![1.0, 0.75]),
        )),
        "disc-minus-wedge" => Ok(DomainSpec::implicit(
            "disc-minus-wedge",
            2,
            Arc::new(|x: &[f64]| {
                let disc = norm(x) - 1.0;
                let u = (x[0] - x[1]) / 2.0_f64.sqrt();
                let v = (x[0] + x[1]) / 2.0_f64.sqrt();
                let wedge = if u >= 0.0 && v >= 0.0 {
                    -u.min(v)
                } else {
                    (u.min(0.0).powi(2) + v.min(0.0).powi(2)).sqrt()
                };
                disc.max(-wedge)
            }),
            (vec![-1.0, -1.0], vec![1.0, 1.0]),
        )),
        "disc-minus-cusp" => Ok(DomainSpec::implicit(
            "disc-minus-cusp",
            2,
            Arc::new(|x: &[f64]| {
                let disc = norm(x) - 1.0;
                let sliver = if x[0] <= 0.0 {
                    norm(x)
                } else {
                    (x[1].abs() - x[0] * x[0] / 2.0).max(0.0) / 1.5
                };
                disc.max(-sliver)
            }),
            (vec![-1.0, -1.0], vec![1.0, 1.0]),
        )),
        other => Err(LabError::Contract(format!(
            "unknown implicit domain '{other}'; valid names: spike, disc-minus-wedge, disc-minus-cusp"
        ))),
    }
}
