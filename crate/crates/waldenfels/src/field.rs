//! Scalar fields with derivative oracles, coefficient entries with recorded
//! sup norms, and the registry of named built-in functions used by text
//! configurations.

use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VecFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// A scalar coefficient: either a constant or a named callable with a
/// recorded sup norm. Sup norms are always supplied, never inferred from
/// samples.
#[derive(Clone)]
pub enum ScalarCoeff {
    Const(f64),
    Named { name: String, f: ScalarFn, sup: f64 },
}

impl ScalarCoeff {
    pub fn constant(v: f64) -> Self {
        ScalarCoeff::Const(v)
    }

    pub fn named(name: impl Into<String>, sup: f64, f: ScalarFn) -> Self {
        ScalarCoeff::Named {
            name: name.into(),
            f,
            sup,
        }
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ScalarCoeff::Const(v) => *v,
            ScalarCoeff::Named { f, .. } => f(x),
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            ScalarCoeff::Const(v) => v.abs(),
            ScalarCoeff::Named { sup, .. } => *sup,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self, ScalarCoeff::Const(v) if *v == 0.0)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            ScalarCoeff::Const(v) => Some(*v),
            ScalarCoeff::Named { .. } => None,
        }
    }
}

impl fmt::Debug for ScalarCoeff {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarCoeff::Const(v) => write!(fm, "Const({v})"),
            ScalarCoeff::Named { name, sup, .. } => write!(fm, "Named({name}, sup={sup})"),
        }
    }
}

/// A vector coefficient (drift); `sup[i]` records the per-component sup norm.
#[derive(Clone)]
pub enum VectorCoeff {
    Const(Vec<f64>),
    Named {
        name: String,
        f: VecFn,
        sup: Vec<f64>,
    },
}

impl VectorCoeff {
    pub fn constant(v: Vec<f64>) -> Self {
        VectorCoeff::Const(v)
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            VectorCoeff::Const(v) => out.copy_from_slice(v),
            VectorCoeff::Named { f, .. } => f(x, out),
        }
    }

    pub fn sup(&self) -> Vec<f64> {
        match self {
            VectorCoeff::Const(v) => v.iter().map(|t| t.abs()).collect(),
            VectorCoeff::Named { sup, .. } => sup.clone(),
        }
    }

    pub fn as_const(&self) -> Option<&[f64]> {
        match self {
            VectorCoeff::Const(v) => Some(v),
            VectorCoeff::Named { .. } => None,
        }
    }
}

impl fmt::Debug for VectorCoeff {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorCoeff::Const(v) => write!(fm, "Const({v:?})"),
            VectorCoeff::Named { name, .. } => write!(fm, "Named({name})"),
        }
    }
}

/// A matrix coefficient (diffusion), row-major `d*d`; `sup[i*d+j]` records
/// `sup_x |q_ij(x)|`.
#[derive(Clone)]
pub enum MatrixCoeff {
    Const(Vec<f64>),
    Named {
        name: String,
        f: VecFn,
        sup: Vec<f64>,
    },
}

impl MatrixCoeff {
    pub fn constant(m: Vec<f64>) -> Self {
        MatrixCoeff::Const(m)
    }

    pub fn identity(d: usize) -> Self {
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            m[i * d + i] = 1.0;
        }
        MatrixCoeff::Const(m)
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            MatrixCoeff::Const(m) => out.copy_from_slice(m),
            MatrixCoeff::Named { f, .. } => f(x, out),
        }
    }

    pub fn sup(&self) -> Vec<f64> {
        match self {
            MatrixCoeff::Const(m) => m.iter().map(|t| t.abs()).collect(),
            MatrixCoeff::Named { sup, .. } => sup.clone(),
        }
    }

    pub fn as_const(&self) -> Option<&[f64]> {
        match self {
            MatrixCoeff::Const(m) => Some(m),
            MatrixCoeff::Named { .. } => None,
        }
    }
}

impl fmt::Debug for MatrixCoeff {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixCoeff::Const(m) => write!(fm, "Const({m:?})"),
            MatrixCoeff::Named { name, .. } => write!(fm, "Named({name})"),
        }
    }
}

/// A scalar field supplying value, gradient and Hessian oracles. Callers of
/// the operator evaluation routines provide these; no symbolic or automatic
/// differentiation happens anywhere in the crate.
pub trait SmoothField: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// Writes the gradient into `out` (`len == dim`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);
    /// Writes the Hessian into `out`, row-major (`len == dim*dim`).
    fn hessian(&self, x: &[f64], out: &mut [f64]);
}

/// Quadratic field `u(x) = x'Mx + v'x + k` with exact derivative oracles.
#[derive(Clone, Debug)]
pub struct QuadraticField {
    pub dim: usize,
    /// Row-major symmetric matrix `M`.
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub k: f64,
}

impl QuadraticField {
    pub fn squared_norm(dim: usize) -> Self {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1.0;
        }
        QuadraticField {
            dim,
            m,
            v: vec![0.0; dim],
            k: 0.0,
        }
    }

    pub fn constant(dim: usize, k: f64) -> Self {
        QuadraticField {
            dim,
            m: vec![0.0; dim * dim],
            v: vec![0.0; dim],
            k,
        }
    }

    pub fn linear(dim: usize, v: Vec<f64>) -> Self {
        QuadraticField {
            dim,
            m: vec![0.0; dim * dim],
            v,
            k: 0.0,
        }
    }
}

impl SmoothField for QuadraticField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let d = self.dim;
        let mut s = self.k;
        for i in 0..d {
            s += self.v[i] * x[i];
            for j in 0..d {
                s += x[i] * self.m[i * d + j] * x[j];
            }
        }
        s
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            let mut s = self.v[i];
            for j in 0..d {
                s += (self.m[i * d + j] + self.m[j * d + i]) * x[j];
            }
            out[i] = s;
        }
    }

    fn hessian(&self, _x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = self.m[i * d + j] + self.m[j * d + i];
            }
        }
    }
}

/// Field backed by closures; handy in tests and for one-off references.
pub struct FnField {
    pub dim: usize,
    pub value: ScalarFn,
    pub gradient: VecFn,
    pub hessian: VecFn,
}

impl SmoothField for FnField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.gradient)(x, out)
    }
    fn hessian(&self, x: &[f64], out: &mut [f64]) {
        (self.hessian)(x, out)
    }
}

/// Named scalar coefficient functions available to text configurations.
///
/// `bump`: smooth nonnegative bump supported in the unit ball around the
/// origin; `half-support`: indicator-like weight `1` on `{x_1 > 0}`;
/// `one-plus-abs-x1`: `1 + |x_1|`.
pub fn scalar_registry(name: &str, dim: usize) -> Result<ScalarCoeff> {
    let _ = dim;
    match name {
        "zero" => Ok(ScalarCoeff::constant(0.0)),
        "one" => Ok(ScalarCoeff::constant(1.0)),
        "bump" => Ok(ScalarCoeff::named(
            "bump",
            1.0,
            Arc::new(|x: &[f64]| {
                let r2: f64 = x.iter().map(|t| t * t).sum();
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp() * std::f64::consts::E
                } else {
                    0.0
                }
            }),
        )),
        "bump-half" => Ok(ScalarCoeff::named(
            "bump-half",
            1.0,
            Arc::new(|x: &[f64]| {
                let r2: f64 = x.iter().map(|t| 2.0 * t * 2.0 * t).sum();
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp() * std::f64::consts::E
                } else {
                    0.0
                }
            }),
        )),
        "half-support" => Ok(ScalarCoeff::named(
            "half-support",
            1.0,
            Arc::new(|x: &[f64]| if x[0] > 0.0 { 1.0 } else { 0.0 }),
        )),
        "one-plus-abs-x1" => Ok(ScalarCoeff::named(
            "one-plus-abs-x1",
            2.0,
            Arc::new(|x: &[f64]| 1.0 + x[0].abs()),
        )),
        other => Err(LabError::Contract(format!(
            "unknown scalar function '{other}'; valid names: zero, one, bump, bump-half, \
             half-support, one-plus-abs-x1"
        ))),
    }
}

/// Named drift fields. `linear-x` is `b(x) = 0.4 x`, whose formal adjoint
/// carries the extra killing `div b = 0.4 d`; the recorded sup norms cover
/// the bundled domains (all inside `[-2, 2]^d`).
pub fn vector_registry(name: &str, dim: usize) -> Result<VectorCoeff> {
    match name {
        "linear-x" => Ok(VectorCoeff::Named {
            name: "linear-x".into(),
            sup: vec![0.8; dim],
            f: Arc::new(|x: &[f64], out: &mut [f64]| {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = 0.4 * xi;
                }
            }),
        }),
        "neg-linear-x" => Ok(VectorCoeff::Named {
            name: "neg-linear-x".into(),
            sup: vec![0.8; dim],
            f: Arc::new(|x: &[f64], out: &mut [f64]| {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = -0.4 * xi;
                }
            }),
        }),
        other => Err(LabError::Contract(format!(
            "unknown vector function '{other}'; valid names: linear-x, neg-linear-x"
        ))),
    }
}

/// Divergence of a named drift field, when available in closed form.
pub fn vector_divergence(name: &str, dim: usize) -> Option<f64> {
    match name {
        "linear-x" => Some(0.4 * dim as f64),
        "neg-linear-x" => Some(-0.4 * dim as f64),
        _ => None,
    }
}

/// Named diffusion matrices. `diag-one-plusx1` is `diag(1, 1+|x_1|, ...)`;
/// its recorded sup norms cover the bundled domains (inside `[-2, 2]^d`).
pub fn matrix_registry(name: &str, dim: usize) -> Result<MatrixCoeff> {
    match name {
        "identity" => Ok(MatrixCoeff::identity(dim)),
        "diag-one-plusx1" => {
            let d = dim;
            let mut sup = vec![0.0; d * d];
            for i in 0..d {
                sup[i * d + i] = if i == 0 { 1.0 } else { 3.0 };
            }
            Ok(MatrixCoeff::Named {
                name: "diag-one-plusx1".into(),
                sup,
                f: Arc::new(move |x: &[f64], out: &mut [f64]| {
                    out.fill(0.0);
                    out[0] = 1.0;
                    for i in 1..d {
                        out[i * d + i] = 1.0 + x[0].abs();
                    }
                }),
            })
        }
        other => Err(LabError::Contract(format!(
            "unknown matrix function '{other}'; valid names: identity, diag-one-plusx1"
        ))),
    }
}

/// Deterministic low-discrepancy points via the Halton sequence (bases
/// 2, 3, 5); used for quasi-random interior sampling.
pub fn halton(index: usize, dim: usize, out: &mut [f64]) {
    const BASES: [usize; 3] = [2, 3, 5];
    debug_assert!(dim <= BASES.len());
    for (k, slot) in out.iter_mut().take(dim).enumerate() {
        let base = BASES[k];
        let mut f = 1.0;
        let mut r = 0.0;
        let mut i = index + 1;
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        *slot = r;
    }
}

/// Order-independent pairwise summation; used by every estimator reduction
/// so results do not depend on parallel partitioning.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_oracles() {
        let u = QuadraticField::squared_norm(3);
        let x = [1.0, 2.0, -1.0];
        assert_eq!(u.value(&x), 6.0);
        let mut g = [0.0; 3];
        u.gradient(&x, &mut g);
        assert_eq!(g, [2.0, 4.0, -2.0]);
        let mut h = [0.0; 9];
        u.hessian(&x, &mut h);
        assert_eq!(h[0], 2.0);
        assert_eq!(h[4], 2.0);
        assert_eq!(h[1], 0.0);
    }

    #[test]
    fn halton_in_unit_cube() {
        let mut p = [0.0; 3];
        for i in 0..100 {
            halton(i, 3, &mut p);
            for &v in &p {
                assert!((0.0..1.0).contains(&v));
            }
        }
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn registry_rejects_unknown_names() {
        assert!(scalar_registry("nope", 2).is_err());
        assert!(matrix_registry("nope", 2).is_err());
    }
}
