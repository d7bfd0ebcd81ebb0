//! Numerical laboratory for Waldenfels-type integro-differential operators
//! `A = L + S`: a uniformly elliptic second-order part `L` plus a Lévy-type
//! nonlocal part `S`.
//!
//! The crate provides, at desk scale:
//!
//! * pointwise evaluation of `A` for coefficient fields with recorded sup
//!   norms and parametric Lévy kernels ([`operator`]),
//! * bounded-domain geometry queries: distance to the complement, interior
//!   and exterior tangent balls, generalized normals, reachable sets
//!   ([`geometry`]),
//! * explicit barrier functions and the constant selections that feed the
//!   quantitative Hopf bounds ([`barrier`]),
//! * jump-diffusion Monte Carlo for exit times, gauge functions and
//!   Feynman-Kac functionals with reproducible counter-based randomness
//!   ([`mc`]),
//! * a monotone finite-difference discretization with Dirichlet exterior
//!   condition: semigroup, resolvent, resolvent kernel, principal eigenpair,
//!   rank-one kernel minorization and gauge solves ([`grid`]),
//! * checkers that certify sub/supersolutions and test each maximum
//!   principle and Hopf-type inequality numerically, producing margin
//!   reports ([`verify`]),
//! * small deterministic CSV / JSON / SVG writers for the emitted artifacts
//!   ([`report`]).

// indexed loops over coupled numerical arrays are the house style here
#![allow(clippy::needless_range_loop)]

pub mod barrier;
pub mod error;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod mc;
pub mod operator;
pub mod report;
pub mod verify;

pub use error::{LabError, Result};
