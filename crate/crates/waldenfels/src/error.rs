//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum LabError {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("ellipticity violation: {0}")]
    Ellipticity(String),

    #[error("quadrature did not converge: achieved {achieved:.3e}, required {required:.3e}")]
    QuadratureNonConvergence { achieved: f64, required: f64 },

    #[error(
        "monotonicity violation at node {node}: off-diagonal entry {value:.3e}; \
         use a smaller h or a wider stencil"
    )]
    Monotonicity { node: usize, value: f64 },

    #[error("linear solver did not reach tolerance: relative residual {residual:.3e}")]
    SolverTolerance { residual: f64 },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("constant selection failed: {0}")]
    ConstantSelection(String),

    #[error("irreducibility failure: {0}")]
    Irreducibility(String),

    #[error("eigen solver did not converge within {0} iterations")]
    EigenNonConvergence(usize),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("certification failure: {0}")]
    Certification(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
