use num_complex::Complex64;
use thiserror::Error;

use crate::solvers::SolveReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument outside the function domain: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("quadrature did not converge: estimated error {estimate:e} > tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    #[error("non-finite value produced: {0}")]
    NonFinite(String),
    #[error("point lies on a branch point of the source: {0}")]
    BranchPoint(String),
    #[error("{} did not converge ({}): relative residual {:e} after {} operator applications",
        .0.report.method, .0.reason, .0.report.achieved_residual, .0.report.n_matvec)]
    NotConverged(Box<Unconverged>),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The best iterate of a solve that missed its tolerance.
#[derive(Clone, Debug)]
pub struct Unconverged {
    pub reason: String,
    pub x: Vec<Complex64>,
    pub report: SolveReport,
}
