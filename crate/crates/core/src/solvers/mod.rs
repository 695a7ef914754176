//! Matrix-free integral-equation operators and Krylov solvers.

mod krylov;
mod ls;
mod pb;

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Field;

pub use krylov::{bicgstab, gmres, solve};
pub use ls::{LsNormalization, LsOperator};
pub use pb::{PbForm, PbOperator};

/// A linear map on `C^len`.
pub trait LinearOperator {
    fn len(&self) -> usize;

    fn label(&self) -> String;

    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>>;

    fn apply_field(&self, x: &Field) -> Result<Field> {
        Field::new(x.grid(), self.apply(x.values())?)
    }
}

/// Dense matrix, row-major, as an operator.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    n: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::default(); n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0.into();
        }
        Self { n, entries }
    }
}

impl LinearOperator for DenseOperator {
    fn len(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        format!("dense {0}x{0}", self.n)
    }

    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self, x)?;
        Ok(self.entries.chunks(self.n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }
}

pub(crate) fn check_len<A: LinearOperator + ?Sized>(op: &A, x: &[Complex64]) -> Result<()> {
    if x.len() != op.len() {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} for operator '{}' of size {}",
            x.len(),
            op.label(),
            op.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Gmres,
    BiCgStab,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gmres => "gmres",
            Method::BiCgStab => "bicgstab",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gmres" => Ok(Method::Gmres),
            "bicgstab" | "bi-cgstab" => Ok(Method::BiCgStab),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}' (gmres, bicgstab)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Target for `‖A x - b‖ / ‖b‖`.
    pub tol: f64,
    pub max_matvec: usize,
    /// Krylov dimension between GMRES restarts.
    pub restart: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { method: Method::Gmres, tol: 1e-12, max_matvec: 2000, restart: 200 }
    }
}

impl SolverConfig {
    pub fn gmres() -> Self {
        Self::default()
    }

    pub fn bicgstab() -> Self {
        Self { method: Method::BiCgStab, ..Self::default() }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_matvec == 0 || self.restart == 0 {
            return Err(Error::InvalidArgument("max_matvec and restart must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    pub method: String,
    pub n_iter: usize,
    /// Operator applications made by the iteration; the final residual check is not included.
    pub n_matvec: usize,
    /// `‖A x - b‖ / ‖b‖` recomputed from the returned `x`.
    pub achieved_residual: f64,
    /// Relative residual estimate after each iteration, starting from 1.
    pub residual_history: Vec<f64>,
    pub t_solve: f64,
    pub t_precomp: f64,
}

impl SolveReport {
    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        format!(
            "method = {}\nn_iter = {}\nn_matvec = {}\nachieved_residual = {:e}\nt_solve = {:.6}\nt_precomp = {:.6}\n",
            self.method, self.n_iter, self.n_matvec, self.achieved_residual, self.t_solve, self.t_precomp
        )
    }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ conj(a_i) b_i`.
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
