//! Lippmann–Schwinger operator `σ ↦ -σ + k² q (c g_k * σ)`.

use num_complex::Complex64;

use super::{check_len, LinearOperator};
use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};
use crate::kernels::{Family, KernelSpec};
use crate::potential::{convolve_precomputed, precompute_table, ConvolutionTable};

/// Scale `c` of the kernel relative to the outgoing Green's function `g_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LsNormalization {
    /// 2D: the bare Hankel function `H0 = -4i g_k`; 3D: `exp(ikr)/(4πr) = g_k`.
    #[default]
    Printed,
    /// `g_k` in every dimension.
    Green,
}

impl LsNormalization {
    pub fn scale(self, dim: usize) -> Complex64 {
        match (self, dim) {
            (LsNormalization::Printed, 2) => Complex64::new(0.0, -4.0),
            _ => Complex64::new(1.0, 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LsOperator {
    table: ConvolutionTable,
    q: Vec<f64>,
    k: f64,
    scale: Complex64,
}

impl LsOperator {
    /// Precomputes the Helmholtz table for `spec` on `grid`.
    pub fn new(spec: &KernelSpec, grid: GridSpec, q: Vec<f64>, norm: LsNormalization) -> Result<Self> {
        if spec.family != Family::Helmholtz {
            return Err(Error::InvalidArgument(format!(
                "the scattering operator needs a helmholtz kernel, got {}",
                spec.family
            )));
        }
        Self::from_table(precompute_table(spec, grid)?, q, norm)
    }

    pub fn from_table(table: ConvolutionTable, q: Vec<f64>, norm: LsNormalization) -> Result<Self> {
        let grid = table.grid();
        let spec = table.spec().clone();
        if spec.family != Family::Helmholtz || table.derivative().is_some() {
            return Err(Error::InvalidArgument("the scattering operator needs a plain helmholtz table".into()));
        }
        if q.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "contrast has {} samples, grid has {}",
                q.len(),
                grid.len()
            )));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("contrast has non-finite samples".into()));
        }
        Ok(Self { scale: norm.scale(grid.dim()), k: spec.k, table, q })
    }

    pub fn grid(&self) -> GridSpec {
        self.table.grid()
    }

    pub fn table(&self) -> &ConvolutionTable {
        &self.table
    }

    pub fn contrast(&self) -> &[f64] {
        &self.q
    }

    /// `c (g_k * σ)`.
    pub fn potential(&self, sigma: &[Complex64]) -> Result<Vec<Complex64>> {
        let f = Field::new(self.grid(), sigma.to_vec())?;
        let u = convolve_precomputed(&self.table, &f)?;
        Ok(u.into_values().into_iter().map(|v| self.scale * v).collect())
    }

    /// `-k² q φ_in`.
    pub fn rhs(&self, incident: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self, incident)?;
        let k2 = self.k * self.k;
        Ok(incident.iter().zip(&self.q).map(|(u, q)| -k2 * q * u).collect())
    }

    /// Scattered field of a solved density; equal to [`LsOperator::potential`].
    pub fn scattered(&self, sigma: &[Complex64]) -> Result<Field> {
        Field::new(self.grid(), self.potential(sigma)?)
    }
}

impl LinearOperator for LsOperator {
    fn len(&self) -> usize {
        self.table.grid().len()
    }

    fn label(&self) -> String {
        let g = self.grid();
        format!("lippmann-schwinger {}D n={} k={}", g.dim(), g.n(), self.k)
    }

    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self, x)?;
        let k2 = self.k * self.k;
        if self.q.iter().all(|&q| q == 0.0) {
            return Ok(x.iter().map(|v| -v).collect());
        }
        let u = self.potential(x)?;
        Ok(x.iter().zip(&u).zip(&self.q).map(|((s, u), q)| -s + k2 * q * u).collect())
    }
}
