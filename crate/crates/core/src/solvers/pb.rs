//! Poisson–Boltzmann operator at zero ionic strength, built from
//! `-ε σ + ∇ε · ∇(g_0 * σ) = ρ`, `g_0 = 1/(4π r)`.

use num_complex::Complex64;

use super::{check_len, LinearOperator};
use crate::analytic::AtomSet;
use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};
use crate::kernels::KernelSpec;
use crate::potential::{
    convolve_precomputed, convolve_precomputed_many, precompute_gradient_table, precompute_table,
    ConvolutionTable,
};

/// Which of two equivalent forms of the equation the operator applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PbForm {
    /// Divided through by `ε`: `σ ↦ -σ + (∇ε/ε) · ∇(g_0 * σ)`, right-hand side `ρ/ε`.
    #[default]
    Normalized,
    /// `σ ↦ -ε σ + ∇ε · ∇(g_0 * σ)`, right-hand side `ρ`.
    Printed,
}

#[derive(Clone, Debug)]
pub struct PbOperator {
    grid: GridSpec,
    form: PbForm,
    eps: Vec<f64>,
    grad_eps: Vec<Vec<f64>>,
    gradient_tables: Vec<ConvolutionTable>,
    constant: bool,
}

impl PbOperator {
    /// Samples the dielectric of `atoms` and precomputes the `∂_a g_0` tables.
    pub fn new(grid: GridSpec, atoms: &AtomSet) -> Result<Self> {
        if grid.dim() != 3 {
            return Err(Error::InvalidArgument("the Poisson–Boltzmann operator is 3D".into()));
        }
        atoms.validate()?;
        let (eps, grad_eps) = atoms.sample(grid);
        let constant = grad_eps.iter().flatten().all(|&g| g == 0.0);
        let gradient_tables = if constant {
            Vec::new()
        } else {
            let spec = KernelSpec::laplace(3);
            (0..3)
                .map(|a| precompute_gradient_table(&spec, grid, a))
                .collect::<Result<_>>()?
        };
        Ok(Self { grid, form: PbForm::default(), eps, grad_eps, gradient_tables, constant })
    }

    pub fn with_form(mut self, form: PbForm) -> Self {
        self.form = form;
        self
    }

    pub fn form(&self) -> PbForm {
        self.form
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn grad_eps(&self) -> &[Vec<f64>] {
        &self.grad_eps
    }

    /// Right-hand side for a charge density `ρ` in this operator's form.
    pub fn rhs(&self, rho: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self, rho)?;
        Ok(match self.form {
            PbForm::Printed => rho.to_vec(),
            PbForm::Normalized => rho.iter().zip(&self.eps).map(|(r, e)| r / e).collect(),
        })
    }

    /// `-ε σ + ∇ε · ∇(g_0 * σ)` whatever the form; the charge density that `σ` solves for.
    pub fn charge(&self, sigma: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self, sigma)?;
        let mut y: Vec<Complex64> = sigma.iter().zip(&self.eps).map(|(s, e)| -e * s).collect();
        if self.constant {
            return Ok(y);
        }
        let tables: Vec<&ConvolutionTable> = self.gradient_tables.iter().collect();
        let grads = convolve_precomputed_many(&tables, &Field::new(self.grid, sigma.to_vec())?)?;
        for (g, de) in grads.iter().zip(&self.grad_eps) {
            for ((yi, gi), d) in y.iter_mut().zip(g.values()).zip(de) {
                *yi += d * gi;
            }
        }
        Ok(y)
    }

    /// `φ = g_0 * σ`.
    pub fn potential(&self, sigma: &[Complex64]) -> Result<Field> {
        let table = precompute_table(&KernelSpec::laplace(3), self.grid)?;
        convolve_precomputed(&table, &Field::new(self.grid, sigma.to_vec())?)
    }
}

impl LinearOperator for PbOperator {
    fn len(&self) -> usize {
        self.grid.len()
    }

    fn label(&self) -> String {
        format!("poisson-boltzmann n={}", self.grid.n())
    }

    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let y = self.charge(x)?;
        Ok(match self.form {
            PbForm::Printed => y,
            PbForm::Normalized => y.iter().zip(&self.eps).map(|(v, e)| v / e).collect(),
        })
    }
}
