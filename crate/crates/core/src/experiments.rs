//! Drivers for the convergence, scattering and Poisson–Boltzmann studies,
//! shared by the command-line tool and the acceptance suite.

use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use crate::analytic::{gaussian_exact, gaussian_exact_radii, AtomSet, Contrast, GaussianSource, Incident};
use crate::error::{Error, Result};
use crate::grid::{common_node_errors, relative_errors, ErrorNorms, Field, GridSpec};
use crate::kernels::{Family, KernelSpec};
use crate::potential::{
    convolve_direct, convolve_precomputed, precompute_table, SpectralMultiplier,
};
use crate::solvers::{solve, LsNormalization, LsOperator, PbForm, PbOperator, SolveReport, SolverConfig};

/// How a volume potential is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    /// Multiplier on the oversampling-4 lattice.
    Direct,
    /// Precomputed table applied with oversampling 2.
    Table,
}

/// `ρ` sampled on every node.
pub fn gaussian_density(grid: GridSpec, source: &GaussianSource) -> Field {
    Field::from_fn(grid, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        source.density(r).into()
    })
}

/// The exact potential on every node, evaluated once per distinct radius.
pub fn gaussian_reference(spec: &KernelSpec, grid: GridSpec, source: &GaussianSource) -> Result<Field> {
    let d = grid.dim();
    let square = |i: usize| -> i64 { grid.labels(i)[..d].iter().map(|j| j * j).sum() };
    let mut keys: Vec<i64> = (0..grid.len()).map(square).collect();
    keys.sort_unstable();
    keys.dedup();
    let n = grid.n() as f64;
    let radii: Vec<f64> = keys.iter().map(|&m| (m as f64).sqrt() / n).collect();
    let values = if spec.family == Family::Helmholtz && d == 2 {
        gaussian_exact_radii(spec, source, &radii)?
    } else {
        radii.iter().map(|&r| gaussian_exact(spec, source, r)).collect::<Result<Vec<_>>>()?
    };
    let table: HashMap<i64, Complex64> = keys.into_iter().zip(values).collect();
    Field::new(grid, (0..grid.len()).map(|i| table[&square(i)]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianRun {
    pub n: usize,
    pub norms: ErrorNorms,
    pub t_precomp: f64,
    pub t_apply: f64,
}

/// Relative error of the computed potential of a Gaussian against the closed form.
pub fn gaussian_convolution_error(
    spec: &KernelSpec,
    n: usize,
    sigma: f64,
    path: Path,
) -> Result<GaussianRun> {
    let grid = GridSpec::new(spec.dim, n)?;
    let source = GaussianSource::new(sigma, spec.dim)?;
    let f = gaussian_density(grid, &source);
    let clock = Instant::now();
    let (u, t_precomp, t_apply) = match path {
        Path::Direct => {
            let mult = SpectralMultiplier::new(spec, grid)?;
            let t0 = clock.elapsed().as_secs_f64();
            let u = convolve_direct(&mult, &f)?;
            (u, t0, clock.elapsed().as_secs_f64() - t0)
        }
        Path::Table => {
            let table = precompute_table(spec, grid)?;
            let t0 = clock.elapsed().as_secs_f64();
            let u = convolve_precomputed(&table, &f)?;
            (u, t0, clock.elapsed().as_secs_f64() - t0)
        }
    };
    let reference = gaussian_reference(spec, grid, &source)?;
    Ok(GaussianRun { n, norms: relative_errors(&u, &reference)?, t_precomp, t_apply })
}

/// The six kernels with closed-form Gaussian potentials, with wavenumber `k`.
pub fn analytic_suite(k: f64) -> Vec<KernelSpec> {
    let mut out = Vec::new();
    for dim in [2, 3] {
        out.push(KernelSpec::laplace(dim));
        out.push(KernelSpec::helmholtz(dim, k));
        out.push(KernelSpec::biharmonic(dim));
    }
    out
}

/// A Lippmann–Schwinger scattering scenario.
#[derive(Clone, Debug)]
pub struct ScatterProblem {
    pub dim: usize,
    pub contrast: Contrast,
    pub incident: Incident,
    pub solver: SolverConfig,
    pub normalization: LsNormalization,
}

impl ScatterProblem {
    /// Box of `size` free-space wavelengths, so `k = 2π size`; the Eaton lens
    /// is lit by the Gaussian beam and everything else by a plane wave.
    pub fn new(dim: usize, contrast: Contrast, size: f64) -> Result<Self> {
        if !(size > 0.0) || !size.is_finite() {
            return Err(Error::InvalidArgument(format!("box size must be positive, got {size}")));
        }
        let k = 2.0 * std::f64::consts::PI * size;
        let incident = match contrast {
            Contrast::Eaton => Incident::GaussianBeam { k },
            _ => Incident::plane_wave(k),
        };
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        incident.validate(dim)?;
        Ok(Self {
            dim,
            contrast,
            incident,
            solver: SolverConfig::bicgstab(),
            normalization: LsNormalization::Printed,
        })
    }

    pub fn k(&self) -> f64 {
        self.incident.k()
    }

    pub fn solve(&self, n: usize) -> Result<ScatterSolution> {
        let grid = GridSpec::new(self.dim, n)?;
        let clock = Instant::now();
        let q = self.contrast.sample(grid)?;
        let op = LsOperator::new(&KernelSpec::helmholtz(self.dim, self.k()), grid, q, self.normalization)?;
        let t_precomp = clock.elapsed().as_secs_f64();
        let incident = self.incident.sample(grid)?;
        let rhs = op.rhs(&incident)?;
        let (sigma, mut report) = solve(&op, &rhs, &self.solver)?;
        report.t_precomp = t_precomp;
        let scattered = op.scattered(&sigma)?;
        let total = Field::new(grid, scattered.values().iter().zip(&incident).map(|(s, i)| s + i).collect())?;
        Ok(ScatterSolution { scattered, total, sigma: Field::new(grid, sigma)?, report })
    }
}

#[derive(Clone, Debug)]
pub struct ScatterSolution {
    pub sigma: Field,
    pub scattered: Field,
    pub total: Field,
    pub report: SolveReport,
}

/// One row of a timing and error table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub size: f64,
    pub n: usize,
    pub n_tot: usize,
    pub norms: Option<ErrorNorms>,
    pub n_matvec: usize,
    pub n_iter: usize,
    pub t_solve: f64,
    pub t_precomp: f64,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "size,n_tot,n,e2,einf,n_matvec,n_iter,t_solve,t_precomp";

    pub fn from_report(size: f64, grid: GridSpec, norms: Option<ErrorNorms>, report: &SolveReport) -> Self {
        Self {
            size,
            n: grid.n(),
            n_tot: grid.len(),
            norms,
            n_matvec: report.n_matvec,
            n_iter: report.n_iter,
            t_solve: report.t_solve,
            t_precomp: report.t_precomp,
        }
    }

    pub fn to_csv(&self) -> String {
        let (e2, einf) = match self.norms {
            Some(e) => (format!("{:.3e}", e.e2), format!("{:.3e}", e.einf)),
            None => ("-".into(), "-".into()),
        };
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{:.3},{:.3}",
            self.size, self.n_tot, self.n, e2, einf, self.n_matvec, self.n_iter, self.t_solve, self.t_precomp
        );
        s
    }
}

/// Solves at each `n` and at `n_ref`, comparing scattered fields on common nodes.
/// The reference row comes last with no error columns.
pub fn scatter_self_convergence(
    problem: &ScatterProblem,
    size: f64,
    ns: &[usize],
    n_ref: usize,
) -> Result<Vec<TableRow>> {
    let reference = problem.solve(n_ref)?;
    let mut rows = Vec::with_capacity(ns.len() + 1);
    for &n in ns {
        let sol = problem.solve(n)?;
        let norms = common_node_errors(&sol.scattered, &reference.scattered)?;
        rows.push(TableRow::from_report(size, sol.scattered.grid(), Some(norms), &sol.report));
    }
    rows.push(TableRow::from_report(size, reference.scattered.grid(), None, &reference.report));
    Ok(rows)
}

/// Localised smooth charge used by the Poisson–Boltzmann runs.
pub fn pb_charge(grid: GridSpec, width: f64) -> Field {
    let source = GaussianSource { sigma: width, dim: 3 };
    gaussian_density(grid, &source)
}

#[derive(Clone, Debug)]
pub struct PbSolution {
    pub sigma: Field,
    pub potential: Field,
    pub report: SolveReport,
}

/// Solves for the density of a Gaussian charge of the given width.
pub fn pb_solve(n: usize, atoms: &AtomSet, width: f64, form: PbForm, cfg: &SolverConfig) -> Result<PbSolution> {
    let grid = GridSpec::new(3, n)?;
    let clock = Instant::now();
    let op = PbOperator::new(grid, atoms)?.with_form(form);
    let t_precomp = clock.elapsed().as_secs_f64();
    let rho = pb_charge(grid, width);
    let (sigma, mut report) = solve(&op, &op.rhs(rho.values())?, cfg)?;
    report.t_precomp = t_precomp;
    // real operator and data: drop the roundoff imaginary parts
    let real = |v: Complex64| Complex64::from(v.re);
    let potential = op.potential(&sigma)?.map(real);
    Ok(PbSolution { sigma: Field::new(grid, sigma)?.map(real), potential, report })
}

/// Recovers a known smooth density from the charge it produces.
pub fn pb_manufactured(
    n: usize,
    atoms: &AtomSet,
    form: PbForm,
    cfg: &SolverConfig,
) -> Result<(f64, SolveReport)> {
    let grid = GridSpec::new(3, n)?;
    let clock = Instant::now();
    let op = PbOperator::new(grid, atoms)?.with_form(form);
    let t_precomp = clock.elapsed().as_secs_f64();
    let star = Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new((1.0 + x[0] - 0.5 * x[1]) * (-r2 / 0.03).exp(), 0.2 * x[2] * (-r2 / 0.02).exp())
    });
    let rho = op.charge(star.values())?;
    let (sigma, mut report) = solve(&op, &op.rhs(&rho)?, cfg)?;
    report.t_precomp = t_precomp;
    let err = relative_errors(&Field::new(grid, sigma)?, &star)?.e2;
    Ok((err, report))
}
