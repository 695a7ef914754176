//! `volpot`: volume potentials and integral-equation solves on uniform grids.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::List;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<volpot::Error> for CliError {
    fn from(e: volpot::Error) -> Self {
        use volpot::Error as E;
        match e {
            E::InvalidArgument(_) | E::ShapeMismatch(_) => CliError::Usage(e.to_string()),
            E::Io(_) | E::Format(_) => CliError::Io(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "volpot", version, about = "Volume potentials and integral equations on uniform grids")]
struct Cli {
    /// INI file with one section per command and an optional [defaults] section
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a truncated-kernel transform against quadrature
    KernelDump(KernelDumpArgs),
    /// Convolve a Gaussian or a field file with a kernel
    Convolve(ConvolveArgs),
    /// Errors against the Gaussian closed forms over a list of grid sizes
    Convergence(ConvergenceArgs),
    /// Solve a Lippmann–Schwinger scattering problem
    Scatter(ScatterArgs),
    /// Solve the Poisson–Boltzmann equation with a smooth dielectric
    PbSolve(PbArgs),
}

#[derive(Args, Debug, Default)]
pub struct KernelArgs {
    /// laplace, helmholtz, biharmonic, laplace_helmholtz or convected_helmholtz
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Wavenumber
    #[arg(long)]
    pub k: Option<f64>,
    /// Truncation radius
    #[arg(long = "L")]
    pub truncation: Option<f64>,
    /// Shift vector of the convected kernel, e.g. `1.2,0.5,0`
    #[arg(long)]
    pub h_vec: Option<List<f64>>,
}

#[derive(Args, Debug)]
pub struct KernelDumpArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub n: Option<usize>,
    /// Width of the Gaussian source
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Source field file instead of the Gaussian
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// direct or table
    #[arg(long)]
    pub path: Option<String>,
    /// Also write the gradient, one file per axis
    #[arg(long)]
    pub gradient: bool,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    /// Families to run; defaults to laplace,helmholtz,biharmonic
    #[arg(long)]
    pub family: Option<List<String>>,
    #[arg(long)]
    pub dim: Option<List<usize>>,
    #[arg(long)]
    pub n: Option<List<usize>>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long = "L")]
    pub truncation: Option<f64>,
    #[arg(long)]
    pub path: Option<String>,
}

#[derive(Args, Debug)]
pub struct SolverArgs {
    #[arg(long)]
    pub tol: Option<f64>,
    /// gmres or bicgstab
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub max_matvec: Option<usize>,
    #[arg(long)]
    pub restart: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ScatterArgs {
    /// disk, luneburg, eaton, cube, or a contrast field file
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Box size in free-space wavelengths
    #[arg(long)]
    pub size_lambda: Option<f64>,
    /// Finer grid for the error columns
    #[arg(long)]
    pub reference_n: Option<usize>,
    /// printed (bare Hankel kernel in 2D) or green
    #[arg(long)]
    pub normalization: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct PbArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub atoms: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub eps_in: Option<f64>,
    #[arg(long)]
    pub eps_out: Option<f64>,
    /// Width of the Gaussian charge
    #[arg(long)]
    pub sigma: Option<f64>,
    /// normalized or printed
    #[arg(long)]
    pub form: Option<String>,
    /// Recover a known density instead of solving for the Gaussian charge
    #[arg(long)]
    pub manufactured: bool,
    #[arg(long)]
    pub reference_n: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("volpot: {e}");
            ExitCode::from(e.code())
        }
    }
}
