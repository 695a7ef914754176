use num_complex::Complex64;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use volpot::analytic::{AtomSet, Contrast, GaussianSource};
use volpot::experiments::{
    gaussian_convolution_error, gaussian_density, gaussian_reference, pb_manufactured, pb_solve, Path,
    ScatterProblem, TableRow,
};
use volpot::grid::io::{read_field, write_field, Metadata, ValueKind};
use volpot::grid::{common_node_errors, relative_errors, ErrorNorms, Field};
use volpot::kernels::{eval_spectral, radial_transform_oracle, Family, KernelSpec};
use volpot::potential::{
    convolve_direct, convolve_gradient, convolve_precomputed_many, precompute_gradient_table,
    precompute_table, SpectralMultiplier,
};
use volpot::quadrature::Tolerance;
use volpot::solvers::{LsNormalization, PbForm, SolveReport, SolverConfig};

use crate::config::{FileConfig, List};
use crate::{
    Cli, CliError, Command, ConvergenceArgs, ConvolveArgs, KernelArgs, KernelDumpArgs, PbArgs, ScatterArgs,
    SolverArgs,
};

type Res<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> Res<()> {
    let section = match &cli.command {
        Command::KernelDump(_) => "kernel-dump",
        Command::Convolve(_) => "convolve",
        Command::Convergence(_) => "convergence",
        Command::Scatter(_) => "scatter",
        Command::PbSolve(_) => "pb-solve",
    };
    let cfg = FileConfig::load(cli.config.as_deref(), section)?;
    let out_dir: PathBuf = cfg.pick(cli.out_dir, "out-dir", PathBuf::from("."))?;
    fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    match cli.command {
        Command::KernelDump(a) => kernel_dump(&cfg, &out_dir, a),
        Command::Convolve(a) => convolve(&cfg, &out_dir, a),
        Command::Convergence(a) => convergence(&cfg, &out_dir, a),
        Command::Scatter(a) => scatter(&cfg, &out_dir, a),
        Command::PbSolve(a) => pb(&cfg, &out_dir, a),
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn kernel_spec(cfg: &FileConfig, a: KernelArgs, default_dim: usize) -> Res<KernelSpec> {
    let family: Family = cfg.pick(a.family, "family", "laplace".into())?.parse::<Family>().map_err(usage)?;
    let dim = cfg.pick(a.dim, "dim", default_dim)?;
    if dim != 2 && dim != 3 {
        return Err(CliError::Usage(format!("dimension must be 2 or 3, got {dim}")));
    }
    let k = cfg.pick(a.k, "k", 2.0)?;
    let mut spec = match family {
        Family::ConvectedHelmholtz => {
            let h: List<f64> = cfg.pick(a.h_vec, "h-vec", List(vec![k, 0.0, 0.0]))?;
            if h.0.len() != dim {
                return Err(CliError::Usage(format!("--h-vec needs {dim} components")));
            }
            let mut hv = [0.0; 3];
            hv[..dim].copy_from_slice(&h.0);
            KernelSpec::convected(dim, hv)
        }
        f if f.needs_wavenumber() => KernelSpec::new(f, dim).with_k(k),
        f => KernelSpec::new(f, dim),
    };
    if let Some(l) = cfg.pick_opt(a.truncation, "L")? {
        spec = spec.with_truncation(l);
    }
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn parse_path(text: &str) -> Res<Path> {
    match text {
        "direct" => Ok(Path::Direct),
        "table" => Ok(Path::Table),
        _ => Err(CliError::Usage(format!("unknown path '{text}' (direct, table)"))),
    }
}

fn solver_config(cfg: &FileConfig, a: SolverArgs, default: SolverConfig) -> Res<SolverConfig> {
    let method = match cfg.pick_opt::<String>(a.method, "method")? {
        Some(m) => m.parse().map_err(usage)?,
        None => default.method,
    };
    let sc = SolverConfig {
        method,
        tol: cfg.pick(a.tol, "tol", default.tol)?,
        max_matvec: cfg.pick(a.max_matvec, "max-matvec", default.max_matvec)?,
        restart: cfg.pick(a.restart, "restart", default.restart)?,
    };
    sc.validate().map_err(usage)?;
    Ok(sc)
}

fn io_err(path: &FsPath, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_text(path: &FsPath, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn append_csv(path: &FsPath, header: &str, rows: &[String]) -> Res<()> {
    let fresh = !path.exists();
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| io_err(path, e))?;
    let mut text = String::new();
    if fresh {
        text.push_str(header);
        text.push('\n');
    }
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    file.write_all(text.as_bytes()).map_err(|e| io_err(path, e))
}

fn save_field(path: &FsPath, field: &Field, kind: ValueKind, extra: &[(&str, String)]) -> Res<()> {
    let mut meta = Metadata::new();
    for (k, v) in extra {
        meta.insert((*k).to_string(), v.clone());
    }
    write_field(path, field, kind, &meta)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `ĝ` of the untruncated kernel, where it is finite.
fn free_space(spec: &KernelSpec, s_vec: &[f64]) -> Option<Complex64> {
    let s2: f64 = s_vec.iter().map(|v| v * v).sum();
    let k2 = spec.k * spec.k;
    let v = match spec.family {
        Family::Laplace => 1.0 / s2,
        Family::Helmholtz => 1.0 / (s2 - k2),
        Family::Biharmonic => -1.0 / (s2 * s2),
        Family::LaplaceHelmholtz => k2 / (s2 * (s2 - k2)),
        Family::ConvectedHelmholtz => {
            let h = spec.h_vec?;
            let d2: f64 = s_vec.iter().zip(h).map(|(a, b)| (a - b) * (a - b)).sum();
            let hk2: f64 = h.iter().map(|x| x * x).sum();
            1.0 / (d2 - hk2)
        }
    };
    v.is_finite().then(|| v.into())
}

fn kernel_dump(cfg: &FileConfig, out_dir: &FsPath, a: KernelDumpArgs) -> Res<()> {
    let spec = kernel_spec(cfg, a.kernel, 3)?;
    let s_max = cfg.pick(a.s_max, "s-max", 50.0)?;
    let samples = cfg.pick(a.samples, "samples", 201)?;
    if !(s_max > 0.0) || samples < 2 {
        return Err(CliError::Usage("need s-max > 0 and at least 2 samples".into()));
    }
    let mut text = String::from("s,spectral_re,spectral_im,free_re,free_im,oracle_re,oracle_im\n");
    for i in 0..samples {
        let s = s_max * i as f64 / (samples - 1) as f64;
        let mut s_vec = vec![0.0; spec.dim];
        s_vec[0] = s;
        let g = eval_spectral(&spec, &s_vec)?;
        let o = radial_transform_oracle(&spec, &s_vec, Tolerance::default())?;
        let free = free_space(&spec, &s_vec)
            .map(|f| format!("{:.16e},{:.16e}", f.re, f.im))
            .unwrap_or_else(|| ",".into());
        text.push_str(&format!("{s:.16e},{:.16e},{:.16e},{free},{:.16e},{:.16e}\n", g.re, g.im, o.re, o.im));
    }
    let path = out_dir.join(format!("kernel_{}_{}d.csv", spec.family, spec.dim));
    write_text(&path, &text)?;
    println!("wrote {} ({samples} rows)", path.display());
    Ok(())
}

fn convolve(cfg: &FileConfig, out_dir: &FsPath, a: ConvolveArgs) -> Res<()> {
    let spec = kernel_spec(cfg, a.kernel, 3)?;
    let path = parse_path(&cfg.pick(a.path, "path", "direct".to_string())?)?;
    let gradient = cfg.pick_flag(a.gradient, "gradient")?;
    let source_file: Option<PathBuf> = cfg.pick_opt(a.source, "source")?;
    let sigma = cfg.pick(a.sigma, "sigma", 0.05)?;
    let (source, gaussian) = match &source_file {
        Some(p) => {
            let (f, _) = read_field(p)?;
            if f.grid().dim() != spec.dim {
                return Err(CliError::Usage("source dimension differs from --dim".into()));
            }
            (f, None)
        }
        None => {
            let n = cfg.pick(a.n, "n", 64)?;
            let grid = volpot::grid::GridSpec::new(spec.dim, n).map_err(usage)?;
            let g = GaussianSource::new(sigma, spec.dim).map_err(usage)?;
            (gaussian_density(grid, &g), Some(g))
        }
    };
    let grid = source.grid();
    let clock = Instant::now();
    let (potential, grads, t_precomp) = match path {
        Path::Direct => {
            let mult = SpectralMultiplier::new(&spec, grid)?;
            let t0 = clock.elapsed().as_secs_f64();
            let u = convolve_direct(&mult, &source)?;
            let g = if gradient { convolve_gradient(&mult, &source)? } else { Vec::new() };
            (u, g, t0)
        }
        Path::Table => {
            let mut tables = vec![precompute_table(&spec, grid)?];
            if gradient {
                for axis in 0..spec.dim {
                    tables.push(precompute_gradient_table(&spec, grid, axis)?);
                }
            }
            let t0 = clock.elapsed().as_secs_f64();
            let refs: Vec<_> = tables.iter().collect();
            let mut out = convolve_precomputed_many(&refs, &source)?;
            let u = out.remove(0);
            (u, out, t0)
        }
    };
    let t_apply = clock.elapsed().as_secs_f64() - t_precomp;
    let meta = |what: &str| {
        vec![
            ("quantity", what.to_string()),
            ("family", spec.family.to_string()),
            ("k", format!("{:e}", spec.k)),
            ("truncation", format!("{:e}", spec.truncation)),
        ]
    };
    save_field(&out_dir.join("potential.vpf"), &potential, ValueKind::Complex, &meta("potential"))?;
    for (axis, g) in grads.iter().enumerate() {
        let name = ["x", "y", "z"][axis];
        save_field(&out_dir.join(format!("potential_grad_{name}.vpf")), g, ValueKind::Complex, &meta("gradient"))?;
    }
    let mut report = format!(
        "family = {}\ndim = {}\nn = {}\npath = {}\nt_precomp = {t_precomp:.6}\nt_apply = {t_apply:.6}\n",
        spec.family,
        spec.dim,
        grid.n(),
        if path == Path::Direct { "direct" } else { "table" }
    );
    let analytic = matches!(spec.family, Family::Laplace | Family::Helmholtz | Family::Biharmonic);
    if let (Some(g), true) = (gaussian, analytic) {
        let reference = gaussian_reference(&spec, grid, &g)?;
        let e = relative_errors(&potential, &reference)?;
        report.push_str(&format!("e2 = {:.3e}\neinf = {:.3e}\n", e.e2, e.einf));
    }
    print!("{report}");
    write_text(&out_dir.join("convolve_report.txt"), &report)
}

fn convergence(cfg: &FileConfig, out_dir: &FsPath, a: ConvergenceArgs) -> Res<()> {
    let families: List<String> =
        cfg.pick(a.family, "family", List(vec!["laplace".into(), "helmholtz".into(), "biharmonic".into()]))?;
    let dims: List<usize> = cfg.pick(a.dim, "dim", List(vec![2, 3]))?;
    let ns: List<usize> = cfg.pick(a.n, "n", List(vec![16, 32, 64]))?;
    let sigma = cfg.pick(a.sigma, "sigma", 0.05)?;
    let k = cfg.pick(a.k, "k", 2.0)?;
    let truncation: Option<f64> = cfg.pick_opt(a.truncation, "L")?;
    let path = parse_path(&cfg.pick(a.path, "path", "direct".to_string())?)?;
    let mut rows = Vec::new();
    for fam in &families.0 {
        let family: Family = fam.parse().map_err(usage)?;
        if !matches!(family, Family::Laplace | Family::Helmholtz | Family::Biharmonic) {
            return Err(CliError::Usage(format!("no closed-form reference for {family}")));
        }
        for &dim in &dims.0 {
            let mut spec = KernelSpec::new(family, dim);
            if family == Family::Helmholtz {
                spec = spec.with_k(k);
            }
            if let Some(l) = truncation {
                spec = spec.with_truncation(l);
            }
            spec.validate().map_err(usage)?;
            for &n in &ns.0 {
                let run = gaussian_convolution_error(&spec, n, sigma, path)?;
                let row = format!("{family},{dim},{n},{:.3e},{:.3e}", run.norms.e2, run.norms.einf);
                println!("{row}");
                rows.push(row);
            }
        }
    }
    let path = out_dir.join("convergence.csv");
    let mut text = String::from("family,dim,n,e2,einf\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    write_text(&path, &text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn not_converged(e: volpot::Error, out_dir: &FsPath, name: &str) -> CliError {
    if let volpot::Error::NotConverged(u) = &e {
        let _ = write_text(&out_dir.join(name), &u.report.to_text());
        eprint!("{}", u.report.to_text());
    }
    e.into()
}

fn scatter(cfg: &FileConfig, out_dir: &FsPath, a: ScatterArgs) -> Res<()> {
    let scenario: String = cfg.pick(a.scenario, "scenario", "disk".into())?;
    let contrast = match scenario.as_str() {
        "disk" | "luneburg" | "eaton" | "cube" => scenario.parse::<Contrast>().map_err(usage)?,
        file => Contrast::from_file(FsPath::new(file))?,
    };
    let default_dim = match &contrast {
        Contrast::Cube => 3,
        Contrast::Grid(f) => f.grid().dim(),
        _ => 2,
    };
    let dim = cfg.pick(a.dim, "dim", default_dim)?;
    let n = cfg.pick(a.n, "n", 50)?;
    let size = cfg.pick(a.size_lambda, "size-lambda", 1.0)?;
    let reference_n: Option<usize> = cfg.pick_opt(a.reference_n, "reference-n")?;
    let normalization = match cfg.pick(a.normalization, "normalization", "printed".to_string())?.as_str() {
        "printed" => LsNormalization::Printed,
        "green" => LsNormalization::Green,
        other => return Err(CliError::Usage(format!("unknown normalization '{other}' (printed, green)"))),
    };
    let mut problem = ScatterProblem::new(dim, contrast, size).map_err(usage)?;
    problem.solver = solver_config(cfg, a.solver, SolverConfig::bicgstab())?;
    problem.normalization = normalization;
    let sol = problem.solve(n).map_err(|e| not_converged(e, out_dir, "scatter_report.txt"))?;
    let grid = sol.scattered.grid();
    let tag = |q: &str| vec![("quantity", q.to_string()), ("scenario", problem.contrast.name().to_string()), ("k", format!("{:e}", problem.k()))];
    save_field(&out_dir.join("scattered.vpf"), &sol.scattered, ValueKind::Complex, &tag("scattered"))?;
    save_field(&out_dir.join("total.vpf"), &sol.total, ValueKind::Complex, &tag("total"))?;
    let mut rows = Vec::new();
    let norms: Option<ErrorNorms> = match reference_n {
        Some(nr) => {
            let r = problem.solve(nr).map_err(|e| not_converged(e, out_dir, "scatter_report.txt"))?;
            let e = common_node_errors(&sol.scattered, &r.scattered)?;
            rows.push(TableRow::from_report(size, grid, Some(e), &sol.report));
            rows.push(TableRow::from_report(size, r.scattered.grid(), None, &r.report));
            Some(e)
        }
        None => {
            rows.push(TableRow::from_report(size, grid, None, &sol.report));
            None
        }
    };
    let mut report = format!("scenario = {}\ndim = {dim}\nn = {n}\nsize_lambda = {size}\nk = {}\n", problem.contrast.name(), problem.k());
    report.push_str(&sol.report.to_text());
    if let Some(e) = norms {
        report.push_str(&format!("reference_n = {}\ne2 = {:.3e}\neinf = {:.3e}\n", reference_n.unwrap_or(0), e.e2, e.einf));
    }
    print!("{report}");
    write_text(&out_dir.join("scatter_report.txt"), &report)?;
    let csv: Vec<String> = rows.iter().map(TableRow::to_csv).collect();
    append_csv(&out_dir.join(format!("scatter_{}.csv", problem.contrast.name())), TableRow::CSV_HEADER, &csv)
}

fn pb_row(grid_n: usize, norms: Option<ErrorNorms>, r: &SolveReport) -> String {
    let (e2, einf) = match norms {
        Some(e) => (format!("{:.3e}", e.e2), format!("{:.3e}", e.einf)),
        None => ("-".into(), "-".into()),
    };
    format!("{},{grid_n},{e2},{einf},{},{},{:.3},{:.3}", grid_n.pow(3), r.n_iter, r.n_matvec, r.t_solve, r.t_precomp)
}

fn pb(cfg: &FileConfig, out_dir: &FsPath, a: PbArgs) -> Res<()> {
    let n = cfg.pick(a.n, "n", 64)?;
    let m = cfg.pick(a.atoms, "atoms", 20)?;
    let seed = cfg.pick(a.seed, "seed", 1)?;
    let mut atoms = AtomSet::synthetic(m, seed);
    atoms.eps_in = cfg.pick(a.eps_in, "eps-in", AtomSet::EPS_IN)?;
    atoms.eps_out = cfg.pick(a.eps_out, "eps-out", AtomSet::EPS_OUT)?;
    atoms.validate().map_err(usage)?;
    let width = cfg.pick(a.sigma, "sigma", 0.05)?;
    if !(width > 0.0) {
        return Err(CliError::Usage("charge width must be positive".into()));
    }
    let form = match cfg.pick(a.form, "form", "normalized".to_string())?.as_str() {
        "normalized" => PbForm::Normalized,
        "printed" => PbForm::Printed,
        other => return Err(CliError::Usage(format!("unknown form '{other}' (normalized, printed)"))),
    };
    let solver = solver_config(cfg, a.solver, SolverConfig::gmres())?;
    let manufactured = cfg.pick_flag(a.manufactured, "manufactured")?;
    let reference_n: Option<usize> = cfg.pick_opt(a.reference_n, "reference-n")?;
    if manufactured {
        let (err, rep) = pb_manufactured(n, &atoms, form, &solver).map_err(|e| not_converged(e, out_dir, "pb_report.txt"))?;
        let report = format!("mode = manufactured\nn = {n}\natoms = {m}\nseed = {seed}\nrelative_error = {err:.3e}\n{}", rep.to_text());
        print!("{report}");
        return write_text(&out_dir.join("pb_report.txt"), &report);
    }
    let sol = pb_solve(n, &atoms, width, form, &solver).map_err(|e| not_converged(e, out_dir, "pb_report.txt"))?;
    let tag = |q: &str| vec![("quantity", q.to_string()), ("atoms", m.to_string()), ("seed", seed.to_string())];
    save_field(&out_dir.join("sigma.vpf"), &sol.sigma, ValueKind::Real, &tag("density"))?;
    save_field(&out_dir.join("phi.vpf"), &sol.potential, ValueKind::Real, &tag("potential"))?;
    let mut rows = Vec::new();
    let norms = match reference_n {
        Some(nr) => {
            let r = pb_solve(nr, &atoms, width, form, &solver).map_err(|e| not_converged(e, out_dir, "pb_report.txt"))?;
            let e = common_node_errors(&sol.potential, &r.potential)?;
            rows.push(pb_row(n, Some(e), &sol.report));
            rows.push(pb_row(nr, None, &r.report));
            Some(e)
        }
        None => {
            rows.push(pb_row(n, None, &sol.report));
            None
        }
    };
    let mut report = format!("mode = solve\nn = {n}\natoms = {m}\nseed = {seed}\n");
    report.push_str(&sol.report.to_text());
    if let Some(e) = norms {
        report.push_str(&format!("reference_n = {}\ne2 = {:.3e}\neinf = {:.3e}\n", reference_n.unwrap_or(0), e.e2, e.einf));
    }
    print!("{report}");
    write_text(&out_dir.join("pb_report.txt"), &report)?;
    append_csv(&out_dir.join("pb.csv"), "n_tot,n,e2,einf,n_iter,n_matvec,t_solve,t_precomp", &rows)
}
