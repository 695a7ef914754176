//! End-to-end runs of the `volpot` binary.

use num_complex::Complex64;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use volpot::grid::io::{read_field, write_field, Metadata, ValueKind};
use volpot::grid::{Field, GridSpec};
use volpot::kernels::{eval_spectral, KernelSpec};

fn volpot(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volpot"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{text}"))
        .to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&volpot(dir.path(), &["no-such-command"])), 1);
    assert_eq!(code(&volpot(dir.path(), &["convolve", "--dim", "4"])), 1);
    assert_eq!(code(&volpot(dir.path(), &["convolve", "--family", "yukawa"])), 1);
    assert_eq!(code(&volpot(dir.path(), &["convolve", "--n", "31"])), 1);
    assert_eq!(code(&volpot(dir.path(), &["scatter", "--dim", "7"])), 1);
    assert_eq!(code(&volpot(dir.path(), &["scatter", "--tol", "-1"])), 1);

    let blocker = dir.path().join("plain-file");
    fs::write(&blocker, "x").unwrap();
    assert_eq!(code(&volpot(&blocker.join("out"), &["kernel-dump", "--samples", "3"])), 3);
    let absent = dir.path().join("absent.vpf");
    assert_eq!(code(&volpot(dir.path(), &["convolve", "--source", absent.to_str().unwrap()])), 3);

    let o = volpot(dir.path(), &["pb-solve", "--n", "16", "--atoms", "5", "--max-matvec", "2"]);
    assert_eq!(code(&o), 2);
    let text = fs::read_to_string(dir.path().join("pb_report.txt")).unwrap();
    assert_eq!(report_value(&text, "n_matvec"), "2");
}

#[test]
fn kernel_dump_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let o = volpot(dir.path(), &["kernel-dump", "--family", "helmholtz", "--dim", "2", "--k", "3", "--s-max", "20", "--samples", "41"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("kernel_helmholtz_2d.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,spectral_re,spectral_im,free_re,free_im,oracle_re,oracle_im");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 41);
    let spec = KernelSpec::helmholtz(2, 3.0);
    for row in &rows {
        let num = |i: usize| row[i].parse::<f64>().unwrap();
        let s = num(0);
        let want = eval_spectral(&spec, &[s, 0.0]).unwrap();
        assert_eq!(Complex64::new(num(1), num(2)), want);
        let oracle = Complex64::new(num(5), num(6));
        assert!((oracle - want).norm() <= 1e-10 * want.norm().max(1e-2), "s={s}");
        if s == 3.0 {
            assert!(row[3].is_empty() && row[4].is_empty());
        } else {
            assert!((num(3) - 1.0 / (s * s - 9.0)).abs() <= 1e-15 * num(3).abs());
        }
    }
}

#[test]
fn convolve_writes_potential_and_gradient() {
    let dir = tempfile::tempdir().unwrap();
    let o = volpot(dir.path(), &["convolve", "--family", "laplace", "--dim", "3", "--n", "16", "--sigma", "0.05", "--gradient"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["potential", "potential_grad_x", "potential_grad_y", "potential_grad_z"] {
        let (f, _) = read_field(&dir.path().join(format!("{name}.vpf"))).unwrap();
        assert_eq!(f.grid(), GridSpec::new(3, 16).unwrap());
    }
    let text = fs::read_to_string(dir.path().join("convolve_report.txt")).unwrap();
    assert!(report_value(&text, "e2").parse::<f64>().unwrap() < 1e-3);
}

#[test]
fn convolving_zero_gives_zero() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::new(2, 32).unwrap();
    let src = dir.path().join("zero.vpf");
    write_field(&src, &Field::zeros(grid), ValueKind::Real, &Metadata::new()).unwrap();
    for path in ["direct", "table"] {
        let o = volpot(dir.path(), &["convolve", "--family", "biharmonic", "--dim", "2", "--path", path, "--source", src.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let (f, _) = read_field(&dir.path().join("potential.vpf")).unwrap();
        assert_eq!(f.grid(), grid);
        assert!(f.values().iter().all(|v| *v == Complex64::default()));
    }
}

#[test]
fn convergence_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = volpot(dir.path(), &["convergence", "--family", "laplace,helmholtz", "--dim", "2", "--n", "32,64", "--k", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,dim,n,e2,einf");
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    let keys: Vec<(String, String)> = rows.iter().map(|r| (r[0].clone(), r[2].clone())).collect();
    let want: Vec<(String, String)> = [("laplace", "32"), ("laplace", "64"), ("helmholtz", "32"), ("helmholtz", "64")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(keys, want);
    for r in &rows {
        let e2: f64 = r[3].parse().unwrap();
        let einf: f64 = r[4].parse().unwrap();
        assert!(e2 >= 0.0 && e2 <= einf * 10.0 && einf < 1e-6, "{r:?}");
    }
}

#[test]
fn scatter_without_contrast_takes_no_matvec() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::new(2, 16).unwrap();
    let q = dir.path().join("q.vpf");
    write_field(&q, &Field::zeros(grid), ValueKind::Real, &Metadata::new()).unwrap();
    let o = volpot(dir.path(), &["scatter", "--dim", "2", "--n", "16", "--scenario", q.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("scatter_report.txt")).unwrap();
    assert_eq!(report_value(&text, "n_matvec"), "0");
    let (u, _) = read_field(&dir.path().join("scattered.vpf")).unwrap();
    assert!(u.values().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn scatter_disk_converges_and_logs_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = volpot(dir.path(), &["scatter", "--scenario", "disk", "--dim", "2", "--n", "20", "--reference-n", "40"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("scatter_report.txt")).unwrap();
    assert!(report_value(&text, "achieved_residual").parse::<f64>().unwrap() <= 1e-12);
    assert!(report_value(&text, "e2").parse::<f64>().unwrap() < 1e-2);
    let csv = fs::read_to_string(dir.path().join("scatter_disk.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "size,n_tot,n,e2,einf,n_matvec,n_iter,t_solve,t_precomp");
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn pb_constant_dielectric_solves_in_one_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let o = volpot(dir.path(), &["pb-solve", "--n", "16", "--atoms", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("pb_report.txt")).unwrap();
    assert_eq!(report_value(&text, "n_iter"), "1");
    let (phi, meta) = read_field(&dir.path().join("phi.vpf")).unwrap();
    assert_eq!(meta.get("quantity").map(String::as_str), Some("potential"));
    assert!(phi.values().iter().all(|v| v.im == 0.0));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    fs::write(&ini, "[defaults]\nn = 16\ndim = 2\n\n[convolve]\nfamily = helmholtz\nk = 3\nn = 32\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["--config", ini.to_str().unwrap(), "convolve"];
        args.extend_from_slice(extra);
        let o = volpot(dir.path(), &args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(dir.path().join("convolve_report.txt")).unwrap()
    };
    let text = run(&[]);
    assert_eq!(report_value(&text, "family"), "helmholtz");
    assert_eq!(report_value(&text, "dim"), "2");
    assert_eq!(report_value(&text, "n"), "32");
    let text = run(&["--n", "64"]);
    assert_eq!(report_value(&text, "n"), "64");
}

#[test]
fn reports_are_stable_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |t: String| t.lines().filter(|l| !l.starts_with("t_")).collect::<Vec<_>>().join("\n");
    let mut texts = Vec::new();
    for _ in 0..2 {
        let o = volpot(dir.path(), &["pb-solve", "--n", "16", "--atoms", "4", "--seed", "9"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        texts.push(strip(fs::read_to_string(dir.path().join("pb_report.txt")).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(report_value(&texts[0], "seed"), "9");
}
