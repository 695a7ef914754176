//! Restarted GMRES and Bi-CGStab with zero initial guess.

use num_complex::Complex64;
use std::time::Instant;

use super::{check_len, dot, norm, LinearOperator, Method, SolveReport, SolverConfig};
use crate::error::{Error, Result, Unconverged};

const BREAKDOWN: f64 = 1e-290;

/// Dispatches on `cfg.method`.
pub fn solve<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[Complex64],
    cfg: &SolverConfig,
) -> Result<(Vec<Complex64>, SolveReport)> {
    match cfg.method {
        Method::Gmres => gmres(op, b, cfg),
        Method::BiCgStab => bicgstab(op, b, cfg),
    }
}

struct Tracker {
    report: SolveReport,
    b_norm: f64,
    start: Instant,
}

impl Tracker {
    fn new(method: Method, b_norm: f64) -> Self {
        let report = SolveReport {
            method: method.to_string(),
            residual_history: vec![1.0],
            ..SolveReport::default()
        };
        Self { report, b_norm, start: Instant::now() }
    }

    fn apply<A: LinearOperator + ?Sized>(&mut self, op: &A, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.report.n_matvec += 1;
        op.apply(x)
    }

    // Residual of the returned iterate; this application is bookkeeping and is not counted.
    fn true_residual<A: LinearOperator + ?Sized>(
        &self,
        op: &A,
        x: &[Complex64],
        b: &[Complex64],
    ) -> Result<(Vec<Complex64>, f64)> {
        let ax = op.apply(x)?;
        let r: Vec<Complex64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let rel = norm(&r) / self.b_norm;
        Ok((r, rel))
    }

    fn finish(mut self, x: Vec<Complex64>, residual: f64) -> (Vec<Complex64>, SolveReport) {
        self.report.achieved_residual = residual;
        self.report.t_solve = self.start.elapsed().as_secs_f64();
        (x, self.report)
    }

    fn fail(self, x: Vec<Complex64>, residual: f64, reason: &str) -> Error {
        let (x, report) = self.finish(x, residual);
        Error::NotConverged(Box::new(Unconverged { reason: reason.into(), x, report }))
    }
}

fn start<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[Complex64],
    cfg: &SolverConfig,
) -> Result<Option<(Vec<Complex64>, SolveReport)>> {
    cfg.validate()?;
    check_len(op, b)?;
    if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("right-hand side has non-finite entries".into()));
    }
    if norm(b) == 0.0 {
        let report = SolveReport { method: cfg.method.to_string(), residual_history: vec![0.0], ..SolveReport::default() };
        return Ok(Some((vec![Complex64::default(); b.len()], report)));
    }
    Ok(None)
}

/// Rotation zeroing `b` against `a`: returns `(c, s, r)` with
/// `[c s; -conj(s) c] [a; b] = [r; 0]`, `c` real and `b` real and nonnegative.
fn givens(a: Complex64, b: f64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0), b.into());
    }
    let t = an.hypot(b);
    let phase = a / an;
    (an / t, phase * (b / t), phase * t)
}

/// Restarted GMRES with modified Gram–Schmidt and one reorthogonalisation pass.
pub fn gmres<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[Complex64],
    cfg: &SolverConfig,
) -> Result<(Vec<Complex64>, SolveReport)> {
    if let Some(done) = start(op, b, cfg)? {
        return Ok(done);
    }
    let n = b.len();
    let b_norm = norm(b);
    let mut tr = Tracker::new(Method::Gmres, b_norm);
    let m = cfg.restart.min(n).max(1);
    let mut x = vec![Complex64::default(); n];
    let mut r = b.to_vec();
    let mut beta = b_norm;
    let mut drift_restarts = 0;
    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|z| z / beta).collect()];
        // Columns of the Hessenberg matrix after rotation.
        let mut h: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = vec![Complex64::new(beta, 0.0)];
        let mut estimate = beta / b_norm;
        for j in 0..m {
            if tr.report.n_matvec >= cfg.max_matvec {
                break;
            }
            let mut w = tr.apply(op, &basis[j])?;
            let mut col = vec![Complex64::default(); j + 2];
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    col[i] += c;
                    for (wk, vk) in w.iter_mut().zip(v) {
                        *wk -= c * vk;
                    }
                }
            }
            let w_norm = norm(&w);
            col[j + 1] = w_norm.into();
            for (i, &(c, s)) in rotations.iter().enumerate() {
                let (p, q) = (col[i], col[i + 1]);
                col[i] = c * p + s * q;
                col[i + 1] = -s.conj() * p + c * q;
            }
            let (c, s, rr) = givens(col[j], w_norm);
            col[j] = rr;
            col[j + 1] = Complex64::default();
            rotations.push((c, s));
            let gj = g[j];
            g[j] = c * gj;
            g.push(-s.conj() * gj);
            h.push(col);
            tr.report.n_iter += 1;
            estimate = g[j + 1].norm() / b_norm;
            tr.report.residual_history.push(estimate);
            if estimate <= cfg.tol || w_norm <= 1e-300 * beta {
                break;
            }
            basis.push(w.iter().map(|z| z / w_norm).collect());
        }
        // Back substitution for the least-squares coefficients.
        let k = h.len();
        let mut y = vec![Complex64::default(); k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for l in i + 1..k {
                acc -= h[l][i] * y[l];
            }
            y[i] = if h[i][i].norm() > 0.0 { acc / h[i][i] } else { Complex64::default() };
        }
        for (yi, v) in y.iter().zip(&basis) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += yi * vk;
            }
        }
        let converged = estimate <= cfg.tol;
        let budget_left = tr.report.n_matvec < cfg.max_matvec;
        if converged || !budget_left || k == 0 {
            let (res_vec, rel) = tr.true_residual(op, &x, b)?;
            if rel <= cfg.tol {
                return Ok(tr.finish(x, rel));
            }
            if !budget_left || k == 0 {
                return Err(tr.fail(x, rel, "operator application budget exhausted"));
            }
            drift_restarts += 1;
            if drift_restarts > 3 {
                return Err(tr.fail(x, rel, "residual stagnated"));
            }
            // The recurrence estimate drifted from the true residual; restart from it.
            r = res_vec;
            tr.report.n_matvec += 1;
        } else {
            let ax = tr.apply(op, &x)?;
            r = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        }
        beta = norm(&r);
    }
}

/// Bi-CGStab; convergence is checked after both half steps, and a breakdown
/// triggers one restart from the current iterate.
pub fn bicgstab<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[Complex64],
    cfg: &SolverConfig,
) -> Result<(Vec<Complex64>, SolveReport)> {
    if let Some(done) = start(op, b, cfg)? {
        return Ok(done);
    }
    let n = b.len();
    let b_norm = norm(b);
    let mut tr = Tracker::new(Method::BiCgStab, b_norm);
    let zero = Complex64::default();
    let mut x = vec![zero; n];
    let mut best = (1.0, x.clone());
    let mut r = b.to_vec();
    let (mut breakdown_restarts, mut drift_restarts) = (0, 0);
    loop {
        let r_hat = r.clone();
        let mut p = vec![zero; n];
        let mut v = vec![zero; n];
        let (mut rho_old, mut alpha, mut omega) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let breakdown = loop {
            if tr.report.n_matvec + 1 > cfg.max_matvec {
                break false;
            }
            let rho = dot(&r_hat, &r);
            if rho.norm() < BREAKDOWN {
                break true;
            }
            let beta = (rho / rho_old) * (alpha / omega);
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            v = tr.apply(op, &p)?;
            let den = dot(&r_hat, &v);
            if den.norm() < BREAKDOWN {
                break true;
            }
            alpha = rho / den;
            let s: Vec<Complex64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
            tr.report.n_iter += 1;
            let s_rel = norm(&s) / b_norm;
            if s_rel <= cfg.tol {
                for (xi, pi) in x.iter_mut().zip(&p) {
                    *xi += alpha * pi;
                }
                tr.report.residual_history.push(s_rel);
                break false;
            }
            if tr.report.n_matvec + 1 > cfg.max_matvec {
                for (xi, pi) in x.iter_mut().zip(&p) {
                    *xi += alpha * pi;
                }
                tr.report.residual_history.push(s_rel);
                break false;
            }
            let t = tr.apply(op, &s)?;
            let tt = dot(&t, &t).re;
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { zero };
            for i in 0..n {
                x[i] += alpha * p[i] + omega * s[i];
            }
            r = s.iter().zip(&t).map(|(si, ti)| si - omega * ti).collect();
            let rel = norm(&r) / b_norm;
            tr.report.residual_history.push(rel);
            if rel < best.0 {
                best = (rel, x.clone());
            }
            if rel <= cfg.tol {
                break false;
            }
            if omega.norm() < BREAKDOWN {
                break true;
            }
            rho_old = rho;
        };
        let (res_vec, rel) = tr.true_residual(op, &x, b)?;
        if rel <= cfg.tol {
            return Ok(tr.finish(x, rel));
        }
        let reason = if tr.report.n_matvec >= cfg.max_matvec {
            Some("operator application budget exhausted")
        } else if breakdown {
            breakdown_restarts += 1;
            (breakdown_restarts > 1).then_some("breakdown after restart")
        } else {
            drift_restarts += 1;
            (drift_restarts > 3).then_some("residual stagnated")
        };
        if let Some(reason) = reason {
            if best.0 < rel {
                let (_, best_rel) = tr.true_residual(op, &best.1, b)?;
                if best_rel < rel {
                    return Err(tr.fail(best.1, best_rel, reason));
                }
            }
            return Err(tr.fail(x, rel, reason));
        }
        // The residual just computed seeds the restart.
        tr.report.n_matvec += 1;
        r = res_vec;
    }
}
