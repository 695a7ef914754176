//! Gauss–Legendre rules and a globally adaptive integrator for the reference oracles.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// n-point Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Absolute and relative targets for [`integrate_adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-15, rel: 1e-13, max_panels: 50_000 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const RULE_POINTS: usize = 20;

fn panel<F: FnMut(f64) -> Complex64>(rule: &GaussLegendre, f: &mut F, a: f64, b: f64) -> Panel {
    let m = 0.5 * (a + b);
    let whole = rule.integrate(&mut *f, a, b);
    let halves = rule.integrate(&mut *f, a, m) + rule.integrate(&mut *f, m, b);
    Panel { a, b, value: halves, error: (whole - halves).norm() }
}

/// Integrates `f` over `[a, b]`, splitting first at the interior `breaks`
/// (points where `f` or a derivative is discontinuous).
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration limits must be finite: [{a}, {b}]")));
    }
    let rule = GaussLegendre::new(RULE_POINTS);
    let mut edges = vec![a];
    let mut interior: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    interior.sort_by(f64::total_cmp);
    edges.extend(interior);
    edges.push(b);
    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            heap.push(panel(&rule, &mut f, w[0], w[1]));
        }
    }
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = tol.abs.max(tol.rel * value.norm());
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite("integrand produced a non-finite value".into()));
        }
        if error <= target {
            return Ok(QuadResult { value, error_estimate: error, panels: heap.len() });
        }
        if heap.len() >= tol.max_panels {
            return Err(Error::Quadrature { estimate: error, tolerance: target });
        }
        let worst = heap.pop().expect("at least one panel");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::Quadrature { estimate: error, tolerance: target });
        }
        heap.push(panel(&rule, &mut f, worst.a, m));
        heap.push(panel(&rule, &mut f, m, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(8);
        let v = rule.integrate(|x| Complex64::from(x.powi(15) + x.powi(14)), -1.0, 1.0);
        assert!((v.re - 2.0 / 15.0).abs() < 1e-15);
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = integrate_adaptive(|x| Complex64::from(x.ln()), 0.0, 1.0, &[], Tolerance::default())
            .unwrap();
        assert!((r.value.re + 1.0).abs() < 1e-13);
    }

    #[test]
    fn reports_failure() {
        let tol = Tolerance { abs: 0.0, rel: 1e-15, max_panels: 4 };
        let r = integrate_adaptive(|x| Complex64::from((50.0 * x).sin()), 0.0, 10.0, &[], tol);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
