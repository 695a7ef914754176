//! Smooth dielectric built from Gaussian atoms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct AtomSet {
    pub centers: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
    pub mu2: f64,
    pub eps_in: f64,
    pub eps_out: f64,
}

/// `ε` and `∇ε` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DielectricValue {
    pub eps: f64,
    pub grad: [f64; 3],
}

impl AtomSet {
    pub const RADIUS: f64 = 0.022;
    pub const MU2: f64 = 2.0;
    pub const EPS_IN: f64 = 2.0;
    pub const EPS_OUT: f64 = 80.0;

    pub fn new(centers: Vec<[f64; 3]>, radii: Vec<f64>, mu2: f64, eps_in: f64, eps_out: f64) -> Result<Self> {
        let set = Self { centers, radii, mu2, eps_in, eps_out };
        set.validate()?;
        Ok(set)
    }

    /// `m` atoms with centers drawn uniformly from the ball of radius 0.35.
    pub fn synthetic(m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut centers = Vec::with_capacity(m);
        while centers.len() < m {
            let c: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.35..0.35));
            if c.iter().map(|v| v * v).sum::<f64>() < 0.35 * 0.35 {
                centers.push(c);
            }
        }
        Self {
            radii: vec![Self::RADIUS; m],
            centers,
            mu2: Self::MU2,
            eps_in: Self::EPS_IN,
            eps_out: Self::EPS_OUT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.len() != self.radii.len() {
            return Err(Error::ShapeMismatch("one radius per atom center is required".into()));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !self.radii.iter().all(|&r| positive(r)) {
            return Err(Error::InvalidArgument("atom radii must be positive".into()));
        }
        if !positive(self.mu2) || !positive(self.eps_in) || !positive(self.eps_out) {
            return Err(Error::InvalidArgument("mu2, eps_in and eps_out must be positive".into()));
        }
        if self.centers.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("atom centers must be finite".into()));
        }
        Ok(())
    }

    /// `ε = q ε_in + (1 - q) ε_out` with `q = 1 - Π(1 - α_i)` and its gradient.
    pub fn eval(&self, x: &[f64]) -> DielectricValue {
        let m = self.centers.len();
        let mut x3 = [0.0; 3];
        x3[..x.len()].copy_from_slice(x);
        let mut alpha = Vec::with_capacity(m);
        let mut dalpha = Vec::with_capacity(m);
        for (c, &rad) in self.centers.iter().zip(&self.radii) {
            let scale = self.mu2 * rad * rad;
            let d = [x3[0] - c[0], x3[1] - c[1], x3[2] - c[2]];
            let mut a = (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / scale).exp();
            if a < 1e-300 {
                a = 0.0;
            }
            alpha.push(a);
            dalpha.push(d.map(|v| -2.0 * a * v / scale));
        }
        // Prefix and suffix products of (1 - α) give Π_{j≠i} without division.
        let mut suffix = vec![1.0; m + 1];
        for i in (0..m).rev() {
            suffix[i] = suffix[i + 1] * (1.0 - alpha[i]);
        }
        let mut prefix = 1.0;
        let mut grad_q = [0.0; 3];
        for i in 0..m {
            if alpha[i] != 0.0 {
                let others = prefix * suffix[i + 1];
                for a in 0..3 {
                    grad_q[a] += dalpha[i][a] * others;
                }
            }
            prefix *= 1.0 - alpha[i];
        }
        let q = 1.0 - suffix[0];
        let jump = self.eps_in - self.eps_out;
        DielectricValue { eps: self.eps_out + q * jump, grad: grad_q.map(|g| g * jump) }
    }

    /// `ε` and the components of `∇ε` on every node.
    pub fn sample(&self, grid: GridSpec) -> (Vec<f64>, Vec<Vec<f64>>) {
        let d = grid.dim();
        let mut eps = Vec::with_capacity(grid.len());
        let mut grad = vec![Vec::with_capacity(grid.len()); d];
        for i in 0..grid.len() {
            let v = self.eval(&grid.point(i)[..d]);
            eps.push(v.eps);
            for a in 0..d {
                grad[a].push(v.grad[a]);
            }
        }
        (eps, grad)
    }
}
