//! Uniform grids on the unit box, complex fields, padded frequency lattices and DFTs.
//!
//! A grid with `n` points per axis has nodes `x_j = j / n` for
//! `j in {-n/2+1, ..., n/2}`; node `j` is stored at position `j + n/2 - 1`
//! (row-major, axis 0 slowest). A padded lattice of size `P = pad * n` holds
//! node `j` at position `j mod P`, and frequency index `m` corresponds to
//! `s_m = 2 pi m / pad` with `m` in `{-P/2, ..., P/2 - 1}`.

pub(crate) mod fft;
pub mod io;
mod norms;

use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use norms::{common_node_errors, relative_errors, ErrorNorms};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    n: usize,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!("n must be even and at least 2, got {n}")));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Total number of nodes, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis extents with a trailing 1 in two dimensions.
    pub fn shape3(&self) -> [usize; 3] {
        if self.dim == 2 {
            [self.n, self.n, 1]
        } else {
            [self.n; 3]
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    /// Integer node label `j` of storage position `i` along one axis.
    pub fn offset(&self, i: usize) -> i64 {
        i as i64 - (self.n / 2) as i64 + 1
    }

    /// Storage position of node label `j`, if it lies in the grid.
    pub fn position(&self, j: i64) -> Option<usize> {
        let i = j + (self.n / 2) as i64 - 1;
        (i >= 0 && (i as usize) < self.n).then_some(i as usize)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        self.offset(i) as f64 / self.n as f64
    }

    /// Per-axis node labels of a flat index (unused axes are 0).
    pub fn labels(&self, flat: usize) -> [i64; 3] {
        let [_, n1, n2] = self.shape3();
        let i0 = flat / (n1 * n2);
        let i1 = (flat / n2) % n1;
        let i2 = flat % n2;
        if self.dim == 2 {
            [self.offset(i0), self.offset(i1), 0]
        } else {
            [self.offset(i0), self.offset(i1), self.offset(i2)]
        }
    }

    /// Coordinates of a flat index (unused axes are 0).
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let l = self.labels(flat);
        let h = self.h();
        [l[0] as f64 * h, l[1] as f64 * h, l[2] as f64 * h]
    }

    /// Flat index of per-axis node labels.
    pub fn flat_index(&self, labels: &[i64]) -> Option<usize> {
        if labels.len() != self.dim {
            return None;
        }
        let mut flat = 0;
        for &j in labels {
            flat = flat * self.n + self.position(j)?;
        }
        Some(flat)
    }
}

/// Complex samples on every node of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: GridSpec,
    data: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "field needs {} samples, got {}",
                grid.len(),
                data.len()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, data: vec![Complex64::default(); grid.len()] }
    }

    /// Samples `f` at every node; the slice holds `dim` coordinates.
    pub fn from_fn<F: FnMut(&[f64]) -> Complex64>(grid: GridSpec, mut f: F) -> Self {
        let d = grid.dim();
        let data = (0..grid.len())
            .map(|i| {
                let p = grid.point(i);
                f(&p[..d])
            })
            .collect();
        Self { grid, data }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.data
    }

    /// Value at per-axis node labels.
    pub fn at(&self, labels: &[i64]) -> Option<Complex64> {
        self.grid.flat_index(labels).map(|i| self.data[i])
    }

    pub fn map<F: FnMut(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { grid: self.grid, data: self.data.iter().copied().map(f).collect() }
    }

    pub fn zip_map<F: FnMut(Complex64, Complex64) -> Complex64>(
        &self,
        other: &Field,
        mut f: F,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, data })
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::ShapeMismatch(format!(
                "grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Discrete L2 norm `sqrt(h^d sum |u|^2)`.
    pub fn norm_l2(&self) -> f64 {
        let w = self.grid.h().powi(self.grid.dim() as i32);
        (w * self.data.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Frequency lattice of a grid zero-padded by `pad` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreqLattice {
    grid: GridSpec,
    pad: usize,
}

impl FreqLattice {
    pub fn new(grid: GridSpec, pad: usize) -> Result<Self> {
        if pad != 2 && pad != 4 {
            return Err(Error::InvalidArgument(format!("pad factor must be 2 or 4, got {pad}")));
        }
        Ok(Self { grid, pad })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn pad(&self) -> usize {
        self.pad
    }

    /// Points per axis, `pad * n`.
    pub fn size(&self) -> usize {
        self.pad * self.grid.n()
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.size(); self.grid.dim()]
    }

    /// Signed frequency index of DFT position `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let p = self.size();
        if k < p / 2 {
            k as i64
        } else {
            k as i64 - p as i64
        }
    }

    /// DFT position of signed frequency index `m`.
    pub fn dft_index(&self, m: i64) -> usize {
        m.rem_euclid(self.size() as i64) as usize
    }

    /// Frequency `s_m = 2 pi m / pad`.
    pub fn frequency(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.pad as f64
    }

    /// Frequencies along one axis in DFT order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        (0..self.size()).map(|k| self.frequency(self.signed_index(k))).collect()
    }

    /// Padded-array position of grid storage position `i`.
    pub fn padded_position(&self, i: usize) -> usize {
        self.grid.offset(i).rem_euclid(self.size() as i64) as usize
    }
}

/// Zero-pads a field onto its `pad`-lattice.
pub fn embed(field: &Field, lattice: &FreqLattice) -> Result<Vec<Complex64>> {
    if field.grid() != lattice.grid() {
        return Err(Error::ShapeMismatch("field and lattice grids differ".into()));
    }
    let grid = field.grid();
    let p = lattice.size();
    let d = grid.dim();
    let mut out = vec![Complex64::default(); p.pow(d as u32)];
    let pos: Vec<usize> = (0..grid.n()).map(|i| lattice.padded_position(i)).collect();
    let n = grid.n();
    for (flat, &v) in field.values().iter().enumerate() {
        let mut idx = 0;
        let mut rem = flat;
        let mut stride_in = grid.len();
        for _ in 0..d {
            stride_in /= n;
            let i = rem / stride_in;
            rem %= stride_in;
            idx = idx * p + pos[i];
        }
        out[idx] = v;
    }
    Ok(out)
}

/// Reads the grid nodes back out of a padded array.
pub fn extract(padded: &[Complex64], lattice: &FreqLattice) -> Result<Field> {
    let grid = lattice.grid();
    let p = lattice.size();
    let d = grid.dim();
    if padded.len() != p.pow(d as u32) {
        return Err(Error::ShapeMismatch(format!(
            "padded array needs {} samples, got {}",
            p.pow(d as u32),
            padded.len()
        )));
    }
    let pos: Vec<usize> = (0..grid.n()).map(|i| lattice.padded_position(i)).collect();
    let n = grid.n();
    let data = (0..grid.len())
        .map(|flat| {
            let mut idx = 0;
            let mut rem = flat;
            let mut stride_in = grid.len();
            for _ in 0..d {
                stride_in /= n;
                let i = rem / stride_in;
                rem %= stride_in;
                idx = idx * p + pos[i];
            }
            padded[idx]
        })
        .collect();
    Field::new(grid, data)
}

fn check_shape(data: &[Complex64], shape: &[usize]) -> Result<()> {
    let total: usize = shape.iter().product();
    if total != data.len() || shape.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "array of {} samples does not match shape {shape:?}",
            data.len()
        )));
    }
    Ok(())
}

fn dft(data: &mut [Complex64], shape: &[usize], direction: FftDirection) -> Result<()> {
    check_shape(data, shape)?;
    let mut plans = fft::Plans::new();
    for (axis, &len) in shape.iter().enumerate() {
        let plan = plans.plan(len, direction);
        fft::transform_axis(data, shape, axis, &plan);
    }
    Ok(())
}

/// Unnormalised forward DFT, `sum_j a_j exp(-2 pi i j.k / N)`, in place.
pub fn forward_dft(data: &mut [Complex64], shape: &[usize]) -> Result<()> {
    dft(data, shape, FftDirection::Forward)
}

/// Normalised inverse DFT (`1/N` times the conjugate sum), in place.
pub fn inverse_dft(data: &mut [Complex64], shape: &[usize]) -> Result<()> {
    dft(data, shape, FftDirection::Inverse)?;
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
    Ok(())
}

/// `i s_m` along one axis of the lattice, in DFT order. The Nyquist entry
/// (`m = -P/2`) is set to zero so that the multiplier is odd.
pub fn spectral_derivative_multiplier(lattice: &FreqLattice, axis: usize) -> Result<Vec<Complex64>> {
    if axis >= lattice.grid().dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for dimension {}",
            lattice.grid().dim()
        )));
    }
    let p = lattice.size();
    Ok((0..p)
        .map(|k| {
            let m = lattice.signed_index(k);
            if m == -((p / 2) as i64) {
                Complex64::default()
            } else {
                Complex64::new(0.0, lattice.frequency(m))
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_convention() {
        let g = GridSpec::new(2, 8).unwrap();
        assert_eq!(g.offset(0), -3);
        assert_eq!(g.offset(7), 4);
        assert_eq!(g.coordinate(7), 0.5);
        assert_eq!(g.flat_index(&[0, 0]), Some(3 * 8 + 3));
        assert!(GridSpec::new(2, 7).is_err());
        assert!(GridSpec::new(4, 8).is_err());
    }

    #[test]
    fn embed_extract_roundtrip() {
        let g = GridSpec::new(3, 4).unwrap();
        let f = Field::from_fn(g, |x| Complex64::new(x[0] + 2.0 * x[1], x[2]));
        let lat = FreqLattice::new(g, 2).unwrap();
        let padded = embed(&f, &lat).unwrap();
        assert_eq!(extract(&padded, &lat).unwrap(), f);
    }
}
