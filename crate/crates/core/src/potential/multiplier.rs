use num_complex::Complex64;

use super::engine::SlabSpectrum;
use crate::error::{Error, Result};
use crate::grid::{FreqLattice, GridSpec};
use crate::kernels::{Kernel, KernelSpec};

/// Lattices up to this many points are cached by [`SpectralMultiplier::materialize`].
pub const MATERIALIZE_LIMIT: usize = 1 << 24;

/// Samples of a truncated kernel's transform on a padded frequency lattice.
///
/// Values are produced on demand; `materialize` caches the whole lattice for
/// repeated use when it fits under [`MATERIALIZE_LIMIT`].
#[derive(Clone, Debug)]
pub struct SpectralMultiplier {
    kernel: Kernel,
    lattice: FreqLattice,
    freqs: Vec<f64>,
    cache: Option<Vec<Complex64>>,
}

impl SpectralMultiplier {
    /// Multiplier on the oversampling-4 lattice used for direct convolution.
    pub fn new(spec: &KernelSpec, grid: GridSpec) -> Result<Self> {
        Self::with_pad(spec, grid, 4)
    }

    pub fn with_pad(spec: &KernelSpec, grid: GridSpec, pad: usize) -> Result<Self> {
        if spec.dim != grid.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}D kernel on a {}D grid",
                spec.dim,
                grid.dim()
            )));
        }
        let kernel = Kernel::new(spec)?;
        let lattice = FreqLattice::new(grid, pad)?;
        let freqs = lattice.axis_frequencies();
        Ok(Self { kernel, lattice, freqs, cache: None })
    }

    pub fn lattice(&self) -> FreqLattice {
        self.lattice
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn spec(&self) -> &KernelSpec {
        self.kernel.spec()
    }

    /// Caches every lattice value. Returns false if the lattice is too large.
    pub fn materialize(&mut self) -> bool {
        if self.cache.is_some() {
            return true;
        }
        let p = self.lattice.size();
        let total = p.pow(self.lattice.grid().dim() as u32);
        if total > MATERIALIZE_LIMIT {
            return false;
        }
        let q = if self.lattice.grid().dim() == 3 { p } else { 1 };
        let mut values = vec![Complex64::default(); total];
        let mut slab = vec![Complex64::default(); p * q];
        for k1 in 0..p {
            self.compute_slab(k1, &mut slab);
            for k0 in 0..p {
                for k2 in 0..q {
                    values[(k0 * p + k1) * q + k2] = slab[k0 * q + k2];
                }
            }
        }
        self.cache = Some(values);
        true
    }

    pub fn is_materialized(&self) -> bool {
        self.cache.is_some()
    }

    /// Value at DFT-ordered lattice indices.
    pub fn value(&self, index: &[usize]) -> Complex64 {
        let p = self.lattice.size();
        if let Some(cache) = &self.cache {
            let flat = index.iter().fold(0, |acc, &k| acc * p + k);
            return cache[flat];
        }
        let s: Vec<f64> = index.iter().map(|&k| self.freqs[k]).collect();
        self.kernel.spectral(&s)
    }

    /// All values in DFT order (row-major).
    pub fn values(&self) -> Vec<Complex64> {
        if let Some(cache) = &self.cache {
            return cache.clone();
        }
        let p = self.lattice.size();
        let d = self.lattice.grid().dim();
        (0..p.pow(d as u32))
            .map(|flat| {
                let mut idx = vec![0; d];
                let mut rem = flat;
                for a in (0..d).rev() {
                    idx[a] = rem % p;
                    rem /= p;
                }
                self.value(&idx)
            })
            .collect()
    }

    // out[k0 * q + k2] for axis-1 index k1.
    fn compute_slab(&self, k1: usize, out: &mut [Complex64]) {
        let p = self.lattice.size();
        let three = self.lattice.grid().dim() == 3;
        let q = if three { p } else { 1 };
        let f = &self.freqs;
        if !self.kernel.is_radial() {
            for k0 in 0..p {
                for k2 in 0..q {
                    out[k0 * q + k2] = if three {
                        self.kernel.spectral(&[f[k0], f[k1], f[k2]])
                    } else {
                        self.kernel.spectral(&[f[k0], f[k1]])
                    };
                }
            }
            return;
        }
        // Radial kernels: evaluate the nonnegative quadrant and mirror.
        let half = p / 2;
        let s1 = f[k1] * f[k1];
        let mirror = |k: usize| if k == 0 || k == half { k } else { p - k };
        for k0 in 0..=half {
            for k2 in 0..=(if three { half } else { 0 }) {
                let s2 = f[k0] * f[k0] + s1 + if three { f[k2] * f[k2] } else { 0.0 };
                let v = self.kernel.radial(s2.sqrt());
                let (m0, m2) = (mirror(k0), if three { mirror(k2) } else { 0 });
                out[k0 * q + k2] = v;
                out[m0 * q + k2] = v;
                if three {
                    out[k0 * q + m2] = v;
                    out[m0 * q + m2] = v;
                }
            }
        }
    }
}

impl SlabSpectrum for SpectralMultiplier {
    fn count(&self) -> usize {
        1
    }

    fn side(&self) -> usize {
        self.lattice.size()
    }

    fn fill_slab(&self, k1: usize, out: &mut [Complex64]) {
        let p = self.lattice.size();
        let q = if self.lattice.grid().dim() == 3 { p } else { 1 };
        match &self.cache {
            Some(cache) => {
                for k0 in 0..p {
                    let base = (k0 * p + k1) * q;
                    out[k0 * q..(k0 + 1) * q].copy_from_slice(&cache[base..base + q]);
                }
            }
            None => self.compute_slab(k1, out),
        }
    }
}

/// The multiplier times `i s_a` for each axis, with the Nyquist plane zeroed.
pub(crate) struct GradientSpectrum<'a> {
    pub(crate) base: &'a SpectralMultiplier,
}

impl SlabSpectrum for GradientSpectrum<'_> {
    fn count(&self) -> usize {
        self.base.lattice.grid().dim()
    }

    fn side(&self) -> usize {
        self.base.lattice.size()
    }

    fn fill_slab(&self, k1: usize, out: &mut [Complex64]) {
        let p = self.side();
        let d = self.count();
        let q = if d == 3 { p } else { 1 };
        let block = p * q;
        self.base.fill_slab(k1, &mut out[..block]);
        let f = &self.base.freqs;
        let nyq = p / 2;
        let factor = |k: usize| if k == nyq { Complex64::default() } else { Complex64::new(0.0, f[k]) };
        let (head, rest) = out.split_at_mut(block);
        for k0 in 0..p {
            for k2 in 0..q {
                let g = head[k0 * q + k2];
                let idx = k0 * q + k2;
                rest[idx] = g * factor(k1);
                if d == 3 {
                    rest[block + idx] = g * factor(k2);
                }
                head[idx] = g * factor(k0);
            }
        }
    }
}
