//! Precomputed translation tables for oversampling-2 application.
//!
//! The table `T` is the inverse DFT of the multiplier on the oversampling-4
//! lattice, i.e. the direct scheme applied to a unit impulse at the origin
//! (whose DFT is identically one), harvested at the offsets that box-to-box
//! convolution can reach. Radial kernels are even along every axis and
//! gradient kernels odd along their own axis, so only offsets `0..=n` per
//! axis are stored; shifted kernels keep the full `-n..n-1` range.

use num_complex::Complex64;
use rustfft::FftDirection;

use super::engine::{convolve_padded, SlabSpectrum};
use crate::error::{Error, Result};
use crate::grid::fft::Plans;
use crate::grid::{forward_dft, Field, FreqLattice, GridSpec};
use crate::kernels::{Kernel, KernelSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
enum Storage {
    /// `t` and `t_hat` over `0..=n` per axis with the given symmetry.
    Half { parity: [Parity; 3], t: Vec<Complex64>, t_hat: Vec<Complex64> },
    /// `t` over offsets `-n..n` (index `j + n`) and `t_hat` in DFT order, side `2n`.
    Full { t: Vec<Complex64>, t_hat: Vec<Complex64> },
}

/// Discrete kernel of the Nyström-discretised volume potential.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionTable {
    grid: GridSpec,
    spec: KernelSpec,
    derivative: Option<usize>,
    storage: Storage,
}

fn table_spec_check(spec: &KernelSpec, grid: GridSpec) -> Result<Kernel> {
    if spec.dim != grid.dim() {
        return Err(Error::ShapeMismatch(format!("{}D kernel on a {}D grid", spec.dim, grid.dim())));
    }
    Kernel::new(spec)
}

/// Table for `g * f`.
pub fn precompute_table(spec: &KernelSpec, grid: GridSpec) -> Result<ConvolutionTable> {
    build(spec, grid, None)
}

/// Table for `∂_axis (g * f)`.
pub fn precompute_gradient_table(
    spec: &KernelSpec,
    grid: GridSpec,
    axis: usize,
) -> Result<ConvolutionTable> {
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
    }
    build(spec, grid, Some(axis))
}

fn build(spec: &KernelSpec, grid: GridSpec, derivative: Option<usize>) -> Result<ConvolutionTable> {
    let kernel = table_spec_check(spec, grid)?;
    let lattice = FreqLattice::new(grid, 4)?;
    let n = grid.n();
    let d = grid.dim();
    let p = lattice.size();
    let nyq = (p / 2) as i64;
    let spectrum = |m: &[i64]| -> Complex64 {
        let s: Vec<f64> = m.iter().map(|&mi| lattice.frequency(mi)).collect();
        let g = kernel.spectral(&s);
        match derivative {
            Some(a) if m[a].abs() == nyq => Complex64::default(),
            Some(a) => g * Complex64::new(0.0, s[a]),
            None => g,
        }
    };
    let storage = if kernel.is_radial() {
        let mut parity = [Parity::Even; 3];
        if let Some(a) = derivative {
            parity[a] = Parity::Odd;
        }
        let plans: Vec<AxisPlan> = (0..d)
            .map(|a| AxisPlan::Half { half: 2 * n + 1, keep: n + 1, parity: parity[a] })
            .collect();
        let t = inverse_table(d, &plans, p, |m| spectrum(m));
        let t_hat = half_forward(&t, d, n, &parity);
        Storage::Half { parity, t, t_hat }
    } else {
        let plans: Vec<AxisPlan> = (0..d).map(|_| AxisPlan::Full { n }).collect();
        let t = inverse_table(d, &plans, p, |m| {
            let signed: Vec<i64> = m.iter().map(|&k| lattice.signed_index(k as usize)).collect();
            spectrum(&signed)
        });
        // Wrap offsets onto the oversampling-2 lattice and transform.
        let side = 2 * n;
        let mut t_hat = vec![Complex64::default(); t.len()];
        for (idx, &v) in t.iter().enumerate() {
            let mut rem = idx;
            let mut wrapped = 0;
            let mut stride = t.len();
            for _ in 0..d {
                stride /= side;
                let j = (rem / stride) as i64 - n as i64;
                rem %= stride;
                wrapped = wrapped * side + j.rem_euclid(side as i64) as usize;
            }
            t_hat[wrapped] = v;
        }
        forward_dft(&mut t_hat, &vec![side; d])?;
        Storage::Full { t, t_hat }
    };
    Ok(ConvolutionTable { grid, spec: spec.clone(), derivative, storage })
}

#[derive(Clone, Copy)]
enum AxisPlan {
    Half { half: usize, keep: usize, parity: Parity },
    Full { n: usize },
}

impl AxisPlan {
    fn input_len(&self, p: usize) -> usize {
        match *self {
            AxisPlan::Half { half, .. } => half,
            AxisPlan::Full { .. } => p,
        }
    }

    fn output_len(&self) -> usize {
        match *self {
            AxisPlan::Half { keep, .. } => keep,
            AxisPlan::Full { n } => 2 * n,
        }
    }
}

// Inverse transform of one line on the oversampling-4 lattice of side `p`.
struct LineInverse {
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl LineInverse {
    fn new(p: usize) -> Self {
        let fft = Plans::new().plan(p, FftDirection::Inverse);
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        Self { fft, buf: vec![Complex64::default(); p], scratch }
    }

    fn apply(&mut self, plan: AxisPlan, input: &[Complex64], output: &mut [Complex64]) {
        let p = self.buf.len();
        match plan {
            AxisPlan::Half { half, keep, parity } => {
                let sign = if parity == Parity::Odd { -1.0 } else { 1.0 };
                self.buf.iter_mut().for_each(|v| *v = Complex64::default());
                self.buf[..half].copy_from_slice(input);
                for m in 1..half - 1 {
                    self.buf[p - m] = sign * input[m];
                }
                if parity == Parity::Odd {
                    self.buf[half - 1] = Complex64::default();
                }
                self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
                output.copy_from_slice(&self.buf[..keep]);
            }
            AxisPlan::Full { n } => {
                self.buf.copy_from_slice(input);
                self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
                for (o, j) in output.iter_mut().zip(-(n as i64)..n as i64) {
                    *o = self.buf[j.rem_euclid(p as i64) as usize];
                }
            }
        }
    }
}

/// Applies `f(line_in, line_out)` to every line of `data` along `axis`.
fn map_axis<F: FnMut(&[Complex64], &mut [Complex64])>(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    out_len: usize,
    mut f: F,
) -> Vec<Complex64> {
    let len = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::default(); outer * out_len * inner];
    let mut line_in = vec![Complex64::default(); len];
    let mut line_out = vec![Complex64::default(); out_len];
    for o in 0..outer {
        for i in 0..inner {
            for t in 0..len {
                line_in[t] = data[(o * len + t) * inner + i];
            }
            f(&line_in, &mut line_out);
            for t in 0..out_len {
                out[(o * out_len + t) * inner + i] = line_out[t];
            }
        }
    }
    out
}

// T = IDFT_norm(G) restricted to the stored offsets, one leading-axis plane at a time.
fn inverse_table<F: FnMut(&[i64]) -> Complex64>(
    d: usize,
    plans: &[AxisPlan],
    p: usize,
    mut spectrum: F,
) -> Vec<Complex64> {
    let mut line = LineInverse::new(p);
    let ins: Vec<usize> = plans.iter().map(|a| a.input_len(p)).collect();
    let outs: Vec<usize> = plans.iter().map(|a| a.output_len()).collect();
    let plane_out: usize = outs[1..].iter().product();
    let mut partial = vec![Complex64::default(); ins[0] * plane_out];
    let mut m = vec![0i64; d];
    for m0 in 0..ins[0] {
        m[0] = m0 as i64;
        let plane_in: usize = ins[1..].iter().product();
        let mut plane = vec![Complex64::default(); plane_in];
        for (flat, v) in plane.iter_mut().enumerate() {
            let mut rem = flat;
            for a in (1..d).rev() {
                m[a] = (rem % ins[a]) as i64;
                rem /= ins[a];
            }
            *v = spectrum(&m);
        }
        let mut shape = ins[1..].to_vec();
        for a in (1..d).rev() {
            plane = map_axis(&plane, &shape, a - 1, outs[a], |i, o| line.apply(plans[a], i, o));
            shape[a - 1] = outs[a];
        }
        partial[m0 * plane_out..(m0 + 1) * plane_out].copy_from_slice(&plane);
    }
    let mut shape = outs.clone();
    shape[0] = ins[0];
    let mut t = map_axis(&partial, &shape, 0, outs[0], |i, o| line.apply(plans[0], i, o));
    let scale = 1.0 / (p as f64).powi(d as i32);
    t.iter_mut().for_each(|v| *v *= scale);
    t
}

// DFT on the oversampling-2 lattice of a half-stored table, kept half-stored.
fn half_forward(t: &[Complex64], d: usize, n: usize, parity: &[Parity; 3]) -> Vec<Complex64> {
    let side = 2 * n;
    let fft = Plans::new().plan(side, FftDirection::Forward);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex64::default(); side];
    let mut data = t.to_vec();
    let shape = vec![n + 1; d];
    for a in 0..d {
        let sign = if parity[a] == Parity::Odd { -1.0 } else { 1.0 };
        data = map_axis(&data, &shape, a, n + 1, |i, o| {
            buf[..=n].copy_from_slice(i);
            for j in 1..n {
                buf[side - j] = sign * i[j];
            }
            if parity[a] == Parity::Odd {
                buf[n] = Complex64::default();
            }
            fft.process_with_scratch(&mut buf, &mut scratch);
            o.copy_from_slice(&buf[..=n]);
        });
    }
    data
}

impl ConvolutionTable {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Axis of the derivative this table applies, if any.
    pub fn derivative(&self) -> Option<usize> {
        self.derivative
    }

    /// `T(j)` at an integer offset with entries in `-n..=n` (`±n` only for even axes).
    pub fn t_value(&self, offset: &[i64]) -> Option<Complex64> {
        let n = self.grid.n() as i64;
        if offset.len() != self.grid.dim() {
            return None;
        }
        match &self.storage {
            Storage::Half { parity, t, .. } => {
                let mut flat = 0;
                let mut sign = 1.0;
                for (a, &j) in offset.iter().enumerate() {
                    if j.abs() > n {
                        return None;
                    }
                    if j < 0 && parity[a] == Parity::Odd {
                        sign = -sign;
                    }
                    flat = flat * (n as usize + 1) + j.unsigned_abs() as usize;
                }
                Some(sign * t[flat])
            }
            Storage::Full { t, .. } => {
                let mut flat = 0;
                for &j in offset {
                    if j < -n || j >= n {
                        return None;
                    }
                    flat = flat * (2 * n as usize) + (j + n) as usize;
                }
                Some(t[flat])
            }
        }
    }

    /// Every stored offset `-n..n` per axis, row-major with index `j + n`.
    pub fn t_values(&self) -> Vec<Complex64> {
        let n = self.grid.n() as i64;
        let d = self.grid.dim();
        let side = 2 * n as usize;
        (0..side.pow(d as u32))
            .map(|flat| {
                let mut rem = flat;
                let mut off = vec![0i64; d];
                for a in (0..d).rev() {
                    off[a] = (rem % side) as i64 - n;
                    rem /= side;
                }
                self.t_value(&off).expect("offset in range")
            })
            .collect()
    }

    /// Nyström matrix entry coupling target node `i` and source node `j`
    /// (per-axis node labels), equal to `T(i - j)`.
    pub fn nystrom_entry(&self, target: &[i64], source: &[i64]) -> Result<Complex64> {
        let off: Vec<i64> = target.iter().zip(source).map(|(a, b)| a - b).collect();
        if target.len() != self.grid.dim()
            || source.len() != self.grid.dim()
            || self.grid.flat_index(target).is_none()
            || self.grid.flat_index(source).is_none()
        {
            return Err(Error::InvalidArgument("node labels outside the grid".into()));
        }
        self.t_value(&off)
            .ok_or_else(|| Error::InvalidArgument("offset outside the table".into()))
    }

    /// Rebuilds a table from exported `t_values` over offsets `-n..n`.
    pub fn from_t_values(
        spec: &KernelSpec,
        grid: GridSpec,
        derivative: Option<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let kernel = table_spec_check(spec, grid)?;
        let n = grid.n();
        let d = grid.dim();
        let side = 2 * n;
        if values.len() != side.pow(d as u32) {
            return Err(Error::ShapeMismatch(format!(
                "table needs {} values, got {}",
                side.pow(d as u32),
                values.len()
            )));
        }
        let storage = if kernel.is_radial() {
            let mut parity = [Parity::Even; 3];
            if let Some(a) = derivative {
                parity[a] = Parity::Odd;
            }
            // Offsets 0..=n; +n is recovered from -n by symmetry.
            let k = n + 1;
            let t: Vec<Complex64> = (0..k.pow(d as u32))
                .map(|flat| {
                    let mut rem = flat;
                    let mut idx = 0;
                    let mut sign = 1.0;
                    let mut stride = 1;
                    let mut acc = vec![0usize; d];
                    for a in (0..d).rev() {
                        acc[a] = rem % k;
                        rem /= k;
                    }
                    for a in (0..d).rev() {
                        let mut j = acc[a] as i64;
                        if j == n as i64 {
                            j = -j;
                            if parity[a] == Parity::Odd {
                                sign = -sign;
                            }
                        }
                        idx += (j + n as i64) as usize * stride;
                        stride *= side;
                    }
                    sign * values[idx]
                })
                .collect();
            let t_hat = half_forward(&t, d, n, &parity);
            Storage::Half { parity, t, t_hat }
        } else {
            let mut t_hat = vec![Complex64::default(); values.len()];
            for (idx, &v) in values.iter().enumerate() {
                let mut rem = idx;
                let mut wrapped = 0;
                let mut stride = values.len();
                for _ in 0..d {
                    stride /= side;
                    let j = (rem / stride) as i64 - n as i64;
                    rem %= stride;
                    wrapped = wrapped * side + j.rem_euclid(side as i64) as usize;
                }
                t_hat[wrapped] = v;
            }
            forward_dft(&mut t_hat, &vec![side; d])?;
            Storage::Full { t: values, t_hat }
        };
        Ok(Self { grid, spec: spec.clone(), derivative, storage })
    }

    fn spectrum_at(&self, k: [usize; 3]) -> Complex64 {
        let n = self.grid.n();
        let d = self.grid.dim();
        match &self.storage {
            Storage::Half { parity, t_hat, .. } => {
                let mut flat = 0;
                let mut sign = 1.0;
                for a in 0..d {
                    let mut m = k[a];
                    if m > n {
                        m = 2 * n - m;
                        if parity[a] == Parity::Odd {
                            sign = -sign;
                        }
                    }
                    flat = flat * (n + 1) + m;
                }
                sign * t_hat[flat]
            }
            Storage::Full { t_hat, .. } => {
                let flat = k[..d].iter().fold(0, |acc, &m| acc * 2 * n + m);
                t_hat[flat]
            }
        }
    }
}

struct TableSpectrum<'a> {
    tables: &'a [&'a ConvolutionTable],
}

impl SlabSpectrum for TableSpectrum<'_> {
    fn count(&self) -> usize {
        self.tables.len()
    }

    fn side(&self) -> usize {
        2 * self.tables[0].grid.n()
    }

    fn fill_slab(&self, k1: usize, out: &mut [Complex64]) {
        let p = self.side();
        let three = self.tables[0].grid.dim() == 3;
        let q = if three { p } else { 1 };
        for (c, table) in self.tables.iter().enumerate() {
            let block = &mut out[c * p * q..(c + 1) * p * q];
            for k0 in 0..p {
                for k2 in 0..q {
                    block[k0 * q + k2] = table.spectrum_at([k0, k1, k2]);
                }
            }
        }
    }
}

/// Applies the table with oversampling-2 zero padding.
pub fn convolve_precomputed(table: &ConvolutionTable, source: &Field) -> Result<Field> {
    Ok(convolve_precomputed_many(&[table], source)?.pop().expect("one output"))
}

/// Applies several tables to one source, sharing the forward transforms.
pub fn convolve_precomputed_many(tables: &[&ConvolutionTable], source: &Field) -> Result<Vec<Field>> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidArgument("no tables given".into()))?;
    for t in tables {
        if t.grid != source.grid() || t.grid != first.grid {
            return Err(Error::ShapeMismatch("table and source grids differ".into()));
        }
    }
    let spectrum = TableSpectrum { tables };
    convolve_padded(source.grid(), source.values(), &spectrum)
        .into_iter()
        .map(|v| Field::new(source.grid(), v))
        .collect()
}
