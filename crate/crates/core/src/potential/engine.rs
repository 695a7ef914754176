//! Zero-padded aperiodic convolution without materialising the padded array.
//!
//! The source is transformed axis by axis; padded lines are only created for
//! rows that carry data, and the inverse transform keeps just the `n` target
//! positions per axis. Peak memory is one `n × P^(d-1)` array per output.

use num_complex::Complex64;
use rustfft::FftDirection;

use crate::grid::fft::{transform_axis, Plans};
use crate::grid::GridSpec;

/// Frequency-domain multipliers on a padded lattice, produced one slab at a time.
pub(crate) trait SlabSpectrum {
    /// Number of multipliers applied to the same source.
    fn count(&self) -> usize;

    /// Lattice side `P`.
    fn side(&self) -> usize;

    /// Fills `out[c * P * q + k0 * q + k2]` for the slab with axis-1 DFT index
    /// `k1`, where `q = P` in 3D and `q = 1` in 2D. In 2D the slab is the
    /// column with axis-1 index `k1`.
    fn fill_slab(&self, k1: usize, out: &mut [Complex64]);
}

fn positions(grid: GridSpec, p: usize) -> Vec<usize> {
    (0..grid.n()).map(|i| grid.offset(i).rem_euclid(p as i64) as usize).collect()
}

/// Returns `crop(IDFT(spectrum_c · DFT(embed(source))))` for every multiplier `c`.
pub(crate) fn convolve_padded(
    grid: GridSpec,
    source: &[Complex64],
    spectrum: &dyn SlabSpectrum,
) -> Vec<Vec<Complex64>> {
    assert_eq!(source.len(), grid.len());
    if grid.dim() == 2 {
        convolve2(grid, source, spectrum)
    } else {
        convolve3(grid, source, spectrum)
    }
}

fn convolve2(grid: GridSpec, source: &[Complex64], spectrum: &dyn SlabSpectrum) -> Vec<Vec<Complex64>> {
    let n = grid.n();
    let p = spectrum.side();
    let count = spectrum.count();
    let pos = positions(grid, p);
    let mut plans = Plans::new();
    let fwd = plans.plan(p, FftDirection::Forward);
    let inv = plans.plan(p, FftDirection::Inverse);
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];

    // Rows: axis-1 transform of each source row, [i0][k1].
    let mut rows = vec![Complex64::default(); n * p];
    for i0 in 0..n {
        let row = &mut rows[i0 * p..(i0 + 1) * p];
        for i1 in 0..n {
            row[pos[i1]] = source[i0 * n + i1];
        }
        fwd.process_with_scratch(row, &mut scratch);
    }
    // Columns: padded axis-0 lines, one per k1, [k1][k0].
    let mut cols = vec![Complex64::default(); p * p];
    for k1 in 0..p {
        for i0 in 0..n {
            cols[k1 * p + pos[i0]] = rows[i0 * p + k1];
        }
    }
    fwd.process_with_scratch(&mut cols, &mut scratch);
    let mut mult = vec![Complex64::default(); count * p];
    let mut outs = vec![vec![Complex64::default(); n * p]; count];
    let mut line = vec![Complex64::default(); p];
    for k1 in 0..p {
        spectrum.fill_slab(k1, &mut mult);
        let col = &cols[k1 * p..(k1 + 1) * p];
        for (c, out) in outs.iter_mut().enumerate() {
            for k0 in 0..p {
                line[k0] = col[k0] * mult[c * p + k0];
            }
            inv.process_with_scratch(&mut line, &mut scratch);
            for i0 in 0..n {
                out[i0 * p + k1] = line[pos[i0]];
            }
        }
    }
    drop(cols);
    let scale = 1.0 / (p * p) as f64;
    outs.into_iter()
        .map(|mut half| {
            let mut result = vec![Complex64::default(); n * n];
            for i0 in 0..n {
                let row = &mut half[i0 * p..(i0 + 1) * p];
                inv.process_with_scratch(row, &mut scratch);
                for i1 in 0..n {
                    result[i0 * n + i1] = row[pos[i1]] * scale;
                }
            }
            result
        })
        .collect()
}

fn convolve3(grid: GridSpec, source: &[Complex64], spectrum: &dyn SlabSpectrum) -> Vec<Vec<Complex64>> {
    let n = grid.n();
    let p = spectrum.side();
    let pp = p * p;
    let count = spectrum.count();
    let pos = positions(grid, p);
    let mut plans = Plans::new();
    let fwd = plans.plan(p, FftDirection::Forward);
    let inv = plans.plan(p, FftDirection::Inverse);
    let mut scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];

    // Stage 1: transform axes 2 and 1 of every x-slice, giving [i0][k1][k2].
    let mut first = vec![Complex64::default(); n * pp];
    for i0 in 0..n {
        let plane = &mut first[i0 * pp..(i0 + 1) * pp];
        for i1 in 0..n {
            let row = &mut plane[pos[i1] * p..(pos[i1] + 1) * p];
            for i2 in 0..n {
                row[pos[i2]] = source[(i0 * n + i1) * n + i2];
            }
            fwd.process_with_scratch(row, &mut scratch);
        }
        transform_axis(plane, &[p, p], 0, &fwd);
    }

    // Stage 2: per k1 slab, pad and transform axis 0, multiply, invert, crop.
    let mut extra: Vec<Vec<Complex64>> =
        (1..count).map(|_| vec![Complex64::default(); n * pp]).collect();
    let mut mult = vec![Complex64::default(); count * pp];
    let mut slab = vec![Complex64::default(); pp];
    let mut work = vec![Complex64::default(); pp];
    for k1 in 0..p {
        spectrum.fill_slab(k1, &mut mult);
        // slab[k2][k0], padded along k0.
        slab.iter_mut().for_each(|v| *v = Complex64::default());
        for i0 in 0..n {
            let src = &first[i0 * pp + k1 * p..i0 * pp + (k1 + 1) * p];
            for k2 in 0..p {
                slab[k2 * p + pos[i0]] = src[k2];
            }
        }
        fwd.process_with_scratch(&mut slab, &mut scratch);
        for c in 0..count {
            let m = &mult[c * pp..(c + 1) * pp];
            for k2 in 0..p {
                for k0 in 0..p {
                    work[k2 * p + k0] = slab[k2 * p + k0] * m[k0 * p + k2];
                }
            }
            inv.process_with_scratch(&mut work, &mut scratch);
            let dst = if c == 0 { &mut first } else { &mut extra[c - 1] };
            for i0 in 0..n {
                let row = &mut dst[i0 * pp + k1 * p..i0 * pp + (k1 + 1) * p];
                for k2 in 0..p {
                    row[k2] = work[k2 * p + pos[i0]];
                }
            }
        }
    }
    drop(slab);
    drop(work);

    // Stage 3: invert axes 1 and 2, keeping target rows only.
    let scale = 1.0 / (pp * p) as f64;
    let mut results = Vec::with_capacity(count);
    let mut all = vec![first];
    all.extend(extra);
    for mut data in all {
        let mut result = vec![Complex64::default(); n * n * n];
        for i0 in 0..n {
            let plane = &mut data[i0 * pp..(i0 + 1) * pp];
            transform_axis(plane, &[p, p], 0, &inv);
            for i1 in 0..n {
                let row = &mut plane[pos[i1] * p..(pos[i1] + 1) * p];
                inv.process_with_scratch(row, &mut scratch);
                for i2 in 0..n {
                    result[(i0 * n + i1) * n + i2] = row[pos[i2]] * scale;
                }
            }
        }
        results.push(result);
    }
    results
}
