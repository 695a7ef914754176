//! Axis-wise FFT helpers shared by the grid transforms and the convolution engine.

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

pub(crate) struct Plans {
    planner: FftPlanner<f64>,
}

impl Plans {
    pub(crate) fn new() -> Self {
        Self { planner: FftPlanner::new() }
    }

    pub(crate) fn plan(&mut self, len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
        self.planner.plan_fft(len, direction)
    }
}

/// Transforms `data` (row-major, `shape`) along `axis` in place, unnormalised.
pub(crate) fn transform_axis(
    data: &mut [Complex64],
    shape: &[usize],
    axis: usize,
    fft: &Arc<dyn Fft<f64>>,
) {
    let len = shape[axis];
    if len <= 1 {
        return;
    }
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    if inner == 1 {
        fft.process_with_scratch(data, &mut scratch);
        return;
    }
    // Gather a block of `inner` lines into a contiguous buffer, transform, scatter back.
    let mut buf = vec![Complex64::default(); len * inner];
    for o in 0..outer {
        let block = &mut data[o * len * inner..(o + 1) * len * inner];
        for t in 0..len {
            for i in 0..inner {
                buf[i * len + t] = block[t * inner + i];
            }
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for t in 0..len {
            for i in 0..inner {
                block[t * inner + i] = buf[i * len + t];
            }
        }
    }
}
