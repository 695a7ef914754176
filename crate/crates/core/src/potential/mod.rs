//! Volume potentials `u = g * f` on a grid.
//!
//! Direct application multiplies by the truncated-kernel transform on the
//! oversampling-4 lattice. Precomputed tables store the resulting discrete
//! kernel and are applied with oversampling 2.

mod engine;
mod multiplier;
mod table;

use num_complex::Complex64;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::io::{read_array, write_array, Metadata, RawArray, ValueKind};
use crate::grid::{Field, GridSpec};
use crate::kernels::{Family, KernelSpec};

pub use multiplier::{SpectralMultiplier, MATERIALIZE_LIMIT};
pub use table::{
    convolve_precomputed, convolve_precomputed_many, precompute_gradient_table, precompute_table,
    ConvolutionTable, Parity,
};

use engine::convolve_padded;
use multiplier::GradientSpectrum;

/// `g * f` evaluated with oversampling-4 zero padding.
pub fn convolve_direct(mult: &SpectralMultiplier, source: &Field) -> Result<Field> {
    if mult.lattice().grid() != source.grid() {
        return Err(Error::ShapeMismatch("multiplier and source grids differ".into()));
    }
    let out = convolve_padded(source.grid(), source.values(), mult).pop().expect("one output");
    Field::new(source.grid(), out)
}

/// `∇(g * f)`, one field per axis.
pub fn convolve_gradient(mult: &SpectralMultiplier, source: &Field) -> Result<Vec<Field>> {
    if mult.lattice().grid() != source.grid() {
        return Err(Error::ShapeMismatch("multiplier and source grids differ".into()));
    }
    let spectrum = GradientSpectrum { base: mult };
    convolve_padded(source.grid(), source.values(), &spectrum)
        .into_iter()
        .map(|v| Field::new(source.grid(), v))
        .collect()
}

/// Writes `T` over offsets `-n..n` with the kernel description in the sidecar.
pub fn export_table(table: &ConvolutionTable, path: &Path) -> Result<()> {
    let grid = table.grid();
    let spec = table.spec();
    let mut meta = Metadata::new();
    meta.insert("kind".into(), "convolution_table".into());
    meta.insert("dim".into(), grid.dim().to_string());
    meta.insert("grid_n".into(), grid.n().to_string());
    meta.insert("offset_min".into(), format!("-{}", grid.n()));
    meta.insert("family".into(), spec.family.name().into());
    meta.insert("k".into(), format!("{:e}", spec.k));
    meta.insert("truncation".into(), format!("{:e}", spec.truncation));
    if let Some(h) = spec.h_vec {
        meta.insert("h_vec".into(), format!("{:e},{:e},{:e}", h[0], h[1], h[2]));
    }
    if let Some(a) = table.derivative() {
        meta.insert("derivative_axis".into(), a.to_string());
    }
    let array = RawArray { dim: grid.dim(), side: 2 * grid.n(), values: table.t_values() };
    write_array(path, &array, ValueKind::Complex, &meta)
}

/// Reads a table written by [`export_table`]; the transformed table is recomputed.
pub fn import_table(path: &Path) -> Result<ConvolutionTable> {
    let (array, meta) = read_array(path)?;
    let get = |key: &str| {
        meta.get(key)
            .ok_or_else(|| Error::Format(format!("table metadata lacks `{key}`")))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?.parse().map_err(|_| Error::Format(format!("bad value for `{key}`")))
    };
    if get("kind")? != "convolution_table" {
        return Err(Error::Format("file is not a convolution table".into()));
    }
    let n: usize = get("grid_n")?.parse().map_err(|_| Error::Format("bad grid_n".into()))?;
    if array.side != 2 * n || get("offset_min")? != &format!("-{n}") {
        return Err(Error::Format("table extent does not match grid_n".into()));
    }
    let grid = GridSpec::new(array.dim, n)?;
    let family: Family = get("family")?.parse()?;
    let mut spec = KernelSpec::new(family, array.dim)
        .with_k(num("k")?)
        .with_truncation(num("truncation")?);
    if let Some(h) = meta.get("h_vec") {
        let parts: Vec<f64> = h
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::Format("bad h_vec".into())))
            .collect::<Result<_>>()?;
        if parts.len() != 3 {
            return Err(Error::Format("h_vec needs three components".into()));
        }
        spec.h_vec = Some([parts[0], parts[1], parts[2]]);
    }
    let derivative = match meta.get("derivative_axis") {
        Some(a) => Some(a.parse().map_err(|_| Error::Format("bad derivative_axis".into()))?),
        None => None,
    };
    ConvolutionTable::from_t_values(&spec, grid, derivative, array.values)
}

/// Discrete impulse at the grid origin.
pub fn delta(grid: GridSpec) -> Field {
    let mut f = Field::zeros(grid);
    let origin = vec![0i64; grid.dim()];
    let idx = grid.flat_index(&origin).expect("origin is a node");
    f.values_mut()[idx] = Complex64::new(1.0, 0.0);
    f
}
