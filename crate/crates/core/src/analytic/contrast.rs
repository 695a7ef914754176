//! Contrast functions `q(x)` for the Lippmann–Schwinger tests.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{io, Field, GridSpec};

pub const LENS_RADIUS: f64 = 0.45;
pub const EATON_N_MAX: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Debug, PartialEq)]
pub enum Contrast {
    /// `exp(-½ (|x| / 0.25)^8)`.
    Disk,
    /// `1 - (|x| / 0.45)²` inside the lens, zero outside.
    Luneburg,
    /// Eaton lens with `n` clamped to `√3`.
    Eaton,
    /// `exp(-½ Σ (x_i / 0.25)^8)`.
    Cube,
    /// Values sampled on a grid, read from a field file.
    Grid(Field),
}

impl Contrast {
    pub fn name(&self) -> &'static str {
        match self {
            Contrast::Disk => "disk",
            Contrast::Luneburg => "luneburg",
            Contrast::Eaton => "eaton",
            Contrast::Cube => "cube",
            Contrast::Grid(_) => "custom-grid",
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let (field, _) = io::read_field(path)?;
        Ok(Contrast::Grid(field))
    }

    /// `q(x)` at a point of the unit box.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match self {
            Contrast::Disk => Ok((-0.5 * (r / 0.25).powi(8)).exp()),
            Contrast::Luneburg => Ok(if r >= LENS_RADIUS {
                0.0
            } else {
                1.0 - (r / LENS_RADIUS).powi(2)
            }),
            Contrast::Eaton => Ok(eaton_index(r)?.powi(2) - 1.0),
            Contrast::Cube => {
                let s: f64 = x.iter().map(|v| (v / 0.25).powi(8)).sum();
                Ok((-0.5 * s).exp())
            }
            Contrast::Grid(field) => {
                let g = field.grid();
                if g.dim() != x.len() {
                    return Err(Error::ShapeMismatch("point and contrast grid dimensions differ".into()));
                }
                let n = g.n() as f64;
                let labels: Vec<i64> = x.iter().map(|v| (v * n).round() as i64).collect();
                let exact = labels.iter().zip(x).all(|(&j, &v)| ((j as f64) / n - v).abs() < 1e-9);
                if !exact {
                    return Err(Error::Domain("point is not a node of the contrast grid".into()));
                }
                field
                    .at(&labels)
                    .map(|v| v.re)
                    .ok_or_else(|| Error::Domain("point outside the contrast grid".into()))
            }
        }
    }

    /// Samples `q` on every node of `grid`.
    pub fn sample(&self, grid: GridSpec) -> Result<Vec<f64>> {
        if let Contrast::Grid(field) = self {
            if field.grid() != grid {
                return Err(Error::ShapeMismatch(format!(
                    "contrast grid has n = {}, solve grid has n = {}",
                    field.grid().n(),
                    grid.n()
                )));
            }
            return Ok(field.values().iter().map(|v| v.re).collect());
        }
        (0..grid.len())
            .map(|i| self.eval(&grid.point(i)[..grid.dim()]))
            .collect()
    }
}

impl fmt::Display for Contrast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Contrast {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(Contrast::Disk),
            "luneburg" => Ok(Contrast::Luneburg),
            "eaton" => Ok(Contrast::Eaton),
            "cube" => Ok(Contrast::Cube),
            _ => Err(Error::InvalidArgument(format!(
                "unknown contrast '{s}' (disk, luneburg, eaton, cube, or a field file)"
            ))),
        }
    }
}

/// Residual of `n² = a/(n r) + sqrt((a/(n r))² - 1)`; zero at the Eaton index.
pub fn eaton_residual(n: f64, r: f64) -> f64 {
    let u = LENS_RADIUS / (n * r);
    n * n - u - (u * u - 1.0).max(0.0).sqrt()
}

/// Refractive index of the Eaton lens at radius `r`, clamped to `√3`.
pub fn eaton_index(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be finite and nonnegative, got {r}")));
    }
    if r >= LENS_RADIUS {
        return Ok(1.0);
    }
    // The residual increases in n; the root lies in [1, a/r] where the square root is real.
    let mut lo = 1.0;
    let mut hi = (LENS_RADIUS / r).min(EATON_N_MAX);
    if eaton_residual(hi, r) <= 0.0 {
        return Ok(hi);
    }
    if eaton_residual(lo, r) > 0.0 {
        return Err(Error::Domain(format!("no Eaton root bracketed at r = {r}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eaton_residual(mid, r) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n = 0.5 * (lo + hi);
    if (hi - lo) > 1e-13 {
        return Err(Error::Domain(format!("Eaton root solve did not converge at r = {r}")));
    }
    Ok(n)
}
