//! Incident fields for the scattering problems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::specfun::hankel1_0_complex;

/// Complex source point of the beam, `(x0, y0)`.
pub const BEAM_CENTER: (Complex64, f64) = (Complex64::new(-0.01, -0.5), 0.77);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Incident {
    /// `exp(i k d·x)` with unit direction `d`.
    PlaneWave { k: f64, direction: [f64; 3] },
    /// `conj(H0(k R)) exp(-k/2)` with `R` the complex distance to [`BEAM_CENTER`] (2D only).
    GaussianBeam { k: f64 },
}

impl Incident {
    /// A plane wave travelling in the +x direction.
    pub fn plane_wave(k: f64) -> Self {
        Incident::PlaneWave { k, direction: [1.0, 0.0, 0.0] }
    }

    pub fn k(&self) -> f64 {
        match *self {
            Incident::PlaneWave { k, .. } | Incident::GaussianBeam { k } => k,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let k = self.k();
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("wavenumber must be positive, got {k}")));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        match self {
            Incident::PlaneWave { direction, .. } => {
                let norm = direction[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-12 || direction[dim..].iter().any(|&v| v != 0.0) {
                    return Err(Error::InvalidArgument("plane-wave direction must be a unit vector".into()));
                }
                Ok(())
            }
            Incident::GaussianBeam { .. } if dim != 2 => {
                Err(Error::InvalidArgument("the Gaussian beam is defined in 2D".into()))
            }
            Incident::GaussianBeam { .. } => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.validate(x.len())?;
        match *self {
            Incident::PlaneWave { k, direction } => {
                let phase: f64 = x.iter().zip(direction).map(|(a, b)| a * b).sum();
                Ok(Complex64::from_polar(1.0, k * phase))
            }
            Incident::GaussianBeam { k } => {
                let r = beam_distance(x[0], x[1])?;
                Ok(hankel1_0_complex(k * r)?.conj() * (-0.5 * k).exp())
            }
        }
    }

    pub fn sample(&self, grid: GridSpec) -> Result<Vec<Complex64>> {
        (0..grid.len())
            .map(|i| self.eval(&grid.point(i)[..grid.dim()]))
            .collect()
    }
}

/// Principal square root of `(x - x0)² + (y - y0)²`. On the cut, where the
/// radicand is real and negative, the limit from positive imaginary part is used.
pub fn beam_distance(x: f64, y: f64) -> Result<Complex64> {
    let (x0, y0) = BEAM_CENTER;
    let dx = Complex64::new(x, 0.0) - x0;
    let mut r2 = dx * dx + (y - y0) * (y - y0);
    if r2.norm() < 1e-24 {
        return Err(Error::BranchPoint(format!("beam source singularity at ({x}, {y})")));
    }
    if r2.im == 0.0 {
        r2.im = 0.0;
    }
    Ok(r2.sqrt())
}
