//! Free-space Green's functions and the Fourier transforms of their truncations.
//!
//! Conventions: `Δg0 = -δ`, `(Δ + k²)gk = -δ`, `Δ²gb = -δ`. Transforms use
//! `Ĝ(s) = ∫ g(x) exp(-i s·x) dx` over the ball `|x| < L`.

mod oracle;
mod spectral;

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::hankel1_0;

pub use oracle::radial_transform_oracle;
pub use spectral::Kernel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Laplace,
    Helmholtz,
    Biharmonic,
    /// `gk - g0`, a smooth kernel with both transforms' singularities.
    LaplaceHelmholtz,
    /// `gk(|x|) exp(i h·x)` with `k = |h|`.
    ConvectedHelmholtz,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Laplace,
        Family::Helmholtz,
        Family::Biharmonic,
        Family::LaplaceHelmholtz,
        Family::ConvectedHelmholtz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Laplace => "laplace",
            Family::Helmholtz => "helmholtz",
            Family::Biharmonic => "biharmonic",
            Family::LaplaceHelmholtz => "laplace_helmholtz",
            Family::ConvectedHelmholtz => "convected_helmholtz",
        }
    }

    pub fn needs_wavenumber(self) -> bool {
        matches!(self, Family::Helmholtz | Family::LaplaceHelmholtz)
    }

    pub fn is_radial(self) -> bool {
        self != Family::ConvectedHelmholtz
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || (s == "convected" && *f == Family::ConvectedHelmholtz))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown kernel family `{s}`")))
    }
}

/// Operator family and parameters of a truncated kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec {
    pub family: Family,
    pub dim: usize,
    pub k: f64,
    pub h_vec: Option<[f64; 3]>,
    pub truncation: f64,
}

impl KernelSpec {
    /// Default truncation radius: 1.8 in 3D and 1.5 in 2D, just above the box diameter.
    pub fn default_truncation(dim: usize) -> f64 {
        if dim == 3 {
            1.8
        } else {
            1.5
        }
    }

    pub fn new(family: Family, dim: usize) -> Self {
        Self { family, dim, k: 0.0, h_vec: None, truncation: Self::default_truncation(dim) }
    }

    pub fn laplace(dim: usize) -> Self {
        Self::new(Family::Laplace, dim)
    }

    pub fn helmholtz(dim: usize, k: f64) -> Self {
        Self::new(Family::Helmholtz, dim).with_k(k)
    }

    pub fn biharmonic(dim: usize) -> Self {
        Self::new(Family::Biharmonic, dim)
    }

    pub fn laplace_helmholtz(dim: usize, k: f64) -> Self {
        Self::new(Family::LaplaceHelmholtz, dim).with_k(k)
    }

    pub fn convected(dim: usize, h_vec: [f64; 3]) -> Self {
        let mut s = Self::new(Family::ConvectedHelmholtz, dim);
        s.h_vec = Some(h_vec);
        s.k = norm(&h_vec[..dim]);
        s
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_truncation(mut self, truncation: f64) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {}", self.dim)));
        }
        let diameter = (self.dim as f64).sqrt();
        if !(self.truncation >= diameter) || !self.truncation.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "truncation radius {} must be at least the box diameter {diameter:.4}",
                self.truncation
            )));
        }
        match self.family {
            f if f.needs_wavenumber() => {
                if !(self.k > 0.0) || !self.k.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "{f} needs a positive finite wavenumber, got {}",
                        self.k
                    )));
                }
            }
            Family::ConvectedHelmholtz => {
                let h = self.h_vec.ok_or_else(|| {
                    Error::InvalidArgument("convected_helmholtz needs h_vec".into())
                })?;
                let hn = norm(&h[..self.dim]);
                if !(hn > 0.0) || !hn.is_finite() {
                    return Err(Error::InvalidArgument("h_vec must be nonzero and finite".into()));
                }
                if self.dim == 2 && h[2] != 0.0 {
                    return Err(Error::InvalidArgument("h_vec has a z component in 2D".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The radial Helmholtz kernel behind a convected kernel.
    pub(crate) fn radial_part(&self) -> KernelSpec {
        match self.family {
            Family::ConvectedHelmholtz => {
                let h = self.h_vec.unwrap_or_default();
                KernelSpec::helmholtz(self.dim, norm(&h[..self.dim]))
                    .with_truncation(self.truncation)
            }
            _ => self.clone(),
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_vector(spec: &KernelSpec, v: &[f64]) -> Result<()> {
    spec.validate()?;
    if v.len() != spec.dim {
        return Err(Error::ShapeMismatch(format!(
            "vector of length {} for a {}D kernel",
            v.len(),
            spec.dim
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("vector has non-finite entries".into()));
    }
    Ok(())
}

/// Radial profile of the untruncated kernel at `r > 0` (or `r = 0` where finite).
pub(crate) fn radial_physical(spec: &KernelSpec, r: f64) -> Result<Complex64> {
    let (k, d) = (spec.k, spec.dim);
    let singular = || Error::Domain(format!("{} kernel is singular at the origin", spec.family));
    let laplace = |r: f64| -> Result<f64> {
        if r == 0.0 {
            return Err(singular());
        }
        Ok(if d == 3 { 1.0 / (4.0 * PI * r) } else { -r.ln() / (2.0 * PI) })
    };
    let helmholtz = |r: f64| -> Result<Complex64> {
        if r == 0.0 {
            return Err(singular());
        }
        Ok(if d == 3 {
            Complex64::from_polar(1.0 / (4.0 * PI * r), k * r)
        } else {
            Complex64::new(0.0, 0.25) * hankel1_0(k * r)?
        })
    };
    match spec.family {
        Family::Laplace => Ok(laplace(r)?.into()),
        Family::Helmholtz | Family::ConvectedHelmholtz => helmholtz(r),
        Family::Biharmonic => Ok(if d == 3 {
            (r / (8.0 * PI)).into()
        } else if r == 0.0 {
            0.0.into()
        } else {
            (-r * r / (8.0 * PI) * (r.ln() - 1.0)).into()
        }),
        Family::LaplaceHelmholtz => {
            if r == 0.0 {
                // Limits of gk - g0 at the origin.
                return Ok(if d == 3 {
                    Complex64::new(0.0, k / (4.0 * PI))
                } else {
                    Complex64::new(
                        -((0.5 * k).ln() + crate::specfun::EULER_GAMMA) / (2.0 * PI),
                        0.25,
                    )
                });
            }
            if d == 3 && k * r < 1e-3 {
                // (exp(ikr) - 1)/(4 pi r) without cancellation.
                let z = Complex64::new(0.0, k * r);
                let mut term = Complex64::new(1.0, 0.0);
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 1..12 {
                    term *= z / j as f64;
                    sum += term;
                }
                return Ok(sum / (4.0 * PI * r));
            }
            Ok(helmholtz(r)? - laplace(r)?)
        }
    }
}

/// The untruncated kernel `g(r_vec)`.
pub fn eval_physical(spec: &KernelSpec, r_vec: &[f64]) -> Result<Complex64> {
    check_vector(spec, r_vec)?;
    let r = norm(r_vec);
    let radial = radial_physical(spec, r)?;
    Ok(match (spec.family, spec.h_vec) {
        (Family::ConvectedHelmholtz, Some(h)) => {
            let phase: f64 = h.iter().zip(r_vec).map(|(a, b)| a * b).sum();
            radial * Complex64::from_polar(1.0, phase)
        }
        _ => radial,
    })
}

/// The truncated kernel `g(r_vec) rect(|r_vec| / 2L)`, halved on the sphere `|r| = L`.
pub fn eval_truncated(spec: &KernelSpec, r_vec: &[f64]) -> Result<Complex64> {
    check_vector(spec, r_vec)?;
    let r = norm(r_vec);
    let l = spec.truncation;
    if r > l {
        Ok(Complex64::default())
    } else if r == l {
        Ok(0.5 * eval_physical(spec, r_vec)?)
    } else {
        eval_physical(spec, r_vec)
    }
}

/// Fourier transform of the truncated kernel at `s_vec`.
pub fn eval_spectral(spec: &KernelSpec, s_vec: &[f64]) -> Result<Complex64> {
    check_vector(spec, s_vec)?;
    Ok(Kernel::new(spec)?.spectral(s_vec))
}

/// Removable singularities of the closed-form transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pole {
    /// `|s| = 0`.
    Origin,
    /// `|s| = k`.
    Wavenumber,
}

/// The series branch used near a removable singularity, exposed for testing.
pub fn near_singularity_eval(spec: &KernelSpec, s_vec: &[f64], pole: Pole) -> Result<Complex64> {
    check_vector(spec, s_vec)?;
    let kernel = Kernel::new(spec)?;
    let s = match (spec.family, spec.h_vec) {
        (Family::ConvectedHelmholtz, Some(h)) => {
            let d: Vec<f64> = s_vec.iter().zip(&h).map(|(a, b)| a - b).collect();
            norm(&d)
        }
        _ => norm(s_vec),
    };
    kernel.series(s, pole)
}
