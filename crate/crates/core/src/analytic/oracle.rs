//! Direct quadrature of `∫ g(|x - y|) ρ(|y|) dy` for radial kernels and sources.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{radial_physical, KernelSpec};
use crate::quadrature::{integrate_adaptive, GaussLegendre, Tolerance};

const OUTER: Tolerance = Tolerance { abs: 1e-13, rel: 1e-12, max_panels: 4_000 };
const INNER: Tolerance = Tolerance { abs: 1e-16, rel: 1e-14, max_panels: 4_000 };

/// Convolution of the untruncated radial kernel with a radial density supported
/// (numerically) in `[0, support]`, evaluated at distance `r` from the origin.
pub fn quadrature_convolution_oracle<F: Fn(f64) -> f64>(
    spec: &KernelSpec,
    density: F,
    support: f64,
    r: f64,
) -> Result<Complex64> {
    spec.validate()?;
    if !spec.family.is_radial() {
        return Err(Error::InvalidArgument("the quadrature oracle needs a radial kernel".into()));
    }
    if !(r >= 0.0 && r.is_finite()) || !(support > 0.0 && support.is_finite()) {
        return Err(Error::InvalidArgument("radius and support must be finite and nonnegative".into()));
    }
    let mut failure: Option<Error> = None;
    let mut note = |e: Error| {
        failure.get_or_insert(e);
        Complex64::default()
    };
    let value = if spec.dim == 3 {
        let rule = GaussLegendre::new(24);
        integrate_adaptive(
            |t| {
                let w = density(t) * t * t;
                if w == 0.0 {
                    return Complex64::default();
                }
                match shell_average_3d(spec, &rule, r, t) {
                    Ok(v) => 4.0 * PI * w * v,
                    Err(e) => note(e),
                }
            },
            0.0,
            support,
            &[r],
            OUTER,
        )?
    } else {
        integrate_adaptive(
            |t| {
                let w = density(t) * t;
                if w == 0.0 {
                    return Complex64::default();
                }
                match ring_average_2d(spec, r, t) {
                    Ok(v) => 2.0 * PI * w * v,
                    Err(e) => note(e),
                }
            },
            0.0,
            support,
            &[r],
            OUTER,
        )?
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(value.value),
    }
}

// Mean of g(|x - y|) over the sphere |y| = t, |x| = r:
// (1 / 2rt) ∫_{|r-t|}^{r+t} g(u) u du, and g(t) when r = 0.
fn shell_average_3d(spec: &KernelSpec, rule: &GaussLegendre, r: f64, t: f64) -> Result<Complex64> {
    if r * t == 0.0 {
        return radial_physical(spec, r.max(t));
    }
    let (a, b) = ((r - t).abs(), r + t);
    let pieces = ((b - a) / 0.05).ceil().max(1.0) as usize;
    let step = (b - a) / pieces as f64;
    let mut sum = Complex64::default();
    for p in 0..pieces {
        let lo = a + p as f64 * step;
        for (u, w) in rule.mapped(lo, lo + step) {
            sum += w * u * radial_physical(spec, u)?;
        }
    }
    Ok(sum / (2.0 * r * t))
}

// Mean of g(|x - y|) over the circle |y| = t, |x| = r.
fn ring_average_2d(spec: &KernelSpec, r: f64, t: f64) -> Result<Complex64> {
    if r * t == 0.0 {
        return radial_physical(spec, r.max(t));
    }
    let mut failure = None;
    let v = integrate_adaptive(
        |theta| {
            let half = (0.5 * theta).sin();
            let d = ((r - t) * (r - t) + 4.0 * r * t * half * half).sqrt();
            radial_physical(spec, d).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Complex64::default()
            })
        },
        0.0,
        PI,
        &[],
        INNER,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v.value / PI),
    }
}
