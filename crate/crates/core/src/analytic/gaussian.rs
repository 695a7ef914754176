//! Potentials of a normalised Gaussian source in closed form.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{Family, KernelSpec};
use crate::quadrature::{integrate_adaptive, GaussLegendre, Tolerance};
use crate::specfun::{bessel_j0, erf, erf_complex, hankel1_0, ein, EULER_GAMMA};

/// `ρ(r) = exp(-r²/2σ²) / (σ√(2π))^dim`, unit mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSource {
    pub sigma: f64,
    pub dim: usize,
}

impl GaussianSource {
    pub fn new(sigma: f64, dim: usize) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        Ok(Self { sigma, dim })
    }

    pub fn density(&self, r: f64) -> f64 {
        let s = self.sigma;
        (-0.5 * r * r / (s * s)).exp() / (s * (2.0 * PI).sqrt()).powi(self.dim as i32)
    }

    /// Radius beyond which the density is below 1e-30 of its peak.
    pub fn support(&self) -> f64 {
        12.0 * self.sigma
    }
}

fn check(spec: &KernelSpec, source: &GaussianSource) -> Result<()> {
    spec.validate()?;
    if spec.dim != source.dim {
        return Err(Error::ShapeMismatch("kernel and source dimensions differ".into()));
    }
    match spec.family {
        Family::Laplace | Family::Biharmonic | Family::Helmholtz => Ok(()),
        f => Err(Error::InvalidArgument(format!("no closed-form Gaussian potential for {f}"))),
    }
}

/// `(g * ρ)(r)` for the Laplace, Helmholtz and biharmonic kernels.
pub fn gaussian_exact(spec: &KernelSpec, source: &GaussianSource, r: f64) -> Result<Complex64> {
    check(spec, source)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be finite and nonnegative, got {r}")));
    }
    let s = source.sigma;
    let k = spec.k;
    let t = r * r / (2.0 * s * s);
    Ok(match (spec.family, spec.dim) {
        (Family::Laplace, 3) => laplace3(s, r).into(),
        (Family::Helmholtz, 3) => helmholtz3(s, k, r)?,
        (Family::Biharmonic, 3) => biharmonic3(s, r).into(),
        (Family::Laplace, _) => (-(ein(t) - EULER_GAMMA + (2.0 * s * s).ln()) / (4.0 * PI)).into(),
        (Family::Biharmonic, _) => biharmonic2(s, r).into(),
        (Family::Helmholtz, _) => helmholtz2(s, k, r)?,
        _ => unreachable!("checked above"),
    })
}

/// Values at many radii; the 2D Helmholtz integrals are accumulated panel by
/// panel over the sorted radii instead of being recomputed per point.
pub fn gaussian_exact_radii(
    spec: &KernelSpec,
    source: &GaussianSource,
    radii: &[f64],
) -> Result<Vec<Complex64>> {
    check(spec, source)?;
    if spec.family != Family::Helmholtz || spec.dim != 2 {
        return radii.iter().map(|&r| gaussian_exact(spec, source, r)).collect();
    }
    if radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument("radii must be finite and nonnegative".into()));
    }
    let (s, k) = (source.sigma, spec.k);
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]));
    let top = source.support();
    let rule = GaussLegendre::new(16);
    let piece = 0.25 * s;
    let weight = |y: f64| (-0.5 * y * y / (s * s)).exp() * y;
    // A(r) = ∫_0^r J0(ky) w(y) dy increasing; B(r) = ∫_r^top H0(ky) w(y) dy decreasing.
    let mut a_vals = vec![0.0; radii.len()];
    let mut prev = 0.0;
    let mut acc = 0.0;
    for &i in &order {
        let r = radii[i].min(top);
        if r > prev {
            acc += piecewise(&rule, |y| (bessel_j0(k * y) * weight(y)).into(), prev, r, piece).re;
            prev = r;
        }
        a_vals[i] = acc;
    }
    let mut b_vals = vec![Complex64::default(); radii.len()];
    let mut prev = top;
    let mut acc = Complex64::default();
    let positive: Vec<usize> = order.iter().copied().filter(|&i| radii[i] > 0.0).collect();
    for &i in positive.iter().rev() {
        let r = radii[i];
        if r < prev {
            acc += piecewise(&rule, |y| hankel1_0(k * y).unwrap_or_default() * weight(y), r, prev, piece);
            prev = r;
        }
        b_vals[i] = acc;
    }
    let mut out = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        out.push(if r == 0.0 {
            helmholtz2(s, k, 0.0)?
        } else if r >= top {
            let a_inf = s * s * (-0.5 * k * k * s * s).exp();
            Complex64::new(0.0, 0.25 / (s * s)) * hankel1_0(k * r)? * a_inf
        } else {
            Complex64::new(0.0, 0.25 / (s * s))
                * (hankel1_0(k * r)? * a_vals[i] + bessel_j0(k * r) * b_vals[i])
        });
    }
    Ok(out)
}

fn piecewise<F: FnMut(f64) -> Complex64>(
    rule: &GaussLegendre,
    mut f: F,
    a: f64,
    b: f64,
    width: f64,
) -> Complex64 {
    let pieces = ((b - a) / width).ceil().max(1.0) as usize;
    let step = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| rule.integrate(&mut f, a + i as f64 * step, a + (i + 1) as f64 * step))
        .sum()
}

fn laplace3(s: f64, r: f64) -> f64 {
    let x = r / (std::f64::consts::SQRT_2 * s);
    if x < 1e-8 {
        return (2.0 / PI).sqrt() / (4.0 * PI * s);
    }
    erf(x) / (4.0 * PI * r)
}

fn biharmonic3(s: f64, r: f64) -> f64 {
    let x = r / (std::f64::consts::SQRT_2 * s);
    let bump = s * (2.0 / PI).sqrt() * (-x * x).exp();
    let tail = if x < 1e-8 {
        s * (2.0 / PI).sqrt()
    } else {
        erf(x) * (s * s / r + r)
    };
    (bump + tail) / (8.0 * PI)
}

// exp(-σ²k²/2)/(4πr) [i sin kr - Re(exp(-ikr) erf((iσ²k - r)/(√2σ)))]
fn helmholtz3(s: f64, k: f64, r: f64) -> Result<Complex64> {
    let damp = (-0.5 * s * s * k * k).exp();
    let root2s = std::f64::consts::SQRT_2 * s;
    if r < 1e-8 * s {
        // Limit r -> 0; e^{-y²} erfi(y) = Im erf(iy) e^{-y²}.
        let y = s * k / std::f64::consts::SQRT_2;
        let erfi = erf_complex(Complex64::new(0.0, y))?.im;
        let re = -k * (-y * y).exp() * erfi + 2.0 / (PI.sqrt() * root2s);
        return Ok(Complex64::new(re, k * damp) / (4.0 * PI));
    }
    let w = erf_complex(Complex64::new(-r / root2s, s * k / std::f64::consts::SQRT_2))?;
    let re = -(Complex64::from_polar(1.0, -k * r) * w).re;
    Ok(damp / (4.0 * PI * r) * Complex64::new(re, (k * r).sin()))
}

fn biharmonic2(s: f64, r: f64) -> f64 {
    let t = r * r / (2.0 * s * s);
    let lg = (1.0 / (2.0 * s * s)).ln();
    let c1 = s * s / (8.0 * PI) * (EULER_GAMMA + lg);
    let c2 = (0.5 * EULER_GAMMA + 0.5 * lg + 1.0) / (8.0 * PI);
    -s * s / (8.0 * PI) * ((t + 1.0) * ein(t) - (-t).exp()) + c2 * r * r + c1
}

// (i/4σ²)[H0(kr) ∫_0^r J0(ky) w dy + J0(kr) ∫_r^∞ H0(ky) w dy],  w = exp(-y²/2σ²) y.
fn helmholtz2(s: f64, k: f64, r: f64) -> Result<Complex64> {
    let top = 12.0 * s;
    let weight = |y: f64| (-0.5 * y * y / (s * s)).exp() * y;
    let tol = Tolerance { abs: 1e-15, rel: 1e-13, max_panels: 20_000 };
    let tail = |from: f64| -> Result<Complex64> {
        if from >= top {
            return Ok(Complex64::default());
        }
        let mut bad = None;
        let v = integrate_adaptive(
            |y| match hankel1_0(k * y) {
                Ok(h) => h * weight(y),
                Err(e) => {
                    bad.get_or_insert(e);
                    Complex64::default()
                }
            },
            from,
            top,
            &[],
            tol,
        )?;
        match bad {
            Some(e) => Err(e),
            None => Ok(v.value),
        }
    };
    let scale = Complex64::new(0.0, 0.25 / (s * s));
    if r == 0.0 {
        return Ok(scale * tail(0.0)?);
    }
    let head = if r >= top {
        s * s * (-0.5 * k * k * s * s).exp()
    } else {
        integrate_adaptive(|y| (bessel_j0(k * y) * weight(y)).into(), 0.0, r, &[], tol)?.value.re
    };
    Ok(scale * (hankel1_0(k * r)? * head + bessel_j0(k * r) * tail(r)?))
}

/// Gradient of the 3D Laplace potential of the Gaussian at `x`.
pub fn gaussian_laplace3_gradient(source: &GaussianSource, x: &[f64]) -> Result<[f64; 3]> {
    if source.dim != 3 || x.len() != 3 {
        return Err(Error::InvalidArgument("the Gaussian gradient is implemented in 3D".into()));
    }
    let s = source.sigma;
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r == 0.0 {
        return Ok([0.0; 3]);
    }
    let a = r / (std::f64::consts::SQRT_2 * s);
    // d/dr erf(a)/(4πr) = [2/√π e^{-a²} a - erf(a)] / (4π r²)
    let du = (2.0 / PI.sqrt() * (-a * a).exp() * a - erf(a)) / (4.0 * PI * r * r);
    Ok([du * x[0] / r, du * x[1] / r, du * x[2] / r])
}
