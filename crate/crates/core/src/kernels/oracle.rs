//! Direct quadrature of the truncated kernel's radial Fourier integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_vector, norm, radial_physical, Family, KernelSpec};
use crate::error::Result;
use crate::quadrature::{integrate_adaptive, Tolerance};
use crate::specfun::bessel_j0;

/// `4 pi ∫_0^L sinc(s r) g(r) r² dr` in 3D or `2 pi ∫_0^L J0(s r) g(r) r dr` in
/// 2D, integrated adaptively. Convected kernels are shifted to `|s - h|`.
pub fn radial_transform_oracle(spec: &KernelSpec, s_vec: &[f64], tol: Tolerance) -> Result<Complex64> {
    check_vector(spec, s_vec)?;
    let s = match (spec.family, spec.h_vec) {
        (Family::ConvectedHelmholtz, Some(h)) => {
            let d: Vec<f64> = s_vec.iter().zip(&h).map(|(a, b)| a - b).collect();
            norm(&d)
        }
        _ => norm(s_vec),
    };
    let radial = spec.radial_part();
    let l = radial.truncation;
    let mut failure = None;
    let integrand = |r: f64| -> Complex64 {
        let g = match radial_physical(&radial, r) {
            Ok(g) => g,
            Err(e) => {
                failure.get_or_insert(e);
                return Complex64::default();
            }
        };
        if spec.dim == 3 {
            let x = s * r;
            let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
            4.0 * PI * sinc * r * r * g
        } else {
            2.0 * PI * bessel_j0(s * r) * r * g
        }
    };
    // Split at the oscillation scale so that large s does not starve the first panel.
    let pieces = ((s * l / PI).ceil() as usize).clamp(1, 4096);
    let breaks: Vec<f64> = (1..pieces).map(|i| l * i as f64 / pieces as f64).collect();
    let result = integrate_adaptive(integrand, 0.0, l, &breaks, tol)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result.value)
}
