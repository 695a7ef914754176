//! Error function for real and complex arguments.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;
const COMPLEX_IMAG_LIMIT: f64 = 30.0;

pub fn erf(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < 3.0 { erf_series(ax) } else { 1.0 - erfc_fraction(ax) };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Complementary error function; relative accuracy degrades below `x = 3`
/// where it is formed as `1 - erf(x)`.
pub fn erfc(x: f64) -> f64 {
    if x >= 3.0 {
        erfc_fraction(x)
    } else {
        1.0 - erf(x)
    }
}

// exp(-x^2) * 2/sqrt(pi) * sum 2^n x^(2n+1) / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    TWO_OVER_SQRT_PI * (-x2).exp() * sum
}

// Modified Lentz evaluation of erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + ...))).
fn erfc_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// erf(z) for complex `z` with `|Im z| <= 30`.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("erf needs a finite argument, got {z}")));
    }
    if z.im.abs() > COMPLEX_IMAG_LIMIT {
        return Err(Error::Domain(format!(
            "erf argument {z} has |Im z| above {COMPLEX_IMAG_LIMIT}"
        )));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(erf(z.re), 0.0));
    }
    let w = if z.norm() < 2.0 {
        erf_taylor(z)
    } else if z.re < 0.0 {
        -erf_strip(-z)
    } else {
        erf_strip(z)
    };
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite(format!("erf({z}) overflowed")))
    }
}

fn erf_taylor(z: Complex64) -> Complex64 {
    // 2/sqrt(pi) sum (-1)^n z^(2n+1) / (n! (2n+1))
    let z2 = z * z;
    let mut power = z;
    let mut sum = z;
    for n in 1..80 {
        let nf = n as f64;
        power *= -z2 / nf;
        let term = power / (2.0 * nf + 1.0);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

// Series of Abramowitz & Stegun 7.1.29 for x >= 0, with the exponentials
// combined so that exp(-x^2) cosh(ny) cannot overflow.
fn erf_strip(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let ex = (-x * x).exp();
    let (s2, c2) = (2.0 * x * y).sin_cos();
    let lead = if x == 0.0 {
        Complex64::new(0.0, y / PI)
    } else {
        ex / (2.0 * PI * x) * Complex64::new(1.0 - c2, s2)
    };
    let terms = (2.0 * y.abs()).ceil() as usize + 14;
    let mut re = 0.0;
    let mut im = 0.0;
    for n in 1..=terms {
        let nf = n as f64;
        let base = -x * x - 0.25 * nf * nf;
        let ep = (base + nf * y).exp();
        let em = (base - nf * y).exp();
        let ch = 0.5 * (ep + em);
        let sh = 0.5 * (ep - em);
        let e0 = (base).exp();
        let denom = nf * nf + 4.0 * x * x;
        re += (2.0 * x * e0 - 2.0 * x * ch * c2 + nf * sh * s2) / denom;
        im += (2.0 * x * ch * s2 + nf * sh * c2) / denom;
    }
    Complex64::new(erf(x), 0.0) + lead + 2.0 / PI * Complex64::new(re, im)
}
