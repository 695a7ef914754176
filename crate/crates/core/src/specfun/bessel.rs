//! Integer-order Bessel and Hankel functions of orders 0 and 1.
//!
//! Real arguments use three regimes: the ascending series below 2, Miller
//! backward recurrence with Neumann series for the Y functions up to 25, and
//! the Hankel asymptotic expansion beyond that. Complex arguments add a
//! trapezoidal integral representation in the upper half plane, where the
//! J + iY combination cancels.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;
const COMPLEX_ASYMPTOTIC_LIMIT: f64 = 17.0;
const INTEGRAL_IMAG_LIMIT: f64 = 1.5;
const RESCALE: f64 = 1e250;

/// J0, J1, Y0 and Y1 at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bessel01 {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j01(x).0
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j01(x).1
}

/// J0 and J1 together; J0 is even and J1 odd in `x`.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax < SERIES_LIMIT {
        let s = series01(ax, false);
        (s.j0, s.j1)
    } else if ax < ASYMPTOTIC_LIMIT {
        let m = miller01(ax, false);
        (m.j0, m.j1)
    } else {
        let a = asymptotic01(ax);
        (a.j0, a.j1)
    };
    (j0, if x < 0.0 { -j1 } else { j1 })
}

/// All four order-0/1 functions at `x > 0`.
pub fn bessel01(x: f64) -> Result<Bessel01> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Y0/Y1 need a positive finite argument, got {x}")));
    }
    Ok(if x < SERIES_LIMIT {
        series01(x, true)
    } else if x < ASYMPTOTIC_LIMIT {
        miller01(x, true)
    } else {
        asymptotic01(x)
    })
}

pub fn bessel_y0(x: f64) -> Result<f64> {
    Ok(bessel01(x)?.y0)
}

pub fn bessel_y1(x: f64) -> Result<f64> {
    Ok(bessel01(x)?.y1)
}

/// Hankel function of the first kind, order 0, for real `x > 0`.
pub fn hankel1_0(x: f64) -> Result<Complex64> {
    let b = bessel01(x)?;
    Ok(Complex64::new(b.j0, b.y0))
}

/// Hankel function of the first kind, order 1, for real `x > 0`.
pub fn hankel1_1(x: f64) -> Result<Complex64> {
    let b = bessel01(x)?;
    Ok(Complex64::new(b.j1, b.y1))
}

/// J_0 .. J_nmax at real `x >= 0`.
pub fn bessel_jn_sequence(x: f64, nmax: usize) -> Vec<f64> {
    let ax = x.abs();
    let mut out = vec![0.0; nmax + 1];
    if ax == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if ax > nmax as f64 + 1.0 && ax >= ASYMPTOTIC_LIMIT {
        // Forward recurrence is stable while n < x.
        let (j0, j1) = bessel_j01(ax);
        out[0] = j0;
        if nmax >= 1 {
            out[1] = j1;
        }
        for n in 1..nmax {
            out[n + 1] = 2.0 * n as f64 / ax * out[n] - out[n - 1];
        }
    } else {
        let start = miller_start(ax).max(nmax + 20);
        let start = start + start % 2;
        let (mut jp, mut jc) = (0.0_f64, 1e-30_f64);
        let mut norm = 0.0;
        for k in (1..=start).rev() {
            let jm = 2.0 * k as f64 / ax * jc - jp;
            jp = jc;
            jc = jm;
            if k - 1 <= nmax {
                out[k - 1] = jc;
            }
            if (k - 1) % 2 == 0 && k - 1 > 0 {
                norm += 2.0 * jc;
            }
            if jc.abs() > RESCALE {
                jp /= RESCALE;
                jc /= RESCALE;
                norm /= RESCALE;
                for v in out.iter_mut() {
                    *v /= RESCALE;
                }
            }
        }
        norm += jc;
        for v in out.iter_mut() {
            *v /= norm;
        }
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

fn miller_start(x: f64) -> usize {
    let m = (x + 15.0 + (40.0 * x).sqrt()) as usize;
    m + m % 2
}

fn series01(x: f64, with_y: bool) -> Bessel01 {
    let q = 0.25 * x * x;
    let (mut j0, mut j1s) = (0.0, 0.0);
    let (mut y0s, mut y1s) = (0.0, 0.0);
    // term = (-q)^k / (k! k!),  term1 = (-q)^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0;
    for k in 0..30 {
        let kf = k as f64;
        if k > 0 {
            term *= -q / (kf * kf);
            term1 *= -q / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        j0 += term;
        j1s += term1;
        if with_y {
            y0s += harmonic * term;
            // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
            y1s += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * term1;
        }
        if term.abs() < 1e-18 && k > 2 {
            break;
        }
    }
    let j1 = 0.5 * x * j1s;
    if !with_y {
        return Bessel01 { j0, j1, y0: f64::NAN, y1: f64::NAN };
    }
    let lg = (0.5 * x).ln();
    let y0 = FRAC_2_PI * ((lg + EULER_GAMMA) * j0 - y0s);
    let y1 = FRAC_2_PI * lg * j1 - FRAC_2_PI / x - 0.5 * x / PI * y1s;
    Bessel01 { j0, j1, y0, y1 }
}

fn miller01(x: f64, with_y: bool) -> Bessel01 {
    let start = miller_start(x);
    let (mut jp, mut jc) = (0.0_f64, 1e-30_f64);
    let mut norm = 0.0;
    let mut y0s = 0.0;
    let mut y1s = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / x * jc - jp;
        // J_{n+2}, needed for J_{2k-1} - J_{2k+1}.
        let j_two_above = jp;
        jp = jc;
        jc = jm;
        let n = k - 1;
        if n == 1 {
            j1 = jc;
        }
        if n > 0 && n % 2 == 0 {
            let half = (n / 2) as f64;
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            norm += 2.0 * jc;
            y0s += sign * jc / half;
        }
        if n % 2 == 1 {
            // n = 2k-1 with k = (n+1)/2; J_{2k+1} is two steps above.
            let kk = ((n + 1) / 2) as f64;
            let sign = if ((n + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            y1s += sign * (jc - j_two_above) / kk;
        }
        if jc.abs() > RESCALE {
            jp /= RESCALE;
            jc /= RESCALE;
            norm /= RESCALE;
            y0s /= RESCALE;
            y1s /= RESCALE;
            j1 /= RESCALE;
        }
    }
    norm += jc;
    let j0 = jc / norm;
    let j1 = j1 / norm;
    if !with_y {
        return Bessel01 { j0, j1, y0: f64::NAN, y1: f64::NAN };
    }
    let y0s = y0s / norm;
    let y1s = y1s / norm;
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (lg * j0 - 2.0 * y0s);
    let y1 = FRAC_2_PI * (lg * j1 - j0 / x + y1s);
    Bessel01 { j0, j1, y0, y1 }
}

/// P and Q of the Hankel expansion for order `nu`.
fn hankel_pq<T>(nu: f64, z: T, abs_z: f64) -> (T, T)
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Div<T, Output = T>
        + From<f64>,
{
    let mu = 4.0 * nu * nu;
    let mut p = T::from(1.0);
    let mut q = T::from(0.0);
    let mut term = T::from(1.0);
    let mut mag = 1.0_f64;
    for k in 1..60 {
        let kf = k as f64;
        let c = (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf);
        let next_mag = mag * c.abs() / abs_z;
        if next_mag > mag && k > 2 {
            break;
        }
        term = term * c / z;
        mag = next_mag;
        // u_{2m} enters P and u_{2m+1} enters Q, both with sign (-1)^m.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p = p + term * sign;
        } else {
            q = q + term * sign;
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn asymptotic01(x: f64) -> Bessel01 {
    let (s, c) = x.sin_cos();
    let scale = (FRAC_2_PI / x).sqrt();
    let (p0, q0) = hankel_pq(0.0, x, x);
    let (p1, q1) = hankel_pq(1.0, x, x);
    // x - pi/4 and x - 3pi/4 expanded to avoid rounding pi/4.
    let (c0, s0) = ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2);
    let (c1, s1) = ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2);
    Bessel01 {
        j0: scale * (p0 * c0 - q0 * s0),
        y0: scale * (p0 * s0 + q0 * c0),
        j1: scale * (p1 * c1 - q1 * s1),
        y1: scale * (p1 * s1 + q1 * c1),
    }
}

/// Principal-branch H0^(1)(z) for complex `z != 0`.
pub fn hankel1_0_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() == 0.0 {
        return Err(Error::Domain(format!("H0 needs a finite nonzero argument, got {z}")));
    }
    if z.im == 0.0 && z.re > 0.0 {
        return hankel1_0(z.re);
    }
    let az = z.norm();
    let h = if az >= COMPLEX_ASYMPTOTIC_LIMIT {
        complex_asymptotic0(z)
    } else if z.im > INTEGRAL_IMAG_LIMIT {
        complex_integral0(z)
    } else if az < SERIES_LIMIT {
        complex_series0(z)
    } else {
        complex_miller0(z)
    };
    if h.re.is_finite() && h.im.is_finite() {
        Ok(h)
    } else {
        Err(Error::NonFinite(format!("H0({z}) overflowed")))
    }
}

fn complex_asymptotic0(z: Complex64) -> Complex64 {
    let (p, q) = hankel_pq(0.0, z, z.norm());
    let phase = (Complex64::i() * z).exp() * Complex64::from_polar(1.0, -0.25 * PI);
    (Complex64::from(FRAC_2_PI) / z).sqrt() * phase * (p + Complex64::i() * q)
}

fn complex_integral0(z: Complex64) -> Complex64 {
    // H0(z) = -(2i/pi) * int_0^inf exp(i z cosh u) du, Im z > 0.
    let b = z.im;
    let a = z.re.abs();
    let upper = (45.0 / b).max(1.0).acosh();
    let strip = (0.5 * b / a.max(1e-300)).min(0.5);
    let step = 2.0 * PI * strip / 40.0;
    let count = (upper / step).ceil() as usize;
    let step = upper / count as f64;
    let iz = Complex64::i() * z;
    let mut sum = 0.5 * iz.exp();
    for j in 1..=count {
        sum += (iz * (j as f64 * step).cosh()).exp();
    }
    Complex64::new(0.0, -2.0 / PI) * sum * step
}

fn complex_series0(z: Complex64) -> Complex64 {
    let q = 0.25 * z * z;
    let mut j0 = Complex64::new(0.0, 0.0);
    let mut ys = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0;
    for k in 0..40 {
        let kf = k as f64;
        if k > 0 {
            term *= -q / (kf * kf);
            harmonic += 1.0 / kf;
        }
        j0 += term;
        ys += harmonic * term;
        if term.norm() < 1e-18 && k > 2 {
            break;
        }
    }
    let lg = (0.5 * z).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (lg * j0 - ys);
    j0 + Complex64::i() * y0
}

fn complex_miller0(z: Complex64) -> Complex64 {
    let start = miller_start(z.norm()) + 10;
    let start = start + start % 2;
    // Normalise with exp(+-iz) = J0 + 2 sum (+-i)^k J_k, choosing the growing side.
    let unit = if z.im <= 0.0 { Complex64::i() } else { -Complex64::i() };
    let target = (unit * z).exp();
    let mut jp = Complex64::new(0.0, 0.0);
    let mut jc = Complex64::new(1e-30, 0.0);
    let mut norm = Complex64::new(0.0, 0.0);
    let mut ys = Complex64::new(0.0, 0.0);
    let mut powers = vec![Complex64::new(1.0, 0.0); start + 1];
    for k in 1..=start {
        powers[k] = powers[k - 1] * unit;
    }
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / z * jc - jp;
        jp = jc;
        jc = jm;
        let n = k - 1;
        if n > 0 {
            norm += 2.0 * powers[n] * jc;
            if n % 2 == 0 {
                let half = (n / 2) as f64;
                let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
                ys += sign * jc / half;
            }
        }
        if jc.norm() > RESCALE {
            jp /= RESCALE;
            jc /= RESCALE;
            norm /= RESCALE;
            ys /= RESCALE;
        }
    }
    norm += jc;
    let scale = target / norm;
    let j0 = jc * scale;
    let ys = ys * scale;
    let lg = (0.5 * z).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (lg * j0 - 2.0 * ys);
    j0 + Complex64::i() * y0
}
