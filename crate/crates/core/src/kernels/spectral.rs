//! Closed-form transforms of the truncated kernels and their series branches.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{norm, Family, KernelSpec, Pole};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j01, bessel_jn_sequence, hankel1_0, hankel1_1};

// Branch radii, in units of the dimensionless argument L s or L |s - k|.
const LAPLACE_3D_SERIES: f64 = 0.5;
const BIHARMONIC_3D_SERIES: f64 = 1.5;
const LAPLACE_2D_SERIES: f64 = 1.0;
const BIHARMONIC_2D_SERIES: f64 = 3.0;
const NEAR_WAVENUMBER: f64 = 0.25;
const TAYLOR_TERMS: usize = 22;

/// A kernel with its per-spec constants evaluated once.
#[derive(Clone, Debug)]
pub struct Kernel {
    spec: KernelSpec,
    shift: Option<[f64; 3]>,
    l: f64,
    k: f64,
    // exp(i k L) in 3D.
    phase: Complex64,
    // H0(kL) and H1(kL) in 2D.
    h0: Complex64,
    h1: Complex64,
    // Taylor coefficients of the 2D Helmholtz transform about s = k.
    taylor: Vec<Complex64>,
}

impl Kernel {
    pub fn new(spec: &KernelSpec) -> Result<Self> {
        spec.validate()?;
        let radial = spec.radial_part();
        let (l, k) = (radial.truncation, radial.k);
        let mut kernel = Kernel {
            spec: spec.clone(),
            shift: if spec.family == Family::ConvectedHelmholtz { spec.h_vec } else { None },
            l,
            k,
            phase: Complex64::from_polar(1.0, k * l),
            h0: Complex64::default(),
            h1: Complex64::default(),
            taylor: Vec::new(),
        };
        if spec.dim == 2 && k > 0.0 {
            kernel.h0 = hankel1_0(k * l)?;
            kernel.h1 = hankel1_1(k * l)?;
            kernel.taylor = helmholtz2_taylor(k * l, kernel.h0, kernel.h1);
        }
        Ok(kernel)
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn is_radial(&self) -> bool {
        self.shift.is_none()
    }

    /// Transform at `s_vec` (length `dim`).
    pub fn spectral(&self, s_vec: &[f64]) -> Complex64 {
        match self.shift {
            Some(h) => {
                let mut d2 = 0.0;
                for (a, b) in s_vec.iter().zip(&h) {
                    d2 += (a - b) * (a - b);
                }
                self.radial(d2.sqrt())
            }
            None => self.radial(norm(s_vec)),
        }
    }

    /// Transform of the radial part at `|s| = s`.
    pub fn radial(&self, s: f64) -> Complex64 {
        let (l, k) = (self.l, self.k);
        let x = l * s;
        let near_k = k > 0.0 && s > 0.0 && l * (s - k).abs() < NEAR_WAVENUMBER;
        match (self.spec.family, self.spec.dim) {
            (Family::Laplace, 3) => laplace3(l, s).into(),
            (Family::Biharmonic, 3) => biharmonic3(l, s).into(),
            (Family::Laplace, _) => laplace2(l, s).into(),
            (Family::Biharmonic, _) => biharmonic2(l, s).into(),
            (Family::Helmholtz | Family::ConvectedHelmholtz, 3) => {
                if near_k {
                    self.helmholtz3_near_k(s)
                } else {
                    self.helmholtz3(s)
                }
            }
            (Family::Helmholtz | Family::ConvectedHelmholtz, _) => {
                if near_k {
                    self.helmholtz2_near_k(s)
                } else {
                    self.helmholtz2(x, s)
                }
            }
            (Family::LaplaceHelmholtz, 3) => {
                let g = if near_k { self.helmholtz3_near_k(s) } else { self.helmholtz3(s) };
                g - laplace3(l, s)
            }
            (Family::LaplaceHelmholtz, _) => {
                let g = if near_k { self.helmholtz2_near_k(s) } else { self.helmholtz2(x, s) };
                g - laplace2(l, s)
            }
        }
    }

    /// Series branch about a removable singularity at radial frequency `s`.
    pub(crate) fn series(&self, s: f64, pole: Pole) -> Result<Complex64> {
        let (l, dim, family) = (self.l, self.spec.dim, self.spec.family);
        match pole {
            Pole::Origin => Ok(match (family, dim) {
                (Family::Laplace, 3) => laplace3_series(l, s).into(),
                (Family::Biharmonic, 3) => biharmonic3_series(l, s).into(),
                (Family::Laplace, _) => laplace2_series(l, s).into(),
                (Family::Biharmonic, _) => biharmonic2_series(l, s).into(),
                // The Helmholtz forms are regular at the origin; sinc is evaluated stably.
                (Family::Helmholtz | Family::ConvectedHelmholtz, 3) => self.helmholtz3(s),
                (Family::Helmholtz | Family::ConvectedHelmholtz, _) => self.helmholtz2(l * s, s),
                (Family::LaplaceHelmholtz, 3) => self.helmholtz3(s) - laplace3_series(l, s),
                (Family::LaplaceHelmholtz, _) => {
                    self.helmholtz2(l * s, s) - laplace2_series(l, s)
                }
            }),
            Pole::Wavenumber => {
                if !(family.needs_wavenumber() || family == Family::ConvectedHelmholtz) {
                    return Err(Error::InvalidArgument(format!(
                        "{family} has no singularity at |s| = k"
                    )));
                }
                if !(s > 0.0) {
                    return Err(Error::InvalidArgument(
                        "the wavenumber series needs |s| > 0".into(),
                    ));
                }
                let g = if dim == 3 { self.helmholtz3_near_k(s) } else { self.helmholtz2_near_k(s) };
                Ok(match (family, dim) {
                    (Family::LaplaceHelmholtz, 3) => g - laplace3(l, s),
                    (Family::LaplaceHelmholtz, _) => g - laplace2(l, s),
                    _ => g,
                })
            }
        }
    }

    fn helmholtz3(&self, s: f64) -> Complex64 {
        let (l, k) = (self.l, self.k);
        let x = l * s;
        let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
        let num = -1.0 + self.phase * Complex64::new(x.cos(), -k * l * sinc);
        num / ((k - s) * (k + s))
    }

    // (L / 2is) [E(i(s+k)L) - E(-i(s-k)L)],  E(z) = (exp(z) - 1)/z.
    fn helmholtz3_near_k(&self, s: f64) -> Complex64 {
        let (l, k) = (self.l, self.k);
        let a = exprel(Complex64::new(0.0, (s + k) * l));
        let b = exprel(Complex64::new(0.0, -(s - k) * l));
        l / Complex64::new(0.0, 2.0 * s) * (a - b)
    }

    fn helmholtz2(&self, x: f64, s: f64) -> Complex64 {
        let (l, k) = (self.l, self.k);
        let (j0, j1) = bessel_j01(x);
        let half_pi_i = Complex64::new(0.0, 0.5 * PI);
        let num = 1.0 + half_pi_i * (x * j1 * self.h0 - l * k * j0 * self.h1);
        num / ((s - k) * (s + k))
    }

    fn helmholtz2_near_k(&self, s: f64) -> Complex64 {
        let (l, k) = (self.l, self.k);
        let t = l * (s - k);
        let mut acc = Complex64::default();
        for c in self.taylor.iter().rev() {
            acc = acc * t + c;
        }
        l * acc / (s + k)
    }
}

// Coefficients n_1, n_2, ... of the numerator of the 2D Helmholtz transform in
// powers of t = L(s - k); n_0 vanishes by the Wronskian.
fn helmholtz2_taylor(x0: f64, h0: Complex64, h1: Complex64) -> Vec<Complex64> {
    let m_max = TAYLOR_TERMS + 1;
    let jn = bessel_jn_sequence(x0, m_max + 1);
    let j_signed = |n: i64| -> f64 {
        let v = jn[n.unsigned_abs() as usize];
        if n < 0 && n % 2 != 0 {
            -v
        } else {
            v
        }
    };
    // c_m = J0^(m)(x0) / m!,  D^m J0 = 2^-m sum_j (-1)^j C(m, j) J_{2j-m}.
    let mut c = Vec::with_capacity(m_max + 1);
    let mut factorial = 1.0;
    for m in 0..=m_max {
        if m > 0 {
            factorial *= m as f64;
        }
        let mut binom = 1.0;
        let mut sum = 0.0;
        for j in 0..=m {
            if j > 0 {
                binom *= (m - j + 1) as f64 / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * j_signed(2 * j as i64 - m as i64);
        }
        c.push(sum / 2f64.powi(m as i32) / factorial);
    }
    let half_pi_i = Complex64::new(0.0, 0.5 * PI);
    (1..=TAYLOR_TERMS)
        .map(|m| {
            let mf = m as f64;
            let xj1 = -(x0 * (mf + 1.0) * c[m + 1] + mf * c[m]);
            half_pi_i * (h0 * xj1 - x0 * h1 * c[m])
        })
        .collect()
}

fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for j in 2..20 {
            term *= z / j as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

fn laplace3(l: f64, s: f64) -> f64 {
    if l * s < LAPLACE_3D_SERIES {
        laplace3_series(l, s)
    } else {
        let v = (0.5 * l * s).sin() / s;
        2.0 * v * v
    }
}

fn biharmonic3(l: f64, s: f64) -> f64 {
    let x = l * s;
    if x < BIHARMONIC_3D_SERIES {
        biharmonic3_series(l, s)
    } else {
        let (sn, cs) = x.sin_cos();
        ((2.0 - x * x) * cs + 2.0 * x * sn - 2.0) / (2.0 * s.powi(4))
    }
}

fn laplace2(l: f64, s: f64) -> f64 {
    let x = l * s;
    if x < LAPLACE_2D_SERIES {
        laplace2_series(l, s)
    } else {
        let (j0, j1) = bessel_j01(x);
        (1.0 - j0) / (s * s) - l * l.ln() * j1 / s
    }
}

fn biharmonic2(l: f64, s: f64) -> f64 {
    let x = l * s;
    if x < BIHARMONIC_2D_SERIES {
        biharmonic2_series(l, s)
    } else {
        let (j0, j1) = bessel_j01(x);
        let ll = l.ln();
        (j0 - 1.0) / s.powi(4) - l.powi(3) * (ll - 1.0) * j1 / (4.0 * s)
            + l * ll * j1 / s.powi(3)
            - l * l * (2.0 * ll - 1.0) * j0 / (4.0 * s * s)
    }
}

// Moment series: 4 pi sum (-1)^n s^2n / (2n+1)! int_0^L r^(2n+2) g dr in 3D and
// 2 pi sum (-1)^n (s/2)^2n / (n!)^2 int_0^L r^(2n+1) g dr in 2D.
const SERIES_TERMS: usize = 30;

fn laplace3_series(l: f64, s: f64) -> f64 {
    let x2 = (l * s).powi(2);
    let mut a = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_TERMS {
        let nf = n as f64;
        if n > 0 {
            a *= -x2 / ((2.0 * nf) * (2.0 * nf + 1.0));
        }
        sum += a / (2.0 * nf + 2.0);
        if a.abs() < 1e-18 {
            break;
        }
    }
    l * l * sum
}

fn biharmonic3_series(l: f64, s: f64) -> f64 {
    let x2 = (l * s).powi(2);
    let mut a = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_TERMS {
        let nf = n as f64;
        if n > 0 {
            a *= -x2 / ((2.0 * nf) * (2.0 * nf + 1.0));
        }
        sum += a / (2.0 * nf + 4.0);
        if a.abs() < 1e-18 {
            break;
        }
    }
    0.5 * l.powi(4) * sum
}

fn laplace2_series(l: f64, s: f64) -> f64 {
    let q = (0.5 * l * s).powi(2);
    let ll = l.ln();
    let mut c = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_TERMS {
        let nf = n as f64;
        if n > 0 {
            c *= -q / (nf * nf);
        }
        let m1 = 2.0 * nf + 2.0;
        sum += c * (ll / m1 - 1.0 / (m1 * m1));
        if c.abs() < 1e-18 {
            break;
        }
    }
    -l * l * sum
}

fn biharmonic2_series(l: f64, s: f64) -> f64 {
    let q = (0.5 * l * s).powi(2);
    let ll = l.ln();
    let mut c = 1.0;
    let mut sum = 0.0;
    for n in 0..SERIES_TERMS {
        let nf = n as f64;
        if n > 0 {
            c *= -q / (nf * nf);
        }
        let m1 = 2.0 * nf + 4.0;
        sum += c * (ll / m1 - 1.0 / (m1 * m1) - 1.0 / m1);
        if c.abs() < 1e-18 {
            break;
        }
    }
    -0.25 * l.powi(4) * sum
}
