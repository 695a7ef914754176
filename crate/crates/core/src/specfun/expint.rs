//! Exponential integrals.
//!
//! `ein` is the entire function `sum (-1)^(n+1) x^n / (n n!) = E1(x) + ln x + gamma`,
//! which regularises E1 at the origin. `ei_regular` is the companion with all
//! terms positive, `sum x^n / (n n!) = Ei(x) - ln x - gamma`.

use super::bessel::EULER_GAMMA;
use crate::error::{Error, Result};

const EIN_SERIES_LIMIT: f64 = 1.5;
const EI_ASYMPTOTIC_LIMIT: f64 = 40.0;

fn positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} needs a positive finite argument, got {x}")))
    }
}

/// Exponential integral Ei(x) for `x > 0`.
pub fn ei(x: f64) -> Result<f64> {
    positive(x, "Ei")?;
    if x < EI_ASYMPTOTIC_LIMIT {
        Ok(EULER_GAMMA + x.ln() + positive_series(x))
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..60 {
            let next = term * n as f64 / x;
            if next > term {
                break;
            }
            term = next;
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        Ok(x.exp() / x * sum)
    }
}

/// Exponential integral E1(x) for `x > 0`.
pub fn e1(x: f64) -> Result<f64> {
    positive(x, "E1")?;
    if x < EIN_SERIES_LIMIT {
        Ok(alternating_series(x) - x.ln() - EULER_GAMMA)
    } else {
        Ok(e1_fraction(x))
    }
}

/// Entire exponential integral, `Ein(0) = 0`; defined for every real `x`.
pub fn ein(x: f64) -> f64 {
    if x < EIN_SERIES_LIMIT {
        alternating_series(x)
    } else {
        e1_fraction(x) + x.ln() + EULER_GAMMA
    }
}

/// `Ei(x) - ln x - gamma`, an entire function with positive Taylor coefficients.
pub fn ei_regular(x: f64) -> f64 {
    if x >= 0.0 {
        positive_series(x)
    } else {
        -ein(-x)
    }
}

fn positive_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..400 {
        let nf = n as f64;
        term *= x / nf;
        let add = term / nf;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn alternating_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..200 {
        let nf = n as f64;
        term *= -x / nf;
        let add = -term / nf;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

// E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))), modified Lentz.
fn e1_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions_agree() {
        for &x in &[0.01, 0.5, 1.0, 1.49, 1.51, 3.0, 10.0] {
            let via_e1 = e1(x).unwrap() + x.ln() + EULER_GAMMA;
            assert!((ein(x) - via_e1).abs() < 2e-15 * via_e1.abs().max(1.0), "x={x}");
            let via_ei = ei(x).unwrap() - x.ln() - EULER_GAMMA;
            assert!((ei_regular(x) - via_ei).abs() < 1e-14 * via_ei.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn domain() {
        assert!(ei(0.0).is_err());
        assert!(e1(-1.0).is_err());
        assert_eq!(ein(0.0), 0.0);
    }
}
