use num_complex::Complex64;

use super::{Field, GridSpec};
use crate::error::{Error, Result};

/// Relative discrete L2 and maximum errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub e2: f64,
    pub einf: f64,
}

fn norms_of(pairs: impl Iterator<Item = (Complex64, Complex64)>) -> ErrorNorms {
    let (mut num2, mut den2, mut numi, mut deni) = (0.0, 0.0, 0.0f64, 0.0f64);
    for (u, r) in pairs {
        let d = (u - r).norm();
        num2 += d * d;
        den2 += r.norm_sqr();
        numi = numi.max(d);
        deni = deni.max(r.norm());
    }
    ErrorNorms { e2: (num2 / den2).sqrt(), einf: numi / deni }
}

/// Errors of `u` relative to `reference` on the same grid.
pub fn relative_errors(u: &Field, reference: &Field) -> Result<ErrorNorms> {
    u.check_same_grid(reference)?;
    Ok(norms_of(u.values().iter().copied().zip(reference.values().iter().copied())))
}

/// Errors of `coarse` against `fine` on the nodes the two grids share.
///
/// Nodes `j/n` and `j'/n_ref` coincide on the lattice with spacing
/// `1/gcd(n, n_ref)`; that lattice is what gets compared.
pub fn common_node_errors(coarse: &Field, fine: &Field) -> Result<ErrorNorms> {
    let (gc, gf) = (coarse.grid(), fine.grid());
    if gc.dim() != gf.dim() {
        return Err(Error::ShapeMismatch("fields differ in dimension".into()));
    }
    let g = gcd(gc.n(), gf.n());
    if g < 2 {
        return Err(Error::InvalidArgument(format!(
            "grids n={} and n={} share too few nodes",
            gc.n(),
            gf.n()
        )));
    }
    let common = GridSpec::new(gc.dim(), g - g % 2)?;
    let (sc, sf) = ((gc.n() / g) as i64, (gf.n() / g) as i64);
    let pairs = (0..common.len()).map(|flat| {
        let l = common.labels(flat);
        let d = gc.dim();
        let lc: Vec<i64> = l[..d].iter().map(|&j| j * sc).collect();
        let lf: Vec<i64> = l[..d].iter().map(|&j| j * sf).collect();
        (coarse.at(&lc).expect("common node"), fine.at(&lf).expect("common node"))
    });
    Ok(norms_of(pairs))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
