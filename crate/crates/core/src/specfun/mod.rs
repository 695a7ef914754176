//! Special functions used by the kernels and the analytic reference fields.

mod bessel;
mod erf;
mod expint;

pub use bessel::{
    bessel01, bessel_j0, bessel_j01, bessel_j1, bessel_jn_sequence, bessel_y0, bessel_y1,
    hankel1_0, hankel1_0_complex, hankel1_1, Bessel01, EULER_GAMMA,
};
pub use erf::{erf, erf_complex, erfc};
pub use expint::{e1, ei, ei_regular, ein};
