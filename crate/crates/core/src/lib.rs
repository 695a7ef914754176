//! Volume potentials of free-space Green's functions on uniform grids.

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod kernels;
pub mod potential;
pub mod quadrature;
pub mod solvers;
pub mod specfun;

pub use error::{Error, Result, Unconverged};
pub use num_complex::Complex64;
