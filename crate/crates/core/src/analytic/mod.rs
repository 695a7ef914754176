//! Reference solutions, contrast functions, incident fields and dielectrics.

mod contrast;
mod dielectric;
mod gaussian;
mod incident;
mod oracle;

pub use contrast::{eaton_index, eaton_residual, Contrast, EATON_N_MAX, LENS_RADIUS};
pub use dielectric::{AtomSet, DielectricValue};
pub use gaussian::{gaussian_exact, gaussian_exact_radii, gaussian_laplace3_gradient, GaussianSource};
pub use incident::{beam_distance, Incident, BEAM_CENTER};
pub use oracle::quadrature_convolution_oracle;
