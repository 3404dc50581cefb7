//! Quadrature on the sphere and hemisphere, parity-filtered projections and
//! evaluation of harmonic expansions.

mod coeffs;
mod grid;
mod project;

pub use coeffs::{HarmonicCoefficients, Parity, ParityFilter, PARITY_THRESHOLD};
pub use grid::{gauss_legendre, make_grid, Domain, QuadratureGrid, QuadratureNode};
pub use project::{
    completeness_residual, evaluate, evaluate_dtheta, project, project_gram, synthesize, GaussianBump,
};
