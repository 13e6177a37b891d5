//! Shared numerical kernels.

mod convolve;
mod cumulants;
mod eigen;
mod grid;
mod saddle;
mod special;
mod stencil;

pub use convolve::{convolve_direct, convolve_fft, convolve_masses, grid_convolve};
pub use cumulants::{cumulants_from_masses, cumulants_of_grid, cumulants_of_samples, CumulantSet};
pub use eigen::{eigen_all, eigen_leading, eigenvalues, ComplexMatrix, EigenPair, LeadingEigen, DEGENERACY_TOL};
pub use grid::GridPdf;
pub use saddle::{saddle_point_estimate, SaddlePoint};
pub use special::digamma;
pub use stencil::{derivative1, derivative2};
