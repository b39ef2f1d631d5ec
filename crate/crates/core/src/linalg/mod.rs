//! Dense complex linear algebra: matrices, states, Kronecker products and
//! Hermitian spectral functions.
//!
//! Everything here is dense; the supported envelope is up to ten qubits
//! (dimension 1024).

mod eigen;
mod matrix;
mod state;

pub use eigen::{expm_oracle, herm_eig, psd_sqrt, HermitianEigen, HERMITIAN_TOL, NEGATIVE_SPECTRUM_TOL};
pub use matrix::{kron, kron_all, ComplexMatrix};
pub use state::{phase_align, Convention, DensityMatrix, StateVector};

pub use num_complex::Complex64 as C64;
