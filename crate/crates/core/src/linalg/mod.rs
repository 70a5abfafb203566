//! Dense real and complex matrix routines sized for phase-space dimension
//! `2n` with small `n`, plus the handful of large dense operations the
//! verification oracles need (matrix-vector products, power iteration).

pub mod branch;
pub mod eigen;
pub mod expm;
pub mod lu;
pub mod matrix;
pub mod norm;
pub mod symplectic;

pub use eigen::{sym_eig, SymEigen};
pub use expm::{mat_cos_sin, mat_exp, mat_trig, MatTrig};
pub use lu::{determinant, inverse, solve, Lu};
pub use matrix::{CMatrix, Matrix, RMatrix, Scalar, SymplecticStructure};
pub use norm::{spectral_norm, spectral_norm_with, top_singular_values};
pub use symplectic::symplectic_eigenvalues;
