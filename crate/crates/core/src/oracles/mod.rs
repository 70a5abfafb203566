//! Independent numerical checks: explicit kernels, Galerkin truncations and
//! quadrature on the holomorphic side.

pub mod fock;
pub mod galerkin;
pub mod kernel;
pub mod sample;

pub use fock::{embedding_ratio, fock_norm_quadrature, gaussian_scan_embedding, reduced_weights, FockQuadrature, GaussianState, ScanResult};
pub use galerkin::{gauss_hermite, galerkin_matrix, hermite_functions, hermite_galerkin_norm, hermite_galerkin_norm_symbol, MAX_BASIS_1D, MAX_BASIS_2D};
pub use kernel::{compose_kernels, discretize_kernel, kernel_from_weyl, kernel_svd_norm, kernel_svd_norm_checked, GaussianKernel, SvdGrid, SvdResult, MAX_SVD_POINTS};
pub use sample::{random_elliptic, random_integrable};
