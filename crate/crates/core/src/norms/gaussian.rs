use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{determinant, mat_exp, spectral_norm, symplectic_eigenvalues, sym_eig, CMatrix};
use crate::mehler::mehler_symbol;
use crate::sharp::sharp_intermediates;
use crate::symbols::{adjoint_symbol, GaussianSymbol, QuadraticForm};

/// Data behind [`general_gaussian_norm`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNormReport {
    pub norm: f64,
    pub det_d: f64,
    pub symplectic_eigenvalues: Vec<f64>,
}

/// Operator norm on `L^2(R^n)` of the Weyl quantization of an integrable Gaussian.
pub fn general_gaussian_norm(g: &GaussianSymbol) -> Result<f64> {
    Ok(general_gaussian_norm_report(g)?.norm)
}

pub fn general_gaussian_norm_report(g: &GaussianSymbol) -> Result<GaussianNormReport> {
    if !g.integrable() {
        return Err(Error::NotIntegrable);
    }
    let mid = sharp_intermediates(&adjoint_symbol(g), g)?;
    let det = determinant(&mid.d);
    if det.im.abs() > 1e-9 * det.norm() || det.re <= 0.0 {
        return Err(Error::InternalContractViolation(format!("det D = {det} is not positive; D = {:?}", mid.d)));
    }
    let b_im = mid.b.im().max_abs();
    let b = mid.b.re().symmetrize();
    if b_im > 1e-8 * b.max_abs() {
        return Err(Error::InternalContractViolation(format!("B is not real (imaginary part {b_im:e}); B = {:?}", mid.b)));
    }
    let eig = sym_eig(&b)?;
    if eig.min() <= 1e-8 * eig.max() {
        return Err(Error::InternalContractViolation(format!("B is not positive definite; B = {b:?}")));
    }
    let s = symplectic_eigenvalues(&b)?;
    if let Some(bad) = s.iter().find(|&&x| x >= 2.0 + 1e-9) {
        return Err(Error::InternalContractViolation(format!("symplectic eigenvalue {bad} of B exceeds 2; B = {b:?}")));
    }
    let product: f64 = s.iter().map(|x| 1.0 + 0.5 * x).product();
    let norm = g.prefactor().norm() * det.re.powf(-0.25) / product.sqrt();
    Ok(GaussianNormReport { norm, det_d: det.re, symplectic_eigenvalues: s })
}

/// `|| exp(-t q^w) ||` for elliptic `q` and real `t > 0`.
pub fn semigroup_norm(q: &QuadraticForm, t: f64) -> Result<f64> {
    general_gaussian_norm(&mehler_symbol(q, t)?)
}

/// `|| exp(-tQ) ||` for `q = 1/2 M(xi + ix).(xi - ix)`: `exp(-Re(t tr M)/2)` when
/// `|| exp(-tM) || <= 1`, unbounded otherwise.
pub fn supersymmetric_norm(m: &CMatrix, t: Complex64) -> Result<f64> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::InvalidInput("M must be a nonempty square matrix".into()));
    }
    let e = mat_exp(&m.scale(-t));
    let sn = spectral_norm(&e)?;
    if sn > 1.0 + 1e-10 {
        return Err(Error::UnboundedSemigroup { spectral_norm: sn });
    }
    Ok((-0.5 * (t * m.trace()).re).exp())
}
