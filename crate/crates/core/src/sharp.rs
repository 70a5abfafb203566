//! Composition of Gaussian Weyl symbols.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::branch::inverse_sqrt_continued;
use crate::linalg::{determinant, CMatrix, Lu, SymplecticStructure};
use crate::mehler::{region_report, sech_tanh};
use crate::symbols::{adjoint_symbol, GaussianSymbol};

/// `D = 1 - 1/4 A2 J A1 J` and the symmetrized exponent `B` of `g1 # g2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpIntermediates {
    pub d: CMatrix,
    pub b: CMatrix,
}

fn d_matrix(a1: &CMatrix, a2: &CMatrix, j: &CMatrix, s: f64) -> CMatrix {
    let p = &(&(a2 * j) * a1) * j;
    &CMatrix::identity(a1.rows()) - &p.scale_re(0.25 * s * s)
}

fn check_pair(g1: &GaussianSymbol, g2: &GaussianSymbol) -> Result<()> {
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch { expected: 2 * g1.n(), found: 2 * g2.n() });
    }
    if !g1.integrable() || !g2.integrable() {
        return Err(Error::NotIntegrable);
    }
    Ok(())
}

pub fn sharp_intermediates(g1: &GaussianSymbol, g2: &GaussianSymbol) -> Result<SharpIntermediates> {
    check_pair(g1, g2)?;
    let n = g1.n();
    let (a1, a2) = (g1.exponent(), g2.exponent());
    let j: CMatrix = SymplecticStructure::new(n).matrix();
    let d = d_matrix(a1, a2, &j, 1.0);
    let lu = Lu::new(&d);
    lu.check_nonsingular()
        .map_err(|e| Error::InternalContractViolation(format!("D singular for integrable factors: {e}")))?;
    let half_i = Complex64::new(0.0, 0.5);
    let id = CMatrix::identity(2 * n);
    let left = &id + &(a1 * &j).scale(half_i);
    let right = &id - &(&j * a1).scale(half_i);
    let b = a1 + &(&(&left * &lu.inverse()?) * &(a2 * &right));
    let asym = b.asymmetry();
    if asym > 1e-10 * b.max_abs().max(1.0) {
        return Err(Error::InternalContractViolation(format!("B asymmetric by {asym}")));
    }
    Ok(SharpIntermediates { d, b: b.symmetrize() })
}

/// `g1 # g2`, the symbol of the composition `g1^w g2^w`.
pub fn sharp_product(g1: &GaussianSymbol, g2: &GaussianSymbol) -> Result<GaussianSymbol> {
    let mid = sharp_intermediates(g1, g2)?;
    let j: CMatrix = SymplecticStructure::new(g1.n()).matrix();
    let (a1, a2) = (g1.exponent(), g2.exponent());
    let det_d = |s: f64| determinant(&d_matrix(a1, a2, &j, s));
    let root = inverse_sqrt_continued(&det_d, TOL.branch_steps)
        .map_err(|e| Error::InternalContractViolation(format!("det D vanished along the scaling path: {e}")))?;
    GaussianSymbol::new(g1.prefactor() * g2.prefactor() * root, mid.b)
}

/// `adjoint(g) # g`, the symbol of `(g^w)^* g^w`, with the positive square root of `det D`.
pub fn gram_symbol(g: &GaussianSymbol) -> Result<(GaussianSymbol, SharpIntermediates)> {
    let adj = adjoint_symbol(g);
    let mid = sharp_intermediates(&adj, g)?;
    let det_d = determinant(&mid.d);
    if det_d.im.abs() > 1e-10 * det_d.norm() || det_d.re <= 0.0 {
        return Err(Error::InternalContractViolation(format!("det D = {det_d} is not positive for a self-adjoint product")));
    }
    let prefactor = g.prefactor().norm_sqr() / det_d.norm().sqrt();
    let sym = GaussianSymbol::new(Complex64::new(prefactor, 0.0), mid.b.clone())?;
    Ok((sym, mid))
}

/// Real coefficients of `p(x, xi) = cxx x^2 + cxxi x xi + cxixi xi^2`, the exponent of
/// the symbol of `(e^{-tQ_theta})^* e^{-tQ_theta}`, with the intermediate quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DaviesGramCoefficients {
    /// `tanh t`.
    pub t_tanh: Complex64,
    /// `arg tanh t`.
    pub phi: f64,
    /// `|tanh t| e^{i theta}`.
    pub a_theta: Complex64,
    /// `a_theta + 1 / a_theta`.
    pub f_val: Complex64,
    pub cxx: f64,
    pub cxxi: f64,
    pub cxixi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DaviesGram {
    /// `2 / |f(a_theta) sinh 2t|`.
    pub prefactor: f64,
    pub coefficients: DaviesGramCoefficients,
    /// Determinant of the fundamental matrix of `p`.
    pub det_f: f64,
}

impl DaviesGram {
    /// `prefactor * exp(p)` as a Gaussian symbol.
    pub fn symbol(&self) -> Result<GaussianSymbol> {
        let k = &self.coefficients;
        let b = CMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(
                match (i, j) {
                    (0, 0) => -2.0 * k.cxx,
                    (1, 1) => -2.0 * k.cxixi,
                    _ => -k.cxxi,
                },
                0.0,
            )
        });
        GaussianSymbol::new(Complex64::new(self.prefactor, 0.0), b)
    }
}

fn f(z: Complex64) -> Complex64 {
    z + 1.0 / z
}

pub fn davies_gram_symbol(theta: f64, t: Complex64) -> Result<DaviesGram> {
    let region = region_report(theta, t)?;
    if !region.bounded || t.re <= 0.0 {
        return Err(Error::OutsideRegion);
    }
    let (_, tanh) = sech_tanh(t);
    let phi = tanh.arg();
    let a_theta = Complex64::from_polar(tanh.norm(), theta);
    let a_minus = Complex64::from_polar(tanh.norm(), -theta);
    let f_val = f(a_theta);
    let rot = Complex64::from_polar(1.0, phi);
    let cxx = -2.0 * (rot / f_val).re;
    let cxxi = 4.0 * (a_theta / f_val).im;
    let cxixi = -2.0 * (rot / f(a_minus)).re;
    // |sinh 2t| = e^{2r} |1 - e^{-4t}| / 2
    let prefactor = 4.0 * (-2.0 * t.re).exp() / (f_val.norm() * (1.0 - (-4.0 * t).exp()).norm());
    let det_f = 0.25 * (4.0 * cxx * cxixi - cxxi * cxxi);
    Ok(DaviesGram {
        prefactor,
        coefficients: DaviesGramCoefficients { t_tanh: tanh, phi, a_theta, f_val, cxx, cxxi, cxixi },
        det_f,
    })
}
