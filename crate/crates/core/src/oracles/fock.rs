//! Gaussians in weighted spaces of entire functions: quadrature of their norms
//! and a scan over Gaussians for the norm of an embedding.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::HolomorphicWeight;

/// `u_gamma(x) = (pi / Re gamma)^{-1/4} exp(-gamma x^2 / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub gamma: Complex64,
}

impl GaussianState {
    pub fn new(gamma: Complex64) -> Result<Self> {
        if !(gamma.re > 0.0) {
            return Err(Error::InvalidInput(format!("Gaussian needs Re gamma > 0, got {gamma}")));
        }
        Ok(GaussianState { gamma })
    }

    /// `(pi / Re gamma)^{-1/4}`, making `u_gamma` a unit vector in `L^2(R)`.
    pub fn normalization(&self) -> f64 {
        (PI / self.gamma.re).powf(-0.25)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.normalization() * (-0.5 * self.gamma * x * x).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockQuadrature {
    /// `int |e^{-gamma z^2 / 2}|^2 e^{-2 Phi(z)} dm(z)` by quadrature.
    pub value: f64,
    /// The same integral in closed form, `pi / sqrt(4 alpha^2 - |gamma + 2 beta|^2)`.
    pub closed_form: f64,
    pub points_per_axis: usize,
}

const MAX_FOCK_POINTS: usize = 4001;

/// Squared weighted norm of the unnormalized Gaussian `e^{-gamma z^2 / 2}`.
pub fn fock_norm_quadrature(gamma: Complex64, w: &HolomorphicWeight) -> Result<FockQuadrature> {
    // exponent -(x, y).M(x, y), M = [[2 alpha + Re c, -Im c], [-Im c, 2 alpha - Re c]], c = gamma + 2 beta
    let cc = gamma + 2.0 * w.beta;
    let det = 4.0 * w.alpha * w.alpha - cc.norm_sqr();
    if !(w.alpha > 0.0 && det > 0.0) {
        return Err(Error::Divergent);
    }
    let (m11, m12, m22) = (2.0 * w.alpha + cc.re, -cc.im, 2.0 * w.alpha - cc.re);
    let lam_max = 2.0 * w.alpha + cc.norm();
    let lam_min = det / lam_max;
    let half_width = (40.0 / lam_min).sqrt();
    let step = 0.5 / lam_max.sqrt();
    let points = ((2.0 * half_width / step).ceil() as usize + 1).clamp(3, MAX_FOCK_POINTS) | 1;
    let h = 2.0 * half_width / (points - 1) as f64;
    let mut total = 0.0;
    for i in 0..points {
        let x = -half_width + h * i as f64;
        let wx = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        let mut row = 0.0;
        for j in 0..points {
            let y = -half_width + h * j as f64;
            let wy = if j == 0 || j == points - 1 { 0.5 } else { 1.0 };
            row += wy * (-(m11 * x * x + 2.0 * m12 * x * y + m22 * y * y)).exp();
        }
        total += wx * row;
    }
    Ok(FockQuadrature { value: total * h * h, closed_form: PI / det.sqrt(), points_per_axis: points })
}

/// Weights `(|z|^2/2, (a|z|^2 - b Re z^2)/2)` realizing the reduced pair `(a, b)`.
pub fn reduced_weights(a: f64, b: f64) -> Result<(HolomorphicWeight, HolomorphicWeight)> {
    Ok((HolomorphicWeight::standard(), HolomorphicWeight::new(0.5 * a, Complex64::new(-0.5 * b, 0.0))?))
}

/// `||u||_{Phi_2} / ||u||_{Phi_1}` for `u = e^{-gamma z^2/2}` and the reduced weights:
/// `((1 - |gamma|^2) / (a^2 - |b - gamma|^2))^{1/4}`.
pub fn embedding_ratio(a: f64, b: f64, gamma: Complex64) -> f64 {
    if gamma.im == 0.0 {
        let g = gamma.re;
        // factored so that the a - b = 1, gamma -> -1 limit stays accurate
        let num = (1.0 - g) * (1.0 + g);
        let den = ((a - b - 1.0) + (1.0 + g)) * (a + b - g);
        return (num / den).powf(0.25);
    }
    ((1.0 - gamma.norm_sqr()) / (a * a - (b - gamma).norm_sqr())).powf(0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanResult {
    pub gamma_star: f64,
    pub norm: f64,
    /// Best value on the coarse complex grid and where it was attained.
    pub grid_max: f64,
    pub grid_argmax: Complex64,
}

const SCAN_EDGE: f64 = 1e-9;

/// Maximize [`embedding_ratio`] over Gaussians: a coarse 41 x 41 scan of the unit
/// disc, then golden-section search on the real segment.
pub fn gaussian_scan_embedding(a: f64, b: f64) -> Result<ScanResult> {
    if !(a > 0.0 && b >= 0.0 && a - b >= 1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!("scan needs a - b >= 1, got a = {a}, b = {b}")));
    }
    let mut grid_max = f64::NEG_INFINITY;
    let mut grid_argmax = Complex64::new(0.0, 0.0);
    for i in 0..41 {
        for j in 0..41 {
            let g = Complex64::new(-1.0 + 0.05 * i as f64, -1.0 + 0.05 * j as f64);
            if g.norm() >= 1.0 - SCAN_EDGE {
                continue;
            }
            let v = embedding_ratio(a, b, g);
            if v > grid_max {
                grid_max = v;
                grid_argmax = g;
            }
        }
    }

    let f = |g: f64| embedding_ratio(a, b, Complex64::new(g, 0.0));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-1.0 + SCAN_EDGE, 1.0 - SCAN_EDGE);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut gamma_star = 0.5 * (lo + hi);
    let mut norm = f(gamma_star);
    for edge in [-1.0 + SCAN_EDGE, 1.0 - SCAN_EDGE] {
        if f(edge) > norm {
            gamma_star = edge;
            norm = f(edge);
        }
    }
    Ok(ScanResult { gamma_star, norm, grid_max, grid_argmax })
}
