use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::mehler::check_theta;

/// `Phi(z) = alpha |z|^2 + Re(beta z^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolomorphicWeight {
    pub alpha: f64,
    pub beta: Complex64,
}

impl HolomorphicWeight {
    pub fn new(alpha: f64, beta: Complex64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::NotPlurisubharmonic { alpha });
        }
        Ok(HolomorphicWeight { alpha, beta })
    }

    /// `|z|^2 / 2`, the weight of the classical Bargmann space.
    pub fn standard() -> Self {
        HolomorphicWeight { alpha: 0.5, beta: Complex64::new(0.0, 0.0) }
    }

    /// The weight carrying `L^2(R)` to the holomorphic side for `Q_theta`:
    /// `(|z|^2 + Re(i e^{i theta} sin theta z^2)) / (2 cos theta)`.
    pub fn davies(theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let k = 0.5 / theta.cos();
        Ok(HolomorphicWeight { alpha: k, beta: Complex64::i() * Complex64::from_polar(k * theta.sin(), theta) })
    }

    /// `z -> Phi(e^{2t} z)`.
    pub fn dilated(&self, t: Complex64) -> Self {
        HolomorphicWeight { alpha: self.alpha * (4.0 * t.re).exp(), beta: self.beta * (4.0 * t).exp() }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        self.alpha * z.norm_sqr() + (self.beta * z * z).re
    }

    /// Gaussians are integrable against `e^{-2 Phi}` only when `alpha > |beta|`.
    pub fn admits_gaussians(&self) -> bool {
        self.alpha > self.beta.norm()
    }
}

/// `a = alpha_2 / alpha_1` and `b = |beta_2 - beta_1| / alpha_1`.
pub fn weight_reduce(phi1: &HolomorphicWeight, phi2: &HolomorphicWeight) -> Result<(f64, f64)> {
    for w in [phi1, phi2] {
        if !(w.alpha > 0.0) {
            return Err(Error::NotPlurisubharmonic { alpha: w.alpha });
        }
    }
    Ok((phi2.alpha / phi1.alpha, (phi2.beta - phi1.beta).norm() / phi1.alpha))
}

/// Norm of the inclusion `H_{Phi_1} -> H_{Phi_2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingResult {
    pub a: f64,
    pub b: f64,
    pub bounded: bool,
    /// Parameter of the extremal Gaussian `exp(gamma z^2 / 2)` in reduced coordinates.
    pub gamma_star: Option<f64>,
    pub norm: Option<f64>,
}

pub fn embedding_norm(phi1: &HolomorphicWeight, phi2: &HolomorphicWeight) -> Result<EmbeddingResult> {
    let (a, b) = weight_reduce(phi1, phi2)?;
    Ok(embedding_norm_ab(a, b))
}

/// [`embedding_norm`] in reduced form, for `a > 0`, `b >= 0`.
pub fn embedding_norm_ab(a: f64, b: f64) -> EmbeddingResult {
    let band = TOL.region_band * a.max(1.0);
    let eps = a - b - 1.0;
    let unbounded = EmbeddingResult { a, b, bounded: false, gamma_star: None, norm: None };
    if !(a > 0.0) || eps < -band {
        return unbounded;
    }
    if b <= TOL.region_band {
        return EmbeddingResult { a, b, bounded: true, gamma_star: Some(0.0), norm: Some(a.powf(-0.5)) };
    }
    if eps <= band {
        return EmbeddingResult { a, b, bounded: true, gamma_star: Some(-1.0), norm: Some(a.powf(-0.25)) };
    }
    // B' = a^2 - b^2 - 1 factored as B' - 2b = eps (a + b + 1), B' + 2b = (a - b + 1)(a + b - 1)
    let bp = a * a - b * b - 1.0;
    let minus = eps * (a + b + 1.0);
    let plus = (a - b + 1.0) * (a + b - 1.0);
    let disc = (minus * plus).sqrt();
    let den = bp + disc;
    let gamma = -2.0 * b / den;
    let one_plus = (minus + disc) / den;
    let one_minus = 2.0 - one_plus;
    let num = one_plus * one_minus;
    let d = (eps + one_plus) * (a + b - gamma);
    EmbeddingResult { a, b, bounded: true, gamma_star: Some(gamma), norm: Some((num / d).powf(0.25)) }
}

/// `(a, b) = (e^{4 Re t}, |(e^{4t} - 1) sin theta|)` for the Davies weights.
pub fn davies_to_embedding(theta: f64, t: Complex64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    Ok(((4.0 * t.re).exp(), ((4.0 * t).exp() - 1.0).norm() * theta.sin().abs()))
}

/// A Davies pair `(theta, t)` realizing a given `(a, b)` with `b <= a + 1`.
pub fn embedding_to_davies(a: f64, b: f64) -> Result<(f64, Complex64)> {
    if !(a > 0.0 && b >= 0.0 && b < a + 1.0) {
        return Err(Error::InvalidInput(format!("need a > 0 and 0 <= b < a + 1, got a = {a}, b = {b}")));
    }
    Ok(((b / (a + 1.0)).asin(), Complex64::new(0.25 * a.ln(), FRAC_PI_4)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::davies::davies_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // gamma* straight from the quadratic formula
    fn gamma_textbook(a: f64, b: f64) -> f64 {
        (1.0 - a * a + b * b + ((a * a - b * b - 1.0).powi(2) - 4.0 * b * b).sqrt()) / (2.0 * b)
    }

    #[test]
    fn reduce_examples() {
        let w = HolomorphicWeight::new(0.7, c(0.1, 0.2)).unwrap();
        assert_eq!(weight_reduce(&w, &w).unwrap(), (1.0, 0.0));
        let p1 = HolomorphicWeight::standard();
        let p2 = HolomorphicWeight::new(1.0, c(-0.25, 0.0)).unwrap();
        assert_eq!(weight_reduce(&p1, &p2).unwrap(), (2.0, 0.5));
        assert!(matches!(HolomorphicWeight::new(0.0, c(0.0, 0.0)), Err(Error::NotPlurisubharmonic { .. })));
    }

    #[test]
    fn davies_weights_reduce_to_a_b() {
        for theta in [0.0, 0.4, -1.1] {
            for t in [c(0.3, 0.2), c(-0.2, 1.0), c(1.0, -2.0)] {
                let w = HolomorphicWeight::davies(theta).unwrap();
                let (a, b) = weight_reduce(&w, &w.dilated(t)).unwrap();
                let (a2, b2) = davies_to_embedding(theta, t).unwrap();
                assert!((a - a2).abs() < 1e-12 * a2);
                assert!((b - b2).abs() < 1e-12 * a2.max(1.0));
            }
        }
    }

    #[test]
    fn davies_weight_matches_closed_form() {
        let theta: f64 = 0.6;
        let w = HolomorphicWeight::davies(theta).unwrap();
        for z in [c(1.0, 0.0), c(0.3, -0.8), c(-2.0, 1.5)] {
            let direct = (z.norm_sqr() + (Complex64::i() * Complex64::from_polar(theta.sin(), theta) * z * z).re) / (2.0 * theta.cos());
            assert!((w.eval(z) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn norm_cases() {
        let r = embedding_norm_ab(4.0, 0.0);
        assert_eq!(r.norm, Some(0.5));
        let r = embedding_norm_ab(2.0, 1.0);
        assert!((r.norm.unwrap() - 2f64.powf(-0.25)).abs() < 1e-15);
        assert_eq!(r.gamma_star, Some(-1.0));
        let r = embedding_norm_ab(2.0, 0.5);
        let g = -2.75 + 6.5625f64.sqrt();
        assert!((r.gamma_star.unwrap() - g).abs() < 1e-14);
        let expected = ((1.0 - g * g) / (4.0 - (0.5 - g).powi(2))).powf(0.25);
        assert!((r.norm.unwrap() - expected).abs() < 1e-14);
        assert!((r.norm.unwrap() - 0.7232).abs() < 1e-4);
        let r = embedding_norm_ab(1.5, 0.6);
        assert!(!r.bounded && r.norm.is_none());
    }

    #[test]
    fn stable_root_matches_textbook_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let b = rng.gen_range(0.01..3.0);
            let a = b + 1.0 + rng.gen_range(0.01..3.0);
            let r = embedding_norm_ab(a, b);
            let g = gamma_textbook(a, b);
            assert!((r.gamma_star.unwrap() - g).abs() < 1e-9, "{a} {b}");
            assert!(r.gamma_star.unwrap().abs() < 1.0);
        }
    }

    #[test]
    fn continuous_at_boundary() {
        let b = 0.8;
        let edge = embedding_norm_ab(1.0 + b, b).norm.unwrap();
        for eps in [1e-4, 1e-7, 1e-9] {
            let near = embedding_norm_ab(1.0 + b + eps, b).norm.unwrap();
            assert!((near - edge).abs() < 10.0 * eps.sqrt().sqrt(), "{eps}: {near} vs {edge}");
            assert!(near <= edge);
        }
        let small_b = embedding_norm_ab(3.0, 1e-9).norm.unwrap();
        assert!((small_b - 3f64.powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn inverse_parameterization_round_trips() {
        let (theta, t) = embedding_to_davies(2.0, 0.5).unwrap();
        assert!((theta - (1.0f64 / 6.0).asin()).abs() < 1e-15);
        let (a, b) = davies_to_embedding(theta, t).unwrap();
        assert!((a - 2.0).abs() < 1e-14 && (b - 0.5).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let a = rng.gen_range(0.1..10.0);
            let b = rng.gen_range(0.0..a + 0.99);
            let (theta, t) = embedding_to_davies(a, b).unwrap();
            let (a2, b2) = davies_to_embedding(theta, t).unwrap();
            assert!((a - a2).abs() < 1e-12 * a && (b - b2).abs() < 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn agrees_with_davies_norm() {
        let (theta, t) = embedding_to_davies(2.0, 0.5).unwrap();
        let lhs = davies_norm(theta, t).unwrap().norm;
        let rhs = t.re.exp() * embedding_norm_ab(2.0, 0.5).norm.unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        assert!((lhs - 0.8600).abs() < 1e-4);
        for theta in [0.0, 0.3, -0.7, 1.2] {
            for i in 1..=10 {
                for j in -10..=10 {
                    let t = c(0.15 * i as f64, 0.3 * j as f64);
                    let Ok(d) = davies_norm(theta, t) else { continue };
                    let (a, b) = davies_to_embedding(theta, t).unwrap();
                    let e = embedding_norm_ab(a, b);
                    assert!(e.bounded);
                    let rhs = t.re.exp() * e.norm.unwrap();
                    assert!((d.norm - rhs).abs() < 1e-9, "{theta} {t}: {} vs {rhs}", d.norm);
                }
            }
        }
    }
}
