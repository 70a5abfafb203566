//! Weyl symbols of `exp(-t q^w)` and the boundedness region of the Davies semigroup.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::branch::inverse_sqrt_continued;
use crate::linalg::{determinant, mat_cos_sin, mat_trig, CMatrix, SymplecticStructure};
use crate::symbols::{fundamental_matrix, is_elliptic, GaussianSymbol, QuadraticForm};

/// Symbol `c exp(-1/2 Z.AZ)` of `exp(-t q^w)` for elliptic `q` and real `t > 0`.
pub fn mehler_symbol(q: &QuadraticForm, t: f64) -> Result<GaussianSymbol> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be positive and finite, got {t}")));
    }
    if !is_elliptic(q) {
        return Err(Error::NotElliptic);
    }
    let f = fundamental_matrix(q).scale_re(-t);
    let trig = mat_trig(&f).map_err(|_| Error::ExceptionalTime(format!("cos F is singular at t = {t}")))?;
    let det_cos = |s: f64| determinant(&mat_cos_sin(&f.scale_re(s)).0);
    let c = inverse_sqrt_continued(&det_cos, TOL.branch_steps)
        .map_err(|e| Error::ExceptionalTime(format!("det cos F vanishes on (0, {t}]: {e}")))?;
    let j: CMatrix = SymplecticStructure::new(q.n()).matrix();
    let jt = &j * &trig.tan;
    let a = -(&jt + &jt.transpose());
    GaussianSymbol::new(c, a)
}

/// `(1 / cosh t, tanh t)` without overflow for large `|Re t|`.
pub(crate) fn sech_tanh(t: Complex64) -> (Complex64, Complex64) {
    let (sign, u) = if t.re >= 0.0 { (1.0, t) } else { (-1.0, -t) };
    if u.re < 1.0 {
        return (1.0 / t.cosh(), t.tanh());
    }
    let e = (-2.0 * u).exp();
    let sech = 2.0 * (-u).exp() / (1.0 + e);
    let tanh = (1.0 - e) / (1.0 + e);
    (sech, tanh * sign)
}

/// Closed-form symbol `exp(-tanh(t) q_theta) / cosh t` at complex time.
pub fn davies_mehler(theta: f64, t: Complex64) -> Result<GaussianSymbol> {
    check_theta(theta)?;
    if t.re.abs() < 1.0 && t.cosh().norm() < TOL.pole {
        return Err(Error::ExceptionalTime(format!("cosh t vanishes at t = {t}")));
    }
    let (sech, tanh) = sech_tanh(t);
    let a = CMatrix::diag(&[tanh * Complex64::from_polar(2.0, theta), tanh * Complex64::from_polar(2.0, -theta)]);
    let region = region_report(theta, t)?;
    Ok(GaussianSymbol::new(sech, a)?.with_bounded(region.bounded))
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(theta.abs() < FRAC_PI_2) {
        return Err(Error::InvalidInput(format!("theta must lie in (-pi/2, pi/2), got {theta}")));
    }
    Ok(())
}

/// `|sinh 2t|^2 = sinh^2(2 Re t) + sin^2(2 Im t)`.
pub fn abs_sinh_2t_sq(t: Complex64) -> f64 {
    (2.0 * t.re).sinh().powi(2) + (2.0 * t.im).sin().powi(2)
}

/// Where `t` sits relative to the region on which `exp(-t Q_theta)` is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionReport {
    pub theta: f64,
    pub t: Complex64,
    /// `arg tanh t`; absent where `tanh t` is zero or infinite.
    pub phi: Option<f64>,
    pub bounded: bool,
    pub compact: bool,
    /// `e^{4 Re t}`.
    pub a: f64,
    /// `|(e^{4t} - 1) sin theta|`.
    pub b: f64,
    /// `t` is an integer multiple of `i pi / 2`.
    pub special_imaginary: bool,
    /// `(a - b - 1) / a`.
    pub margin: f64,
}

fn is_special_imaginary(t: Complex64) -> bool {
    let k = t.im / FRAC_PI_2;
    t.re.abs() <= TOL.special_time && (k - k.round()).abs() <= TOL.special_time * k.abs().max(1.0)
}

pub fn region_report(theta: f64, t: Complex64) -> Result<RegionReport> {
    check_theta(theta)?;
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be finite, got {t}")));
    }
    let (r, s) = (t.re, t.im);
    let sin_t = theta.abs().sin();
    let special = is_special_imaginary(t);

    // (a - b - 1)/a = 2 e^{-2r} (sinh 2r - |sinh 2t| sin|theta|), written to avoid overflow
    let x = -(-4.0 * r).exp_m1() / 2.0;
    let y = (-2.0 * r).exp() * (2.0 * s).sin();
    let mut margin = 2.0 * (x - x.hypot(y) * sin_t);
    if !margin.is_finite() {
        margin = if r < 0.0 { f64::NEG_INFINITY } else { 1.0 };
    }

    let phi_raw = (2.0 * s).sin().atan2((2.0 * r).sinh());
    let phi = if special { None } else { Some(phi_raw) };
    let geometric = if special { 0.0 } else { FRAC_PI_2 - theta.abs() - phi_raw.abs() };

    let band = TOL.region_band;
    if margin.abs() > band && geometric.abs() > band && (margin > 0.0) != (geometric > 0.0) {
        return Err(Error::CharacterizationMismatch { theta, re: r, im: s });
    }

    let a = (4.0 * r).exp();
    let b = ((4.0 * t).exp() - 1.0).norm() * sin_t;
    Ok(RegionReport {
        theta,
        t,
        phi,
        bounded: margin >= -band,
        compact: margin > band,
        a,
        b,
        special_imaginary: special,
        margin,
    })
}
