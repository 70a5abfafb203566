use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::mehler::region_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `t` on the imaginary axis inside the closed region: the operator is unitary.
    Unitary,
    /// Boundary of the region with `Re t > 0`: singular values do not decay.
    HeatType,
    /// Interior: singular values decay geometrically.
    OscillatorType,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Unitary => "unitary",
            Classification::HeatType => "heat_type",
            Classification::OscillatorType => "oscillator_type",
        }
    }
}

/// Norm of `exp(-t Q_theta)` with the quantities it is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DaviesResult {
    pub theta: f64,
    pub t: Complex64,
    /// `arg tanh t`; absent at the special times `t in (i pi / 2) Z`.
    pub phi: Option<f64>,
    #[serde(rename = "A")]
    pub a: f64,
    pub norm: f64,
    pub delta: f64,
    pub classification: Classification,
    pub sv_ratio: Option<f64>,
    pub bounded: bool,
    pub compact: bool,
}

pub fn davies_norm(theta: f64, t: Complex64) -> Result<DaviesResult> {
    davies_norm_perturbed(theta, t, 0.0)
}

/// [`davies_norm`] with `offset` added to `A`; lets the verifier confirm that it
/// detects a wrong constant.
#[doc(hidden)]
pub fn davies_norm_perturbed(theta: f64, t: Complex64, offset: f64) -> Result<DaviesResult> {
    let region = region_report(theta, t)?;
    if !region.bounded {
        return Err(Error::Unbounded { a: region.a, b: region.b, deficit: 1.0 + region.b - region.a });
    }
    let (r, s) = (t.re, t.im);
    if region.special_imaginary || r.abs() <= TOL.special_time {
        return Ok(DaviesResult {
            theta,
            t,
            phi: region.phi,
            a: 0.0,
            norm: 1.0,
            delta: 0.0,
            classification: Classification::Unitary,
            sv_ratio: None,
            bounded: true,
            compact: false,
        });
    }

    let phi = (2.0 * s).sin().atan2((2.0 * r).sinh());
    let heat = ((phi.abs() + theta.abs()) - FRAC_PI_2).abs() <= TOL.region_band;

    // A e^{-4r} = (e^{-2r} sinh 2r cos theta)^2 - (e^{-2r} sin 2s sin theta)^2
    let e4 = (-4.0 * r).exp();
    let x = -(-4.0 * r).exp_m1() / 2.0;
    let y = (-2.0 * r).exp() * (2.0 * s).sin();
    let mut scaled = if heat { 0.0 } else { ((x * theta.cos()).powi(2) - (y * theta.sin()).powi(2)).max(0.0) };
    scaled += offset * e4;
    let root = (e4 + scaled).sqrt() + scaled.sqrt();
    let norm = (-r).exp() / root.sqrt();
    let delta = scaled / (e4 + scaled);
    let ratio = (-2.0 * r).exp() / root;
    let classification = if heat { Classification::HeatType } else { Classification::OscillatorType };
    Ok(DaviesResult {
        theta,
        t,
        phi: Some(phi),
        a: scaled / e4,
        norm,
        delta,
        classification,
        sv_ratio: if heat { None } else { Some(ratio) },
        bounded: true,
        compact: region.compact,
    })
}

/// `s_k = ratio^{k + 1/2}` for `k = 0..=k_max`.
pub fn davies_singular_values(theta: f64, t: Complex64, k_max: usize) -> Result<Vec<f64>> {
    let res = davies_norm(theta, t)?;
    let ratio = res.sv_ratio.ok_or(Error::NotOscillatorType)?;
    Ok((0..=k_max).map(|k| ratio.powf(k as f64 + 0.5)).collect())
}

/// Eigenvalue `(1 - r)^k / (1 + r)^{k+1}` of `exp(-r(x^2 + xi^2))^w` on the `k`-th Hermite function.
pub fn ho_action(r: Complex64, k: u32) -> Complex64 {
    (1.0 - r).powu(k) / (1.0 + r).powu(k + 1)
}
