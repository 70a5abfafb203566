//! Square roots of complex scalars whose branch is fixed by continuity along
//! a path `s in [0, 1]` starting from a value with known argument.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest change of argument accepted between consecutive samples.
const MAX_STEP_ARG: f64 = FRAC_PI_2 / 2.0;
const MAX_REFINE_DEPTH: u32 = 20;

fn wrap(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    } else if x < -PI {
        x += 2.0 * PI;
    }
    x
}

/// Continuous argument of `f(1)` given that `f(0)` has argument `arg0`.
///
/// Samples `f` at `steps` equal increments; any step whose argument jump
/// exceeds an eighth of a turn is bisected until it does not.
pub fn continuous_arg(f: &dyn Fn(f64) -> Complex64, arg0: f64, steps: usize) -> Result<f64> {
    let steps = steps.max(1);
    let mut s_prev = 0.0;
    let mut z_prev = f(0.0);
    if z_prev == Complex64::new(0.0, 0.0) {
        return Err(Error::Internal("branch path starts at zero".into()));
    }
    let mut arg = arg0;
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        let z = f(s);
        arg += refine(f, s_prev, z_prev, s, z, 0)?;
        s_prev = s;
        z_prev = z;
    }
    Ok(arg)
}

fn refine(f: &dyn Fn(f64) -> Complex64, s0: f64, z0: Complex64, s1: f64, z1: Complex64, depth: u32) -> Result<f64> {
    if z1 == Complex64::new(0.0, 0.0) || !z1.is_finite() {
        return Err(Error::Internal(format!("branch path passes through zero or infinity at s = {s1}")));
    }
    let jump = wrap(z1.arg() - z0.arg());
    if jump.abs() <= MAX_STEP_ARG {
        return Ok(jump);
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::Internal(format!("branch tracking failed to resolve the path near s = {s0}")));
    }
    let sm = 0.5 * (s0 + s1);
    let zm = f(sm);
    Ok(refine(f, s0, z0, sm, zm, depth + 1)? + refine(f, sm, zm, s1, z1, depth + 1)?)
}

/// `f(1)^{-1/2}`, with the branch continued from `f(0) = 1` (argument zero).
pub fn inverse_sqrt_continued(f: &dyn Fn(f64) -> Complex64, steps: usize) -> Result<Complex64> {
    let arg = continuous_arg(f, 0.0, steps)?;
    let z = f(1.0);
    Ok(Complex64::from_polar(z.norm().powf(-0.5), -0.5 * arg))
}
