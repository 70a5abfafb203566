//! Matrix exponential by scaling and squaring with the diagonal [13/13] Padé
//! approximant, and the matrix cosine/sine/tangent built on top of it.
//!
//! The order is fixed at 13 and the scaling exponent is chosen from the
//! 1-norm alone, so a given input always follows the same arithmetic path.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::lu::Lu;
use super::matrix::CMatrix;

/// 1-norm bound below which the [13/13] approximant meets unit roundoff.
const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn mat_exp(m: &CMatrix) -> CMatrix {
    assert!(m.is_square(), "mat_exp requires a square matrix");
    let n = m.rows();
    let norm = m.norm1();
    if norm == 0.0 {
        return CMatrix::identity(n);
    }
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil().max(0.0) as i32 } else { 0 };
    let a = m.scale_re(0.5f64.powi(s));

    let b = &PADE_13;
    let id = CMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &(&a6.scale_re(b[13]) + &a4.scale_re(b[11])) + &a2.scale_re(b[9]);
    let u_tail = &(&(&a6.scale_re(b[7]) + &a4.scale_re(b[5])) + &a2.scale_re(b[3])) + &id.scale_re(b[1]);
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale_re(b[12]) + &a4.scale_re(b[10])) + &a2.scale_re(b[8]);
    let v_tail = &(&(&a6.scale_re(b[6]) + &a4.scale_re(b[4])) + &a2.scale_re(b[2])) + &id.scale_re(b[0]);
    let v = &(&a6 * &v_inner) + &v_tail;

    let p = &v + &u;
    let q = &v - &u;
    // q is nonsingular for ||a||_1 <= THETA_13
    let mut r = Lu::new(&q).solve(&p).expect("Padé denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `(cos f, sin f, tan f)` with `tan f = sin f (cos f)^{-1}`.
#[derive(Debug, Clone)]
pub struct MatTrig {
    pub cos: CMatrix,
    pub sin: CMatrix,
    pub tan: CMatrix,
}

/// Cosine and sine only; never fails.
pub fn mat_cos_sin(f: &CMatrix) -> (CMatrix, CMatrix) {
    let i = Complex64::i();
    let ep = mat_exp(&f.scale(i));
    let em = mat_exp(&f.scale(-i));
    let cos = (&ep + &em).scale(c(0.5));
    let sin = (&ep - &em).scale(Complex64::new(0.0, -0.5));
    (cos, sin)
}

pub fn mat_trig(f: &CMatrix) -> Result<MatTrig> {
    let (cos, sin) = mat_cos_sin(f);
    let lu = Lu::new(&cos);
    if lu.check_nonsingular().is_err() {
        return Err(Error::SingularCosine);
    }
    // cos f and sin f commute, so cos^{-1} sin = sin cos^{-1}.
    let tan = lu.solve(&sin).map_err(|_| Error::SingularCosine)?;
    Ok(MatTrig { cos, sin, tan })
}
