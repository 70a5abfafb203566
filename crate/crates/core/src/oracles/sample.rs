//! Random test objects shared by the verifier and the test suites.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{CMatrix, RMatrix};
use crate::symbols::{GaussianSymbol, QuadraticForm};

/// Integrable Gaussian on `R^{2n}` with `Re A >= 0.2 I` and a random complex prefactor.
pub fn random_integrable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GaussianSymbol {
    let m = 2 * n;
    let g = RMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.6..0.6));
    let re = &(&g.transpose() * &g) + &RMatrix::identity(m).scale(rng.gen_range(0.2..1.5));
    let h = RMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.8..0.8));
    let im = (&h + &h.transpose()).scale(0.5);
    let pre = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0));
    GaussianSymbol::new(pre, CMatrix::from_parts(&re, &im).unwrap()).unwrap()
}

/// Elliptic form on `R^{2n}` with every variable coupled to every other.
/// `Re H` has eigenvalues in roughly `[1, 2.5]` and `|Im H| <= 0.4` entrywise.
pub fn random_elliptic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuadraticForm {
    let m = 2 * n;
    let g = RMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.35..0.35));
    let re = &(&g.transpose() * &g) + &RMatrix::identity(m).scale(rng.gen_range(1.0..1.5));
    let h = RMatrix::from_fn(m, m, |_, _| rng.gen_range(-0.4..0.4));
    let im = (&h + &h.transpose()).scale(0.5);
    QuadraticForm::new(CMatrix::from_parts(&re, &im).unwrap()).unwrap()
}
