//! Quadratic forms and Gaussian Weyl symbols on phase space `R^{2n}`, in the
//! coordinate order `(x_1..x_n, xi_1..xi_n)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, CMatrix, RMatrix, SymplecticStructure};

/// `q(Z) = 1/2 Z . H Z` with `H` complex symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    n: usize,
    hessian: CMatrix,
}

impl QuadraticForm {
    pub fn new(hessian: CMatrix) -> Result<Self> {
        if !hessian.is_square() || hessian.rows() % 2 != 0 || hessian.rows() == 0 {
            return Err(Error::InvalidInput(format!(
                "Hessian must be 2n x 2n, got {}x{}",
                hessian.rows(),
                hessian.cols()
            )));
        }
        if !hessian.is_finite() {
            return Err(Error::InvalidInput("Hessian has non-finite entries".into()));
        }
        let asym = hessian.asymmetry();
        if asym > TOL.complex_symmetry {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(QuadraticForm { n: hessian.rows() / 2, hessian: hessian.symmetrize() })
    }

    /// `e^{-i theta} xi^2 + e^{i theta} x^2`.
    pub fn davies(theta: f64) -> Self {
        let h = CMatrix::diag(&[Complex64::from_polar(2.0, theta), Complex64::from_polar(2.0, -theta)]);
        QuadraticForm { n: 1, hessian: h }
    }

    /// `a x^2 + 2 b x xi + c xi^2` in one dimension.
    pub fn from_coefficients(a: Complex64, b: Complex64, c: Complex64) -> Self {
        let h = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => a * 2.0,
            (1, 1) => c * 2.0,
            _ => b * 2.0,
        });
        QuadraticForm { n: 1, hessian: h }
    }

    /// `1/2 M (xi + i x) . (xi - i x)` for an `n x n` matrix `M`.
    pub fn supersymmetric(m: &CMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::InvalidInput("M must be a nonempty square matrix".into()));
        }
        let n = m.rows();
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // xi + i x = R Z and xi - i x = P Z
        let r = CMatrix::from_fn(n, 2 * n, |a, b| if b == a { i } else if b == a + n { one } else { Complex64::new(0.0, 0.0) });
        let p = CMatrix::from_fn(n, 2 * n, |a, b| if b == a { -i } else if b == a + n { one } else { Complex64::new(0.0, 0.0) });
        let g = &(&p.transpose() * m) * &r;
        QuadraticForm::new(g.symmetrize())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hessian(&self) -> &CMatrix {
        &self.hessian
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        QuadraticForm { n: self.n, hessian: self.hessian.scale(s) }
    }

    pub fn evaluate(&self, z: &[f64]) -> Complex64 {
        let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let hz = self.hessian.mul_vec(&zc);
        zc.iter().zip(&hz).map(|(a, b)| a * b).sum::<Complex64>() * 0.5
    }

    pub fn to_json(&self) -> QuadraticFormJson {
        QuadraticFormJson {
            n: self.n,
            hessian_re: rows_of(&self.hessian.re()),
            hessian_im: rows_of(&self.hessian.im()),
        }
    }
}

fn rows_of(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// On-disk form of a [`QuadraticForm`]: row-major real and imaginary parts of the Hessian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFormJson {
    pub n: usize,
    pub hessian_re: Vec<Vec<f64>>,
    #[serde(default)]
    pub hessian_im: Vec<Vec<f64>>,
}

impl TryFrom<QuadraticFormJson> for QuadraticForm {
    type Error = Error;

    fn try_from(j: QuadraticFormJson) -> Result<Self> {
        let re = RMatrix::from_rows(&j.hessian_re)?;
        let im = if j.hessian_im.is_empty() { RMatrix::zeros(re.rows(), re.cols()) } else { RMatrix::from_rows(&j.hessian_im)? };
        let q = QuadraticForm::new(CMatrix::from_parts(&re, &im)?)?;
        if q.n != j.n {
            return Err(Error::DimensionMismatch { expected: 2 * j.n, found: re.rows() });
        }
        Ok(q)
    }
}

/// `F = -1/2 J H`, the matrix with `q(Z) = sigma(Z, F Z)`.
pub fn fundamental_matrix(q: &QuadraticForm) -> CMatrix {
    let j: CMatrix = SymplecticStructure::new(q.n).matrix();
    (&j * &q.hessian).scale_re(-0.5)
}

/// `Re q` positive definite, judged relative to its largest eigenvalue.
pub fn is_elliptic(q: &QuadraticForm) -> bool {
    match sym_eig(&q.hessian.re()) {
        Ok(e) => e.max() > 0.0 && e.min() > TOL.ellipticity * e.max(),
        Err(_) => false,
    }
}

/// Harmonic-oscillator data of a real positive definite 1D form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorReduction {
    /// `sqrt(ac - b^2)`; the form is symplectically `sqrt_delta (x^2 + xi^2)`.
    pub sqrt_delta: f64,
    /// Ground state `e^{-gamma x^2 / 2}`; `Re gamma > 0`.
    pub gamma: Complex64,
}

/// For `q = a x^2 + 2 b x xi + c xi^2 > 0`: `q = (sqrt_delta / Re gamma) |xi - i gamma x|^2`.
pub fn ho_reduce_1d(q: &QuadraticForm) -> Result<OscillatorReduction> {
    if q.n != 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: q.hessian.rows() });
    }
    let h = &q.hessian;
    if h.im().max_abs() > TOL.complex_symmetry * h.max_abs() {
        return Err(Error::NotPositive);
    }
    let a = 0.5 * h[(0, 0)].re;
    let b = 0.5 * h[(0, 1)].re;
    let c = 0.5 * h[(1, 1)].re;
    let delta = a * c - b * b;
    if !(a > 0.0 && c > 0.0 && delta > TOL.positive_definite * (a * c)) {
        return Err(Error::NotPositive);
    }
    let sqrt_delta = delta.sqrt();
    Ok(OscillatorReduction { sqrt_delta, gamma: Complex64::new(sqrt_delta, b) / c })
}

/// `c exp(-1/2 Z . A Z)` with `A` complex symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSymbol {
    n: usize,
    prefactor: Complex64,
    exponent: CMatrix,
    integrable: bool,
    bounded: bool,
}

impl GaussianSymbol {
    pub fn new(prefactor: Complex64, exponent: CMatrix) -> Result<Self> {
        if !exponent.is_square() || exponent.rows() % 2 != 0 || exponent.rows() == 0 {
            return Err(Error::InvalidInput("exponent must be 2n x 2n".into()));
        }
        if !exponent.is_finite() || !prefactor.is_finite() {
            return Err(Error::InvalidInput("Gaussian symbol has non-finite entries".into()));
        }
        let asym = exponent.asymmetry();
        if asym > 1e-10 {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let exponent = exponent.symmetrize();
        let (integrable, bounded) = classify(&exponent)?;
        Ok(GaussianSymbol { n: exponent.rows() / 2, prefactor, exponent, integrable, bounded })
    }

    pub(crate) fn with_bounded(mut self, bounded: bool) -> Self {
        self.bounded = bounded;
        self.integrable &= bounded;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn exponent(&self) -> &CMatrix {
        &self.exponent
    }

    /// `Re A` positive definite.
    pub fn integrable(&self) -> bool {
        self.integrable
    }

    /// `Re A` positive semidefinite.
    pub fn bounded(&self) -> bool {
        self.bounded
    }

    pub fn evaluate(&self, z: &[f64]) -> Complex64 {
        let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let az = self.exponent.mul_vec(&zc);
        let quad: Complex64 = zc.iter().zip(&az).map(|(a, b)| a * b).sum();
        self.prefactor * (-0.5 * quad).exp()
    }

    /// Largest entrywise difference in prefactor and exponent, relative to `other`.
    pub fn distance(&self, other: &GaussianSymbol) -> f64 {
        let dc = (self.prefactor - other.prefactor).norm() / other.prefactor.norm().max(f64::MIN_POSITIVE);
        let da = (&self.exponent - &other.exponent).max_abs() / other.exponent.max_abs().max(1.0);
        dc.max(da)
    }
}

fn classify(a: &CMatrix) -> Result<(bool, bool)> {
    let e = sym_eig(&a.re())?;
    let scale = a.max_abs().max(e.max().abs());
    let integrable = e.min() > TOL.positive_definite * scale;
    let bounded = e.min() >= -TOL.positive_definite * scale;
    Ok((integrable, bounded))
}

/// Symbol of the adjoint operator: the complex conjugate symbol.
pub fn adjoint_symbol(g: &GaussianSymbol) -> GaussianSymbol {
    GaussianSymbol {
        n: g.n,
        prefactor: g.prefactor.conj(),
        exponent: g.exponent.conj(),
        integrable: g.integrable,
        bounded: g.bounded,
    }
}

/// Entries `(a b; c d)` of the inverse of a linear canonical map of `R^2`,
/// acting on Gaussian parameters `gamma` through a Mobius map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalMap2x2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl CanonicalMap2x2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidInput(format!("canonical map must have determinant 1, got {det}")));
        }
        Ok(CanonicalMap2x2 { a, b, c, d })
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = |x| Complex64::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        CanonicalMap2x2 { a: one, b: zero, c: zero, d: one }
    }

    /// The complex map `2^{-1/2} (1, i e^{i theta}; i e^{-i theta}, 1)` conjugating
    /// `q_theta` to `2 i x xi` under the Bargmann-type transform.
    pub fn bargmann(theta: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::i();
        CanonicalMap2x2 {
            a: Complex64::new(s, 0.0),
            b: i * Complex64::from_polar(s, theta),
            c: i * Complex64::from_polar(s, -theta),
            d: Complex64::new(s, 0.0),
        }
    }

    /// The map whose Mobius action is `L_self o L_other`.
    pub fn compose(&self, other: &CanonicalMap2x2) -> CanonicalMap2x2 {
        // (K1 K2)^{-1} = K2^{-1} K1^{-1}
        let (p, q) = (other, self);
        CanonicalMap2x2 {
            a: p.a * q.a + p.b * q.c,
            b: p.a * q.b + p.b * q.d,
            c: p.c * q.a + p.d * q.c,
            d: p.c * q.b + p.d * q.d,
        }
    }

    pub fn is_real(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.im == 0.0)
    }
}

/// `L(gamma) = (i c + gamma a) / (d - i gamma b)`.
pub fn mobius_transport(k: &CanonicalMap2x2, gamma: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let den = k.d - i * gamma * k.b;
    if den.norm() < TOL.pole {
        return Err(Error::PoleAtGamma { re: gamma.re, im: gamma.im });
    }
    Ok((i * k.c + gamma * k.a) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_form(rng: &mut ChaCha8Rng, n: usize) -> QuadraticForm {
        let g = CMatrix::from_fn(2 * n, 2 * n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        QuadraticForm::new((&g + &g.transpose()).scale_re(0.5)).unwrap()
    }

    fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..2 * n).map(|_| rng.gen_range(-2.0..2.0)).collect()
    }

    #[test]
    fn davies_hessian_coefficients() {
        let theta = 0.37;
        let q = QuadraticForm::davies(theta);
        let z = [0.8, -1.3];
        let expected = Complex64::from_polar(1.0, -theta) * 1.3 * 1.3 + Complex64::from_polar(1.0, theta) * 0.8 * 0.8;
        assert!((q.evaluate(&z) - expected).norm() < 1e-15);
        assert_eq!(q.hessian()[(0, 0)], Complex64::from_polar(2.0, theta));
        assert_eq!(q.hessian()[(1, 1)], Complex64::from_polar(2.0, -theta));
    }

    #[test]
    fn davies_fundamental_matrix() {
        let theta = 0.6;
        let f = fundamental_matrix(&QuadraticForm::davies(theta));
        let expected = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), Complex64::from_polar(1.0, -theta)],
            vec![-Complex64::from_polar(1.0, theta), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(f.approx_eq(&expected, 1e-15));
        assert!((&f * &f).approx_eq(&(-CMatrix::identity(2)), 1e-15));
    }

    #[test]
    fn fundamental_matrix_of_x_squared() {
        let q = QuadraticForm::from_coefficients(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let f = fundamental_matrix(&q);
        let expected = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(f.approx_eq(&expected, 0.0));
    }

    #[test]
    fn fundamental_matrix_of_half_oscillator() {
        let q = QuadraticForm::from_coefficients(c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0));
        let f = fundamental_matrix(&q);
        assert!((&f * &f).approx_eq(&CMatrix::identity(2).scale_re(-0.25), 1e-15));
        let s = SymplecticStructure::new(1);
        for z in [[1.0, 0.0], [0.3, -0.7], [2.0, 5.0]] {
            let zc: Vec<Complex64> = z.iter().map(|&x| c(x, 0.0)).collect();
            let fz = f.mul_vec(&zc);
            assert!((s.sigma(&zc, &fz) - q.evaluate(&z)).norm() < 1e-12);
        }
    }

    #[test]
    fn fundamental_matrix_polarizes_and_is_sigma_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            let q = random_form(&mut rng, n);
            let f = fundamental_matrix(&q);
            let s = SymplecticStructure::new(n);
            for _ in 0..10 {
                let z: Vec<Complex64> = random_real(&mut rng, n).into_iter().map(|x| c(x, 0.0)).collect();
                let w: Vec<Complex64> = random_real(&mut rng, n).into_iter().map(|x| c(x, 0.0)).collect();
                let zr: Vec<f64> = z.iter().map(|x| x.re).collect();
                let fz = f.mul_vec(&z);
                let fw = f.mul_vec(&w);
                assert!((s.sigma(&z, &fz) - q.evaluate(&zr)).norm() < 1e-12);
                assert!((s.sigma(&fz, &w) + s.sigma(&z, &fw)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ellipticity() {
        for theta in [0.0, 0.5, -1.2, 1.5] {
            assert!(is_elliptic(&QuadraticForm::davies(theta)));
        }
        let x2 = QuadraticForm::from_coefficients(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(!is_elliptic(&x2));
        let ix2 = QuadraticForm::from_coefficients(c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(!is_elliptic(&ix2));
    }

    #[test]
    fn oscillator_reduction_examples() {
        let r = ho_reduce_1d(&QuadraticForm::from_coefficients(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!((r.sqrt_delta, r.gamma), (1.0, c(1.0, 0.0)));
        let r = ho_reduce_1d(&QuadraticForm::from_coefficients(c(4.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!((r.sqrt_delta, r.gamma), (2.0, c(2.0, 0.0)));
        let q = QuadraticForm::from_coefficients(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0));
        let r = ho_reduce_1d(&q).unwrap();
        assert!((r.sqrt_delta - 1.0).abs() < 1e-15);
        assert!((r.gamma - c(0.5, 0.5)).norm() < 1e-15);
        // q = (sqrt_delta / Re gamma) |xi - i gamma x|^2 on probes
        for (x, xi) in [(1.0, 0.0), (0.3, -2.0), (-1.5, 0.7)] {
            let lhs = q.evaluate(&[x, xi]).re;
            let rhs = r.sqrt_delta / r.gamma.re * (c(xi, 0.0) - Complex64::i() * r.gamma * x).norm_sqr();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn oscillator_reduction_rejects_non_positive() {
        let q = QuadraticForm::from_coefficients(c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0));
        assert_eq!(ho_reduce_1d(&q), Err(Error::NotPositive));
        assert_eq!(ho_reduce_1d(&QuadraticForm::davies(0.3)), Err(Error::NotPositive));
    }

    #[test]
    fn adjoint_conjugates() {
        let real = GaussianSymbol::new(c(0.5, 0.0), CMatrix::identity(2)).unwrap();
        assert_eq!(adjoint_symbol(&real), real);
        let g = GaussianSymbol::new(c(0.5, 0.2), CMatrix::diag(&[c(1.0, 0.3), c(2.0, -0.4)])).unwrap();
        assert_eq!(adjoint_symbol(&adjoint_symbol(&g)), g);
        assert_eq!(adjoint_symbol(&g).prefactor(), c(0.5, -0.2));
    }

    #[test]
    fn symbol_flags() {
        let g = GaussianSymbol::new(c(1.0, 0.0), CMatrix::diag(&[c(0.0, 2.0), c(0.0, 2.0)])).unwrap();
        assert!(g.bounded() && !g.integrable());
        let g = GaussianSymbol::new(c(1.0, 0.0), CMatrix::diag(&[c(1.0, 2.0), c(-0.1, 2.0)])).unwrap();
        assert!(!g.bounded() && !g.integrable());
        let g = GaussianSymbol::new(c(1.0, 0.0), CMatrix::diag(&[c(1.0, 2.0), c(0.1, 2.0)])).unwrap();
        assert!(g.bounded() && g.integrable());
    }

    #[test]
    fn mobius_identity_and_cayley() {
        let g = c(0.7, -0.3);
        assert_eq!(mobius_transport(&CanonicalMap2x2::identity(), g).unwrap(), g);
        let k = CanonicalMap2x2::bargmann(0.0);
        for g in [c(1.0, 0.0), c(0.3, 2.0), c(5.0, -1.0)] {
            let l = mobius_transport(&k, g).unwrap();
            assert!((l - (g - 1.0) / (g + 1.0)).norm() < 1e-14);
            assert!(l.norm() < 1.0);
        }
        let det = k.a * k.d - k.b * k.c;
        assert!((det - 1.0).norm() < 1e-15);
    }

    #[test]
    fn mobius_pole() {
        let k = CanonicalMap2x2::real(1.0, 1.0, 0.0, 1.0).unwrap();
        // d - i gamma b = 1 - i gamma = 0 at gamma = -i
        assert!(matches!(mobius_transport(&k, c(0.0, -1.0)), Err(Error::PoleAtGamma { .. })));
    }

    fn random_real_map(rng: &mut ChaCha8Rng) -> CanonicalMap2x2 {
        loop {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(-2.0..2.0);
            if a.abs() < 0.2 {
                continue;
            }
            // d from ad - bc = 1
            let d = (1.0 + b * c) / a;
            return CanonicalMap2x2::real(a, b, c, d).unwrap();
        }
    }

    #[test]
    fn real_maps_preserve_right_half_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let k = random_real_map(&mut rng);
            let g = c(rng.gen_range(1e-3..5.0), rng.gen_range(-5.0..5.0));
            assert!(mobius_transport(&k, g).unwrap().re > 0.0);
        }
    }

    #[test]
    fn mobius_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let k1 = random_real_map(&mut rng);
            let k2 = random_real_map(&mut rng);
            let g = c(rng.gen_range(0.1..3.0), rng.gen_range(-3.0..3.0));
            let lhs = mobius_transport(&k1.compose(&k2), g).unwrap();
            let rhs = mobius_transport(&k1, mobius_transport(&k2, g).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn supersymmetric_identity_is_half_oscillator() {
        let q = QuadraticForm::supersymmetric(&CMatrix::identity(1)).unwrap();
        assert!(q.hessian().approx_eq(&CMatrix::identity(2), 1e-15));
        let _ = PI;
    }

    #[test]
    fn json_round_trip() {
        let q = QuadraticForm::davies(0.4);
        let s = serde_json::to_string(&q.to_json()).unwrap();
        let back: QuadraticFormJson = serde_json::from_str(&s).unwrap();
        assert_eq!(QuadraticForm::try_from(back).unwrap(), q);
        let bad = QuadraticFormJson { n: 2, hessian_re: vec![vec![1.0, 0.0], vec![0.0, 1.0]], hessian_im: vec![] };
        assert!(QuadraticForm::try_from(bad).is_err());
    }
}
