use num_complex::Complex64;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::branch::inverse_sqrt_continued;
use crate::linalg::{determinant, inverse, sym_eig, top_singular_values, CMatrix, Lu};
use crate::linalg::norm::spectral_norm_with;
use crate::symbols::GaussianSymbol;

/// `K(x, y) = prefactor * exp(-1/2 (x, y).E(x, y))` on `R^n x R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    n: usize,
    prefactor: Complex64,
    exponent: CMatrix,
}

impl GaussianKernel {
    pub fn new(prefactor: Complex64, exponent: CMatrix) -> Result<Self> {
        if !exponent.is_square() || exponent.rows() % 2 != 0 || exponent.rows() == 0 {
            return Err(Error::InvalidInput("kernel exponent must be 2n x 2n".into()));
        }
        let n = exponent.rows() / 2;
        let k = GaussianKernel { n, prefactor, exponent: exponent.symmetrize() };
        for blk in [k.exponent.block(0, 0, n, n), k.exponent.block(n, n, n, n)] {
            if !re_positive_definite(&blk)? {
                return Err(Error::InvalidInput("kernel does not decay in each variable".into()));
            }
        }
        Ok(k)
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

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Complex64 {
        let v: Vec<f64> = x.iter().chain(y).copied().collect();
        let mut q = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                q += self.exponent[(i, j)] * (vi * vj);
            }
        }
        self.prefactor * (-0.5 * q).exp()
    }

    /// Kernel of the adjoint operator, `conj K(y, x)`.
    pub fn adjoint(&self) -> GaussianKernel {
        let n = self.n;
        let e = &self.exponent;
        let swapped = CMatrix::from_blocks(&e.block(n, n, n, n), &e.block(n, 0, n, n), &e.block(0, n, n, n), &e.block(0, 0, n, n));
        GaussianKernel { n, prefactor: self.prefactor.conj(), exponent: swapped.conj() }
    }

    /// Largest relative difference in prefactor and exponent entries.
    pub fn distance(&self, other: &GaussianKernel) -> f64 {
        let dc = (self.prefactor - other.prefactor).norm() / other.prefactor.norm().max(f64::MIN_POSITIVE);
        let de = (&self.exponent - &other.exponent).max_abs() / other.exponent.max_abs().max(1.0);
        dc.max(de)
    }
}

fn re_positive_definite(m: &CMatrix) -> Result<bool> {
    let e = sym_eig(&m.re().symmetrize())?;
    Ok(e.min() > TOL.positive_definite * e.max().abs().max(m.max_abs()))
}

/// `det(M)^{-1/2}` continued along `(1 - s) I + s M`, for `Re M` positive definite.
fn inv_sqrt_det(m: &CMatrix) -> Result<Complex64> {
    let id = CMatrix::identity(m.rows());
    let path = |s: f64| determinant(&(&id.scale_re(1.0 - s) + &m.scale_re(s)));
    inverse_sqrt_continued(&path, TOL.branch_steps)
}

/// Integral kernel of the Weyl quantization of `g`, with the `xi` integral done in closed form.
pub fn kernel_from_weyl(g: &GaussianSymbol) -> Result<GaussianKernel> {
    let n = g.n();
    let a = g.exponent();
    let a_xx = a.block(0, 0, n, n);
    let a_xix = a.block(n, 0, n, n);
    let p = a.block(n, n, n, n);
    if !re_positive_definite(&p)? {
        return Err(Error::NonIntegrableFiber);
    }
    // m = (x + y)/2 = S+ W, x - y = S- W; the xi integral leaves exp(1/2 v.P^{-1}v), v = G W
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let s_plus = CMatrix::from_fn(n, 2 * n, |i, j| if j % n == i { half } else { zero });
    let s_minus = CMatrix::from_fn(n, 2 * n, |i, j| if j == i { one } else if j == i + n { -one } else { zero });
    let g_mat = &s_minus.scale(Complex64::i()) - &(&a_xix * &s_plus);
    let p_inv = inverse(&p)?;
    let e = &(&(&s_plus.transpose() * &a_xx) * &s_plus) - &(&(&g_mat.transpose() * &p_inv) * &g_mat);
    let pref = g.prefactor() * (2.0 * std::f64::consts::PI).powf(-0.5 * n as f64) * inv_sqrt_det(&p)?;
    GaussianKernel::new(pref, e.symmetrize()).map_err(|_| Error::NonIntegrableFiber)
}

/// `(K1 K2)(x, y) = int K1(x, w) K2(w, y) dw` in closed form.
pub fn compose_kernels(k1: &GaussianKernel, k2: &GaussianKernel) -> Result<GaussianKernel> {
    if k1.n != k2.n {
        return Err(Error::DimensionMismatch { expected: 2 * k1.n, found: 2 * k2.n });
    }
    let n = k1.n;
    // variables ordered (x, y, w)
    let mut q = CMatrix::zeros(3 * n, 3 * n);
    let (e1, e2) = (&k1.exponent, &k2.exponent);
    let (x, y, w) = (0, n, 2 * n);
    let mut add = |r0: usize, c0: usize, blk: CMatrix| {
        for i in 0..n {
            for j in 0..n {
                let v = q[(r0 + i, c0 + j)] + blk[(i, j)];
                q[(r0 + i, c0 + j)] = v;
            }
        }
    };
    add(x, x, e1.block(0, 0, n, n));
    add(x, w, e1.block(0, n, n, n));
    add(w, x, e1.block(n, 0, n, n));
    add(w, w, e1.block(n, n, n, n));
    add(w, w, e2.block(0, 0, n, n));
    add(w, y, e2.block(0, n, n, n));
    add(y, w, e2.block(n, 0, n, n));
    add(y, y, e2.block(n, n, n, n));
    let q_oo = q.block(0, 0, 2 * n, 2 * n);
    let q_ow = q.block(0, 2 * n, 2 * n, n);
    let q_ww = q.block(2 * n, 2 * n, n, n);
    if !re_positive_definite(&q_ww)? {
        return Err(Error::NonIntegrableComposition);
    }
    let lu = Lu::new(&q_ww);
    lu.check_nonsingular().map_err(|_| Error::NonIntegrableComposition)?;
    let e = &q_oo - &(&q_ow * &lu.solve(&q_ow.transpose())?);
    let pref = k1.prefactor * k2.prefactor * (2.0 * std::f64::consts::PI).powf(0.5 * n as f64) * inv_sqrt_det(&q_ww)?;
    GaussianKernel::new(pref, e.symmetrize()).map_err(|_| Error::NonIntegrableComposition)
}

/// Largest total number of grid nodes for [`discretize_kernel`].
pub const MAX_SVD_POINTS: usize = 20_000;

/// Tensor trapezoid grid `[-half_width, half_width]^n` with `points` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdGrid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for SvdGrid {
    fn default() -> Self {
        SvdGrid { half_width: 8.0, points: 400 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub norm: f64,
    pub singular_values: Vec<f64>,
}

/// `sqrt(w) K sqrt(w)` sampled on the tensor grid.
pub fn discretize_kernel(k: &GaussianKernel, grid: SvdGrid) -> Result<CMatrix> {
    if grid.points < 2 || !(grid.half_width > 0.0) {
        return Err(Error::InvalidInput("grid needs at least two points and a positive width".into()));
    }
    let n = k.n;
    let m = grid.points;
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX);
    if total > MAX_SVD_POINTS {
        return Err(Error::GridGuard { points: total, limit: MAX_SVD_POINTS });
    }
    let h = 2.0 * grid.half_width / (m - 1) as f64;
    let nodes: Vec<f64> = (0..m).map(|i| -grid.half_width + h * i as f64).collect();
    let weights: Vec<f64> = (0..m).map(|i| if i == 0 || i == m - 1 { 0.5 * h } else { h }).collect();
    let point = |mut idx: usize| {
        let mut x = vec![0.0; n];
        let mut w = 1.0;
        for d in (0..n).rev() {
            x[d] = nodes[idx % m];
            w *= weights[idx % m];
            idx /= m;
        }
        (x, w.sqrt())
    };
    let pts: Vec<(Vec<f64>, f64)> = (0..total).map(point).collect();
    let mat = CMatrix::from_fn(total, total, |i, j| k.eval(&pts[i].0, &pts[j].0) * (pts[i].1 * pts[j].1));
    if !mat.is_finite() {
        return Err(Error::QuadratureOverflow("kernel samples are not finite".into()));
    }
    Ok(mat)
}

/// Top singular value and the leading `count` singular values of the discretized kernel.
pub fn kernel_svd_norm(k: &GaussianKernel, grid: SvdGrid, count: usize) -> Result<SvdResult> {
    let mat = discretize_kernel(k, grid)?;
    let norm = spectral_norm_with(&mat, 1e-14, 100_000)?;
    let singular_values = if count > 0 { top_singular_values(&mat, count, 1e-13, 100_000)? } else { vec![] };
    Ok(SvdResult { norm, singular_values })
}

/// [`kernel_svd_norm`] at `grid` and at twice the points; fails if the two differ by more than `tol` (relative).
pub fn kernel_svd_norm_checked(k: &GaussianKernel, grid: SvdGrid, count: usize, tol: f64) -> Result<SvdResult> {
    let coarse = kernel_svd_norm(k, grid, 0)?;
    let fine = kernel_svd_norm(k, SvdGrid { points: 2 * grid.points, ..grid }, count)?;
    let change = (fine.norm - coarse.norm).abs() / fine.norm.max(f64::MIN_POSITIVE);
    if change > tol {
        return Err(Error::GridTooCoarse { change });
    }
    Ok(fine)
}
