//! Hermite-function Galerkin truncations of Gaussian operators.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, sym_eig, CMatrix, RMatrix};
use crate::mehler::mehler_symbol;
use crate::symbols::{GaussianSymbol, QuadraticForm};

use super::kernel::{kernel_from_weyl, GaussianKernel};

/// Largest basis size per axis in one and two dimensions.
pub const MAX_BASIS_1D: usize = 128;
pub const MAX_BASIS_2D: usize = 40;

/// `h_0, ..., h_{count-1}` at `x`, the L^2-normalized Hermite functions.
pub fn hermite_functions(x: f64, count: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(count);
    if count == 0 {
        return h;
    }
    h.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if count > 1 {
        h.push(std::f64::consts::SQRT_2 * x * h[0]);
    }
    for k in 1..count.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Gauss-Hermite rule with `m` nodes, as `(nodes, weights)` for `int f(x) dx`
/// (the `e^{x^2}` factor folded into the weights).
pub fn gauss_hermite(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one node".into()));
    }
    let jacobi = RMatrix::from_fn(m, m, |i, j| if i + 1 == j || j + 1 == i { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
    let nodes = sym_eig(&jacobi)?.values;
    // Christoffel numbers: 1 / sum_k h_k(x)^2
    let weights = nodes.iter().map(|&x| 1.0 / hermite_functions(x, m).iter().map(|h| h * h).sum::<f64>()).collect();
    Ok((nodes, weights))
}

/// `Hw[i][k] = w_i h_k(x_i)`, row-major `m x basis`.
fn weighted_basis(nodes: &[f64], weights: &[f64], basis: usize) -> Vec<f64> {
    nodes.iter().zip(weights).flat_map(|(&x, &w)| hermite_functions(x, basis).into_iter().map(move |h| h * w)).collect()
}

/// Matrix `<h_j, K h_k>` in the tensor Hermite basis, `basis` functions per axis
/// (index `k_1 basis + k_2` in two dimensions).
pub fn galerkin_matrix(g: &GaussianSymbol, basis: usize) -> Result<CMatrix> {
    let k = kernel_from_weyl(g)?;
    match k.n() {
        1 => galerkin_1d(&k, basis),
        2 => galerkin_2d(&k, basis),
        n => Err(Error::InvalidInput(format!("Galerkin oracle supports n <= 2, got {n}"))),
    }
}

fn galerkin_1d(k: &GaussianKernel, basis: usize) -> Result<CMatrix> {
    if basis == 0 || basis > MAX_BASIS_1D {
        return Err(Error::InvalidInput(format!("basis size must be in 1..={MAX_BASIS_1D}")));
    }
    let m = 2 * basis;
    let (x, w) = gauss_hermite(m)?;
    let hw = weighted_basis(&x, &w, basis);
    let kmat = CMatrix::from_fn(m, m, |i, l| k.eval(&[x[i]], &[x[l]]));
    // X = K Hw, then M = Hw^T X
    let mut xk = vec![Complex64::new(0.0, 0.0); m * basis];
    for i in 0..m {
        for l in 0..m {
            let kv = kmat[(i, l)];
            for c in 0..basis {
                xk[i * basis + c] += kv * hw[l * basis + c];
            }
        }
    }
    let out = CMatrix::from_fn(basis, basis, |r, c| (0..m).map(|i| xk[i * basis + c] * hw[i * basis + r]).sum());
    if !out.is_finite() {
        return Err(Error::QuadratureOverflow("Galerkin matrix has non-finite entries".into()));
    }
    Ok(out)
}

fn galerkin_2d(k: &GaussianKernel, basis: usize) -> Result<CMatrix> {
    if basis == 0 || basis > MAX_BASIS_2D {
        return Err(Error::InvalidInput(format!("basis size must be in 1..={MAX_BASIS_2D} in two dimensions")));
    }
    let nb = basis;
    let m = 2 * basis;
    let (x, w) = gauss_hermite(m)?;
    let hw = weighted_basis(&x, &w, nb);
    let e = k.exponent();
    let p = k.prefactor();
    let quad = |e_aa: Complex64, e_ab: Complex64, e_bb: Complex64, u: f64, v: f64| (-0.5 * (e_aa * u * u + 2.0 * e_ab * u * v + e_bb * v * v)).exp();
    let fy: Vec<Complex64> = (0..m * m).map(|idx| quad(e[(2, 2)], e[(2, 3)], e[(3, 3)], x[idx / m], x[idx % m])).collect();
    let cross = |a: usize, b: usize| -> Vec<Complex64> { (0..m * m).map(|idx| (-e[(a, 2 + b)] * x[idx / m] * x[idx % m]).exp()).collect() };
    let (c00, c10, c01, c11) = (cross(0, 0), cross(1, 0), cross(0, 1), cross(1, 1));
    let zero = Complex64::new(0.0, 0.0);
    let nn = nb * nb;

    // U[i1][j2][k1 nb + k2] = sum_{i2, l1, l2} Hw(i2, j2) K(x_i1, x_i2, y_l1, y_l2) Hw(l1, k1) Hw(l2, k2)
    let slabs: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|i1| {
            let mut u = vec![zero; nb * nn];
            let mut bhw = vec![zero; m * nb];
            let mut xk = vec![zero; m * nb];
            let mut t = vec![zero; nn];
            for i2 in 0..m {
                let c0 = p * quad(e[(0, 0)], e[(0, 1)], e[(1, 1)], x[i1], x[i2]);
                for l2 in 0..m {
                    let b = c01[i1 * m + l2] * c11[i2 * m + l2];
                    for c in 0..nb {
                        bhw[l2 * nb + c] = b * hw[l2 * nb + c];
                    }
                }
                xk.iter_mut().for_each(|z| *z = zero);
                for l1 in 0..m {
                    let row = &mut xk[l1 * nb..(l1 + 1) * nb];
                    for l2 in 0..m {
                        let f = fy[l1 * m + l2];
                        for (o, v) in row.iter_mut().zip(&bhw[l2 * nb..(l2 + 1) * nb]) {
                            *o += f * v;
                        }
                    }
                }
                t.iter_mut().for_each(|z| *z = zero);
                for l1 in 0..m {
                    let a = c0 * c00[i1 * m + l1] * c10[i2 * m + l1];
                    let xrow = &xk[l1 * nb..(l1 + 1) * nb];
                    for k1 in 0..nb {
                        let coef = a * hw[l1 * nb + k1];
                        for (o, v) in t[k1 * nb..(k1 + 1) * nb].iter_mut().zip(xrow) {
                            *o += coef * v;
                        }
                    }
                }
                for j2 in 0..nb {
                    let h = hw[i2 * nb + j2];
                    for (o, v) in u[j2 * nn..(j2 + 1) * nn].iter_mut().zip(&t) {
                        *o += v * h;
                    }
                }
            }
            u
        })
        .collect();

    let rows: Vec<Vec<Complex64>> = (0..nb)
        .into_par_iter()
        .map(|j1| {
            let mut acc = vec![zero; nb * nn];
            for (i1, slab) in slabs.iter().enumerate() {
                let h = hw[i1 * nb + j1];
                for (o, v) in acc.iter_mut().zip(slab) {
                    *o += v * h;
                }
            }
            acc
        })
        .collect();
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    let out = CMatrix::from_vec(nn, nn, data)?;
    if !out.is_finite() {
        return Err(Error::QuadratureOverflow("Galerkin matrix has non-finite entries".into()));
    }
    Ok(out)
}

/// Spectral norm of the Galerkin truncation of `g^w`.
pub fn hermite_galerkin_norm_symbol(g: &GaussianSymbol, basis: usize) -> Result<f64> {
    spectral_norm(&galerkin_matrix(g, basis)?)
}

/// Spectral norm of the Galerkin truncation of `exp(-t q^w)`.
pub fn hermite_galerkin_norm(q: &QuadraticForm, t: f64, basis: usize) -> Result<f64> {
    hermite_galerkin_norm_symbol(&mehler_symbol(q, t)?, basis)
}
