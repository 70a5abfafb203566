use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::TOL;
use crate::error::{Error, Result};

use super::matrix::CMatrix;

/// Row count above which matrix-vector products are split across threads.
const PARALLEL_ROWS: usize = 256;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `m v`, threaded for large matrices.
pub fn apply(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    if m.rows() < PARALLEL_ROWS {
        return m.mul_vec(v);
    }
    (0..m.rows())
        .into_par_iter()
        .map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `m^H u`, threaded for large matrices.
pub fn apply_adjoint(m: &CMatrix, u: &[Complex64]) -> Vec<Complex64> {
    if m.rows() < PARALLEL_ROWS {
        return m.adjoint_mul_vec(u);
    }
    let cols = m.cols();
    let chunk = (m.rows() / rayon::current_num_threads().max(1)).max(64);
    let row_blocks: Vec<(usize, usize)> =
        (0..m.rows()).step_by(chunk).map(|s| (s, (s + chunk).min(m.rows()))).collect();
    row_blocks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = vec![Complex64::new(0.0, 0.0); cols];
            for (i, &ui) in u.iter().enumerate().take(hi).skip(lo) {
                for (o, a) in acc.iter_mut().zip(m.row(i)) {
                    *o += a.conj() * ui;
                }
            }
            acc
        })
        .reduce(
            || vec![Complex64::new(0.0, 0.0); cols],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Deterministic start vector with no special alignment to any basis.
fn start_vector(n: usize, salt: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let x = (k + 1 + 17 * salt) as f64;
            Complex64::new(1.0 + 0.31 * (0.7 * x).sin(), 0.23 * (1.3 * x).cos())
        })
        .collect()
}

/// Largest singular value by power iteration on `m^H m` with the default tolerances.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    spectral_norm_with(m, TOL.power_iteration, TOL.power_iteration_cap)
}

/// Power iteration stopping once the Rayleigh quotient of `m^H m` changes by less
/// than `rel_tol` (relative) between steps.
pub fn spectral_norm_with(m: &CMatrix, rel_tol: f64, cap: usize) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 || m.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let mut v = start_vector(m.cols(), 0);
    let nv = norm2(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut lambda = 0.0;
    for _ in 0..cap {
        let w = apply(m, &v);
        let next = w.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let mut u = apply_adjoint(m, &w);
        let nu = norm2(&u);
        if nu == 0.0 {
            return Ok(0.0);
        }
        u.iter_mut().for_each(|z| *z /= nu);
        v = u;
        if (next - lambda).abs() <= rel_tol * next {
            return Ok(next.max(lambda).sqrt());
        }
        lambda = next;
    }
    Err(Error::NoConvergence { iterations: cap, estimate: lambda.sqrt() })
}

/// Leading `k` singular values by orthogonal (block power) iteration on `m^H m`,
/// each new direction deflated against the previous ones by Gram-Schmidt.
pub fn top_singular_values(m: &CMatrix, k: usize, rel_tol: f64, cap: usize) -> Result<Vec<f64>> {
    let n = m.cols();
    let k = k.min(n);
    if k == 0 {
        return Ok(vec![]);
    }
    // two guard vectors speed up convergence of the last requested value
    let block = (k + 2).min(n);
    let mut basis: Vec<Vec<Complex64>> = (0..block).map(|j| start_vector(n, j + 1)).collect();
    orthonormalize(&mut basis);
    let mut prev = vec![0.0; block];
    for _ in 0..cap {
        let mut next_basis: Vec<Vec<Complex64>> =
            basis.iter().map(|v| apply_adjoint(m, &apply(m, v))).collect();
        let rayleigh: Vec<f64> = basis.iter().zip(&next_basis).map(|(v, w)| dot(v, w).re).collect();
        orthonormalize(&mut next_basis);
        basis = next_basis;
        // rounding noise in a Rayleigh quotient scales with the largest eigenvalue
        let floor = 64.0 * f64::EPSILON * rayleigh[0].abs();
        let converged = rayleigh
            .iter()
            .zip(&prev)
            .take(k)
            .all(|(r, p)| (r - p).abs() <= rel_tol * r.abs() + floor);
        prev = rayleigh;
        if converged {
            return Ok(prev.iter().take(k).map(|x| x.max(0.0).sqrt()).collect());
        }
    }
    Err(Error::NoConvergence { iterations: cap, estimate: prev[0].max(0.0).sqrt() })
}

fn orthonormalize(vs: &mut [Vec<Complex64>]) {
    for j in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(j);
        let v = &mut rest[0];
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in done.iter() {
                let p = dot(u, v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= p * y;
                }
            }
        }
        let nv = norm2(v);
        if nv > 0.0 {
            v.iter_mut().for_each(|z| *z /= nv);
        }
    }
}

/// Largest singular value as the square root of the top eigenvalue of the
/// Hermitian matrix `m^H m`, via its real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`. Dense and O(n^3); meant for small matrices.
pub fn spectral_norm_dense(m: &CMatrix) -> Result<f64> {
    let h = &m.adjoint() * m;
    let n = h.rows();
    let re = h.re();
    let im = h.im();
    let emb = super::RMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => re[(i, j)],
        (true, false) => -im[(i, j - n)],
        (false, true) => im[(i - n, j)],
        (false, false) => re[(i - n, j - n)],
    });
    let eig = super::eigen::sym_eig(&emb.symmetrize())?;
    Ok(eig.max().max(0.0).sqrt())
}
