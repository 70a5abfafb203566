use crate::error::{Error, Result};

use super::eigen::{sqrt_spd, sym_eig};
use super::lu::determinant;
use super::matrix::{RMatrix, SymplecticStructure};

/// Symplectic eigenvalues `s_1 <= ... <= s_n` of a real symmetric positive
/// definite `2n x 2n` matrix `b`, i.e. `Spec(J b) = {+-i s_j}`.
///
/// Uses `K = b^{1/2} J b^{1/2}`, which is real skew-symmetric with the same
/// spectrum as `J b`; the eigenvalues of `K^T K` are the `s_j^2`, each twice.
pub fn symplectic_eigenvalues(b: &RMatrix) -> Result<Vec<f64>> {
    if !b.is_square() || b.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: 2 * (b.rows() / 2).max(1), found: b.cols() });
    }
    let n = b.rows() / 2;
    let root = sqrt_spd(b)?;
    let j: RMatrix = SymplecticStructure::new(n).matrix();
    let k = &(&root * &j) * &root;
    let ktk = (&k.transpose() * &k).symmetrize();
    let eig = sym_eig(&ktk)?;
    let mut s: Vec<f64> = eig.values.chunks(2).map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt()).collect();
    s.sort_by(f64::total_cmp);

    let det_b = determinant(b);
    let prod: f64 = s.iter().map(|x| x * x).product();
    if (prod - det_b).abs() > 1e-9 * det_b.abs() {
        return Err(Error::InternalContractViolation(format!(
            "product of squared symplectic eigenvalues {prod} differs from det b = {det_b}"
        )));
    }
    Ok(s)
}
