//! Hankel matrices and the row-reversal link to Toeplitz form.
//!
//! Reversing the rows of a Hankel matrix yields a (generally nonsymmetric)
//! Toeplitz matrix with the same singular values: the reversal is a
//! permutation, hence orthogonal. `hankel_toeplitz_singular_check` verifies
//! that identity numerically through two independent eigenvalue routes.

use crate::coeffs::HankelSeq;
use crate::dense::{singular_values, symmetric_eigenvalues, SquareMatrix};
use crate::error::{Error, Result};
use crate::toeplitz::DEFAULT_DENSE_CAP;

/// Materializes the Hankel matrix `H[j][k] = y_{j+k-1}` (1-based indexing of
/// the generator).
pub fn hankel_from_seq(y: &HankelSeq) -> SquareMatrix {
    let e = y.entries();
    SquareMatrix::from_fn(y.dim(), |j, k| e[j + k])
}

/// Comparison of the singular values of a Hankel matrix against those of its
/// row-reversed Toeplitz companion.
#[derive(Debug, Clone)]
pub struct HankelToeplitzReport {
    /// Singular values of H, descending (|eigenvalues|: H is symmetric).
    pub hankel_svals: Vec<f64>,
    /// Singular values of the row-reversed matrix, descending (Gram route).
    pub reversed_svals: Vec<f64>,
    /// Largest absolute difference between the two sorted lists.
    pub max_abs_gap: f64,
}

/// Computes both singular-value lists by different routes and reports the
/// largest gap. Contract: gap at most `1e-9` times the spectral scale.
pub fn hankel_toeplitz_singular_check(y: &HankelSeq) -> Result<HankelToeplitzReport> {
    hankel_toeplitz_singular_check_capped(y, DEFAULT_DENSE_CAP)
}

pub fn hankel_toeplitz_singular_check_capped(
    y: &HankelSeq,
    cap: usize,
) -> Result<HankelToeplitzReport> {
    let n = y.dim();
    if n > cap {
        return Err(Error::DenseCapExceeded { n, cap });
    }
    let h = hankel_from_seq(y);
    // Route one: H is symmetric, so its singular values are |eigenvalues|.
    let (eigs, _) = symmetric_eigenvalues(&h);
    let mut hankel_svals: Vec<f64> = eigs.into_iter().map(f64::abs).collect();
    hankel_svals.sort_by(|a, b| f64::total_cmp(b, a));
    // Route two: Gram-matrix singular values of the reversed-row Toeplitz.
    let reversed_svals = singular_values(&h.reversed_rows());
    let max_abs_gap = hankel_svals
        .iter()
        .zip(&reversed_svals)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(HankelToeplitzReport {
        hankel_svals,
        reversed_svals,
        max_abs_gap,
    })
}
