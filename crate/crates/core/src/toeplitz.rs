//! Symmetric Toeplitz matrices with a matrix-free fast multiply.
//!
//! The matrix generated by `x_0..x_{n-1}` embeds into a circulant of size
//! `2^k >= 2n - 1`, whose action is diagonal in the Fourier basis: one
//! forward transform of the padded vector, a pointwise product with the
//! cached circulant spectrum, one inverse transform, keep the first n
//! coordinates. Cost O(n log n) per product.

use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::coeffs::CoeffSeq;
use crate::dense::{symmetric_eigenvalues, SquareMatrix};
use crate::error::{Error, Result};

/// Default cap for the cubic-cost dense eigenvalue oracle.
pub const DEFAULT_DENSE_CAP: usize = 2048;

struct Embedding {
    len: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Symmetric Toeplitz matrix `[x_{|i-j|}]`, immutable after construction.
/// The circulant spectrum is computed lazily on first multiply and then
/// shared; concurrent read-only use is safe.
pub struct SymmetricToeplitz {
    coeffs: CoeffSeq,
    embedding: OnceLock<Embedding>,
}

impl SymmetricToeplitz {
    pub fn new(coeffs: CoeffSeq) -> Self {
        SymmetricToeplitz {
            coeffs,
            embedding: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    /// Embedding size: least power of two at least `2n - 1`.
    pub fn embedding_len(&self) -> usize {
        (2 * self.dim() - 1).next_power_of_two()
    }

    fn embedding(&self) -> &Embedding {
        self.embedding.get_or_init(|| {
            let len = self.embedding_len();
            let x = self.coeffs.entries();
            // First circulant row: x_0..x_{n-1}, zero padding, x_{n-1}..x_1.
            let mut row = vec![Complex::new(0.0, 0.0); len];
            for (i, &v) in x.iter().enumerate() {
                row[i].re = v;
                if i > 0 {
                    row[len - i].re = v;
                }
            }
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            forward.process(&mut row);
            Embedding {
                len,
                spectrum: row,
                forward,
                inverse,
            }
        })
    }

    /// Complex spectrum of the circulant embedding (length `embedding_len`).
    pub fn embedded_spectrum(&self) -> &[Complex<f64>] {
        &self.embedding().spectrum
    }

    /// Fast product `T v` via the circulant embedding.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let emb = self.embedding();
        let mut buf = vec![Complex::new(0.0, 0.0); emb.len];
        for (slot, &x) in buf.iter_mut().zip(v) {
            slot.re = x;
        }
        emb.forward.process(&mut buf);
        for (slot, s) in buf.iter_mut().zip(&emb.spectrum) {
            *slot *= s;
        }
        emb.inverse.process(&mut buf);
        let scale = 1.0 / emb.len as f64;
        Ok(buf[..n].iter().map(|c| c.re * scale).collect())
    }

    /// Reference O(n^2) product, the oracle the fast path is tested against.
    pub fn matvec_dense(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let x = self.coeffs.entries();
        let mut out = vec![0.0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (0..n).map(|j| x[i.abs_diff(j)] * v[j]).sum();
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> SquareMatrix {
        let x = self.coeffs.entries();
        SquareMatrix::from_fn(self.dim(), |i, j| x[i.abs_diff(j)])
    }

    /// Norm upper bound from the triangle inequality over the shift-basis
    /// expansion: `|x_0| + sum_i ||A_i|| |x_i|`.
    pub fn triangle_upper_bound(&self) -> f64 {
        let n = self.dim();
        self.coeffs
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &x)| a_basis_norm(n, i).expect("index in range") * x.abs())
            .sum()
    }

    /// Exact operator norm via the dense rotation eigensolver. Refused above
    /// `DEFAULT_DENSE_CAP`; see [`operator_norm_dense_capped`] for a custom cap.
    ///
    /// [`operator_norm_dense_capped`]: SymmetricToeplitz::operator_norm_dense_capped
    pub fn operator_norm_dense(&self) -> Result<NormEstimate> {
        self.operator_norm_dense_capped(DEFAULT_DENSE_CAP)
    }

    pub fn operator_norm_dense_capped(&self, cap: usize) -> Result<NormEstimate> {
        let n = self.dim();
        if n > cap {
            return Err(Error::DenseCapExceeded { n, cap });
        }
        let (eigs, sweeps) = symmetric_eigenvalues(&self.to_dense());
        let value = eigs
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()));
        Ok(NormEstimate {
            value,
            rayleigh_lower: value,
            upper_cert: self.triangle_upper_bound(),
            iterations: sweeps,
            converged: true,
            residual: 0.0,
            start_seed: 0,
        })
    }
}

/// Operator-norm value together with its certificates and convergence
/// metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    /// Best estimate of the operator norm.
    pub value: f64,
    /// Certified lower bound: |Rayleigh quotient| of an explicitly computed
    /// unit vector.
    pub rayleigh_lower: f64,
    /// Certified upper bound from the triangle inequality.
    pub upper_cert: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `||T v - theta v||` at the returned Ritz pair (0 for the dense path).
    pub residual: f64,
    /// Seed of the start vector, recorded for reproducibility.
    pub start_seed: u64,
}

/// Exact operator norm of the 0/1 shift-basis matrix `[1{|j-l| = i}]` of
/// dimension n.
///
/// The matrix is the adjacency matrix of a disjoint union of i paths (one
/// per residue class mod i); its norm is that of the longest path, with
/// `L = ceil(n / i)` vertices: `2 cos(pi / (L + 1))`. For i = 0 it is the
/// identity.
pub fn a_basis_norm(n: usize, i: usize) -> Result<f64> {
    if n == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if i == 0 {
        return Ok(1.0);
    }
    let longest = n.div_ceil(i);
    Ok(2.0 * (std::f64::consts::PI / (longest as f64 + 1.0)).cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SeedStream;
    use approx::assert_abs_diff_eq;

    fn seq(values: &[f64]) -> CoeffSeq {
        CoeffSeq::new(values.to_vec()).unwrap()
    }

    #[test]
    fn materialization_matches_definition() {
        let t = SymmetricToeplitz::new(seq(&[1.0, 2.0]));
        let d = t.to_dense();
        assert_eq!(d.get(0, 0), 1.0);
        assert_eq!(d.get(0, 1), 2.0);
        assert_eq!(d.get(1, 0), 2.0);
        assert_eq!(d.get(1, 1), 1.0);

        let id = SymmetricToeplitz::new(seq(&[1.0, 0.0, 0.0]));
        let d = id.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }

        let path = SymmetricToeplitz::new(seq(&[0.0, 1.0, 0.0]));
        let d = path.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn embedding_is_power_of_two_and_big_enough() {
        for n in [1usize, 2, 3, 5, 17, 100] {
            let t = SymmetricToeplitz::new(seq(&vec![1.0; n]));
            let len = t.embedding_len();
            assert!(len.is_power_of_two());
            assert!(len >= 2 * n - 1);
            assert_eq!(t.embedded_spectrum().len(), len);
        }
    }

    #[test]
    fn matvec_small_cases() {
        let t = SymmetricToeplitz::new(seq(&[1.0, 2.0]));
        let out = t.matvec(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(out[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1], 2.0, epsilon = 1e-12);

        let id = SymmetricToeplitz::new(seq(&[1.0, 0.0, 0.0]));
        let out = id.matvec(&[3.0, -1.0, 0.5]).unwrap();
        assert_abs_diff_eq!(out[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[2], 0.5, epsilon = 1e-12);

        let swap = SymmetricToeplitz::new(seq(&[0.0, 1.0]));
        let out = swap.matvec(&[1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(out[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let t = SymmetricToeplitz::new(seq(&[1.0, 2.0]));
        assert!(t.matvec(&[1.0]).is_err());
        assert!(t.matvec_dense(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn fast_matvec_agrees_with_dense() {
        let mut s = SeedStream::new(11);
        for n in [1usize, 2, 3, 8, 31, 64, 129] {
            let x: Vec<f64> = (0..n).map(|_| 2.0 * s.next_f64() - 1.0).collect();
            let v: Vec<f64> = (0..n).map(|_| 2.0 * s.next_f64() - 1.0).collect();
            let t = SymmetricToeplitz::new(seq(&x));
            let fast = t.matvec(&v).unwrap();
            let slow = t.matvec_dense(&v).unwrap();
            let x_l1: f64 = x.iter().map(|a| a.abs()).sum();
            let v_inf = v.iter().fold(0.0f64, |m, &a| m.max(a.abs()));
            let scale = (x_l1 * v_inf).max(f64::MIN_POSITIVE);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-10 * scale, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dense_norm_examples() {
        let t = SymmetricToeplitz::new(seq(&[1.0, 2.0]));
        let est = t.operator_norm_dense().unwrap();
        assert_abs_diff_eq!(est.value, 3.0, epsilon = 1e-11);
        assert!(est.converged);

        let ones = SymmetricToeplitz::new(seq(&[1.0; 5]));
        assert_abs_diff_eq!(
            ones.operator_norm_dense().unwrap().value,
            5.0,
            epsilon = 1e-11
        );

        let path = SymmetricToeplitz::new(seq(&[0.0, 1.0, 0.0]));
        assert_abs_diff_eq!(
            path.operator_norm_dense().unwrap().value,
            std::f64::consts::SQRT_2,
            epsilon = 1e-11
        );
    }

    #[test]
    fn dense_norm_respects_cap() {
        let t = SymmetricToeplitz::new(seq(&[1.0, 0.0, 0.0]));
        assert!(matches!(
            t.operator_norm_dense_capped(2),
            Err(Error::DenseCapExceeded { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn basis_norm_examples() {
        assert_abs_diff_eq!(a_basis_norm(5, 0).unwrap(), 1.0);
        // Two disjoint edges: 2 cos(pi/3) = 1.
        assert_abs_diff_eq!(a_basis_norm(4, 2).unwrap(), 1.0, epsilon = 1e-14);
        // 3-path.
        assert_abs_diff_eq!(
            a_basis_norm(3, 1).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-14
        );
        assert!(a_basis_norm(4, 4).is_err());
        assert!(a_basis_norm(0, 0).is_err());
    }

    #[test]
    fn basis_norm_matches_dense_oracle() {
        for n in 1..=64usize {
            for i in 0..n {
                let dense = SquareMatrix::from_fn(n, |j, l| {
                    if j.abs_diff(l) == i && (i > 0 || j == l) {
                        1.0
                    } else {
                        0.0
                    }
                });
                let (eigs, _) = symmetric_eigenvalues(&dense);
                let oracle = eigs.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
                let formula = a_basis_norm(n, i).unwrap();
                assert!(
                    (formula - oracle).abs() <= 1e-10,
                    "n={n} i={i}: formula {formula} oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn triangle_bound_dominates_dense_norm() {
        let mut s = SeedStream::new(5);
        for n in [2usize, 5, 16, 40] {
            let x: Vec<f64> = (0..n).map(|_| 2.0 * s.next_f64() - 1.0).collect();
            let t = SymmetricToeplitz::new(seq(&x));
            let norm = t.operator_norm_dense().unwrap().value;
            let tri = t.triangle_upper_bound();
            let crude: f64 =
                x[0].abs() + 2.0 * x[1..].iter().map(|a| a.abs()).sum::<f64>();
            assert!(norm <= tri + 1e-10 * norm.max(1.0));
            assert!(tri <= crude + 1e-12);
        }
    }
}
