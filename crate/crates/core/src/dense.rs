//! Dense oracles: a deterministic rotation-based symmetric eigensolver and
//! helpers built on it. All cubic-cost paths live here, gated by the caller's
//! dimension cap.

use crate::error::{Error, Result};
use crate::seed::SeedStream;

/// Row-major square matrix, just enough structure for the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    /// Rows in reverse order; turns a Hankel matrix into a Toeplitz one.
    pub fn reversed_rows(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.n, |i, j| self.get(self.n - 1 - i, j))
    }

    /// `A^T A`, the Gram matrix.
    pub fn gram(&self) -> SquareMatrix {
        let n = self.n;
        SquareMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum())
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let v = self.data[i * self.n + j];
                    s += v * v;
                }
            }
        }
        s.sqrt()
    }
}

const MAX_JACOBI_SWEEPS: usize = 64;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// Fully deterministic: fixed rotation order, no randomized pivoting, so
/// repeated runs on equal input give identical bits. Off-diagonal mass is
/// driven below `1e-14` of the Frobenius norm, which by Weyl's inequality
/// bounds each eigenvalue error by the same amount.
///
/// Returns the eigenvalues and the number of sweeps performed.
pub fn symmetric_eigenvalues(a: &SquareMatrix) -> (Vec<f64>, usize) {
    let n = a.dim();
    let mut a = a.clone();
    if n == 1 {
        return (vec![a.get(0, 0)], 0);
    }
    let scale = a.frobenius().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    while sweeps < MAX_JACOBI_SWEEPS {
        if a.off_diagonal_frobenius() <= 1e-14 * scale {
            break;
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                if apq.abs() <= f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
                    a.set(p, q, 0.0);
                    a.set(q, p, 0.0);
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a.set(r, p, new_rp);
                    a.set(p, r, new_rp);
                    a.set(r, q, new_rq);
                    a.set(q, r, new_rq);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigs.sort_by(f64::total_cmp);
    (eigs, sweeps)
}

/// Singular values (descending) of a general square matrix, via the
/// eigenvalues of its Gram matrix.
pub fn singular_values(a: &SquareMatrix) -> Vec<f64> {
    let (eigs, _) = symmetric_eigenvalues(&a.gram());
    let mut svals: Vec<f64> = eigs.into_iter().map(|l| l.max(0.0).sqrt()).collect();
    svals.sort_by(|x, y| f64::total_cmp(y, x));
    svals
}

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix by the implicit
/// QL iteration with shifts. `off[i]` couples rows i and i+1.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length must be n-1");
    if n == 0 {
        return vec![];
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                break; // diagonal already carries the best available values
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / denom;
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// Eigenvector for a computed eigenvalue of a symmetric tridiagonal matrix,
/// by inverse iteration.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    // Slight shift keeps the system solvable when lambda is exact.
    let shift = lambda + scale * 1e-14;
    let mut stream = SeedStream::new(0xE16E);
    let mut x: Vec<f64> = (0..n).map(|_| stream.next_f64() - 0.5).collect();
    normalize(&mut x);
    for _ in 0..3 {
        x = solve_shifted_tridiagonal(diag, off, shift, &x);
        normalize(&mut x);
    }
    x
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        for v in x.iter_mut() {
            *v /= norm;
        }
    } else {
        for v in x.iter_mut() {
            *v = 0.0;
        }
        x[0] = 1.0;
    }
}

/// Solves `(T - shift I) y = b` for tridiagonal T by banded elimination with
/// partial pivoting (one extra super-diagonal of fill-in).
fn solve_shifted_tridiagonal(diag: &[f64], off: &[f64], shift: f64, rhs_in: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut main: Vec<f64> = diag.iter().map(|&v| v - shift).collect();
    let mut sup1 = off.to_vec();
    sup1.push(0.0);
    let mut sup2 = vec![0.0; n];
    let mut rhs = rhs_in.to_vec();
    // lower[i] = entry (i+1, i); consumed once at step i.
    let lower = off;
    for i in 0..n - 1 {
        let mut below = lower[i];
        if below.abs() > main[i].abs() {
            // Swap rows i and i+1; row i+1's band is (below, main[i+1], sup1[i+1]).
            let (bi, ci, di) = (main[i], sup1[i], sup2[i]);
            main[i] = below;
            sup1[i] = main[i + 1];
            sup2[i] = sup1[i + 1];
            // Old row i becomes the row to eliminate: (bi, ci, di).
            main[i + 1] = ci;
            sup1[i + 1] = di;
            below = bi;
            rhs.swap(i, i + 1);
        }
        if main[i] == 0.0 {
            main[i] = tiny;
        }
        let factor = below / main[i];
        main[i + 1] -= factor * sup1[i];
        sup1[i + 1] -= factor * sup2[i];
        rhs[i + 1] -= factor * rhs[i];
    }
    if main[n - 1] == 0.0 {
        main[n - 1] = tiny;
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= sup1[i] * y[i + 1];
        }
        if i + 2 < n {
            acc -= sup2[i] * y[i + 2];
        }
        y[i] = acc / main[i];
    }
    y
}
