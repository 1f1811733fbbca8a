//! Coefficient sequences generating symmetric Toeplitz and Hankel matrices.

use crate::error::{Error, Result};

/// Finite real sequence `x_0..x_{n-1}` generating the n-by-n symmetric
/// Toeplitz matrix with entries `x_{|i-j|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    entries: Vec<f64>,
}

impl CoeffSeq {
    /// Validates and wraps a coefficient sequence. Rejects empty input and
    /// non-finite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { index, value });
            }
        }
        Ok(CoeffSeq { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// The length-m prefix, itself a valid sequence. Used by nested-matrix
    /// experiments.
    pub fn prefix(&self, m: usize) -> Result<CoeffSeq> {
        if m == 0 || m > self.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                n: self.len(),
            });
        }
        Ok(CoeffSeq {
            entries: self.entries[..m].to_vec(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<CoeffSeq> {
        CoeffSeq::new(self.entries.iter().map(|x| factor * x).collect())
    }
}

/// Anti-diagonal generator `y_1..y_{2n-1}` of an n-by-n Hankel matrix with
/// entries `H[j][k] = y_{j+k-1}` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSeq {
    entries: Vec<f64>,
    n: usize,
}

impl HankelSeq {
    /// Requires an odd number `2n - 1` of finite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySequence);
        }
        if entries.len() % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "Hankel generator needs 2n-1 entries, got {}",
                entries.len()
            )));
        }
        for (index, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { index, value });
            }
        }
        let n = (entries.len() + 1) / 2;
        Ok(HankelSeq { entries, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}
