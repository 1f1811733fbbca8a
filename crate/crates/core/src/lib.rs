//! Matrix-free numerical laboratory core for random symmetric Toeplitz
//! matrices: exact and fast linear algebra, certified symbol bounds, seeded
//! ensembles, and tail-bound evaluators.
//!
//! The crate is organized as
//! - [`coeffs`], [`toeplitz`], [`hankel`], [`dense`], [`lanczos`]: matrix
//!   construction, the circulant-embedding fast multiply, the dense
//!   eigenvalue oracle, and the Krylov norm estimator;
//! - [`symbol`]: certified sup-norm evaluation of the two symbols that
//!   sandwich the operator norm, plus chaining-type quantities;
//! - [`ensemble`]: deterministic counter-seeded coefficient generators,
//!   truncation rules, empirical exponential-moment norms;
//! - [`bounds`], [`tail`]: closed-form tail bounds and their comparison
//!   against empirical survival curves with exact binomial envelopes;
//! - [`seed`]: the avalanche mixing underlying all reproducibility claims.

pub mod bounds;
pub mod coeffs;
pub mod dense;
pub mod error;
pub mod ensemble;
pub mod hankel;
pub mod lanczos;
pub mod seed;
pub mod symbol;
pub mod tail;
pub mod toeplitz;

pub use coeffs::{CoeffSeq, HankelSeq};
pub use error::{Error, Result};
pub use toeplitz::{NormEstimate, SymmetricToeplitz};
