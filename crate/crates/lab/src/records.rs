//! Per-sample run records and their CSV rendering.

use serde::Serialize;
use toeplab_core::seed::mix3;

/// Fixed CSV schema shared by every experiment.
pub const CSV_HEADER: &str =
    "experiment,ensemble,n,sample_index,seed,norm,sup_fejer,sup_laurent,ratio_sqrt_nlogn,elapsed_ms";

/// One measured sample. Fields not meaningful for an experiment stay empty
/// in the CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub experiment: &'static str,
    pub ensemble: String,
    pub n: usize,
    pub sample_index: u64,
    pub seed: u64,
    pub norm: f64,
    pub sup_fejer: Option<f64>,
    pub sup_laurent: Option<f64>,
    pub ratio_sqrt_nlogn: f64,
    /// Whether the norm estimate converged; non-converged rows are kept in
    /// the CSV but excluded from summary statistics.
    pub converged: bool,
}

impl RunRecord {
    pub fn csv_row(&self) -> String {
        // The elapsed column is part of the fixed schema but is written as 0:
        // wall time is the one field that would break the byte-identical
        // output contract. Timings go to the log instead.
        format!(
            "{},{},{},{},{},{},{},{},{},0",
            self.experiment,
            self.ensemble,
            self.n,
            self.sample_index,
            self.seed,
            self.norm,
            self.sup_fejer.map(|v| v.to_string()).unwrap_or_default(),
            self.sup_laurent.map(|v| v.to_string()).unwrap_or_default(),
            self.ratio_sqrt_nlogn,
        )
    }
}

/// `norm / sqrt(n ln n)`; NaN below n = 2 where the normalizer vanishes.
pub fn ratio_sqrt_nlogn(n: usize, norm: f64) -> f64 {
    if n >= 2 {
        norm / ((n as f64) * (n as f64).ln()).sqrt()
    } else {
        f64::NAN
    }
}

/// Task seed derivation: a salted avalanche mix of (master, n, sample).
/// Stable across runs and worker counts by construction.
pub fn derive_sample_seed(master_seed: u64, n: usize, sample_index: u64) -> u64 {
    mix3(master_seed ^ 0x70E9_1AB5_EED0_0001, n as u64, sample_index)
}

pub fn render_csv(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
