//! Per-n summary statistics over converged norm samples.

use serde::Serialize;

/// Summary of the norm distribution at one matrix size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSummary {
    pub n: usize,
    /// Converged samples entering the statistics.
    pub samples: usize,
    /// Non-converged samples, recorded but excluded.
    pub flagged: usize,
    pub mean: f64,
    pub std: f64,
    /// std / mean; reported as 0 with `cv_defined = false` when the mean
    /// vanishes.
    pub cv: f64,
    pub cv_defined: bool,
    pub min: f64,
    pub max: f64,
    pub q05: f64,
    pub q95: f64,
    /// Quantiles of norm / mean.
    pub ratio_to_mean_q05: f64,
    pub ratio_to_mean_q50: f64,
    pub ratio_to_mean_q95: f64,
    /// mean / sqrt(n ln n).
    pub r_sqrt_nlogn: f64,
}

/// Linear-interpolation quantile of an ascending slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let p = p.clamp(0.0, 1.0);
    let idx = p * (sorted.len() - 1) as f64;
    let lo = idx.floor() as usize;
    let hi = idx.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = idx - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

pub fn summarize_norms(n: usize, values: &[f64], flagged: usize) -> NSummary {
    assert!(!values.is_empty(), "summary needs at least one sample");
    let count = values.len();
    let mean = values.iter().sum::<f64>() / count as f64;
    let var = if count > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count as f64 - 1.0)
    } else {
        0.0
    };
    let std = var.sqrt();
    let (cv, cv_defined) = if mean != 0.0 {
        (std / mean, true)
    } else {
        (0.0, false)
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let ratios: Vec<f64> = if mean != 0.0 {
        sorted.iter().map(|v| v / mean).collect()
    } else {
        vec![0.0; count]
    };
    let r_sqrt_nlogn = if n >= 2 {
        mean / ((n as f64) * (n as f64).ln()).sqrt()
    } else {
        f64::NAN
    };
    NSummary {
        n,
        samples: count,
        flagged,
        mean,
        std,
        cv,
        cv_defined,
        min: sorted[0],
        max: sorted[count - 1],
        q05: quantile(&sorted, 0.05),
        q95: quantile(&sorted, 0.95),
        ratio_to_mean_q05: quantile(&ratios, 0.05),
        ratio_to_mean_q50: quantile(&ratios, 0.50),
        ratio_to_mean_q95: quantile(&ratios, 0.95),
        r_sqrt_nlogn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 5.0);
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_abs_diff_eq!(quantile(&v, 0.25), 2.0);
        assert_abs_diff_eq!(quantile(&v, 0.1), 1.4, epsilon = 1e-12);
    }

    #[test]
    fn summary_basics() {
        let s = summarize_norms(64, &[2.0, 4.0, 6.0], 1);
        assert_eq!(s.samples, 3);
        assert_eq!(s.flagged, 1);
        assert_abs_diff_eq!(s.mean, 4.0);
        assert_abs_diff_eq!(s.std, 2.0);
        assert_abs_diff_eq!(s.cv, 0.5);
        assert!(s.cv_defined);
        assert_eq!(s.min, 2.0);
        assert_eq!(s.max, 6.0);
        assert_abs_diff_eq!(s.ratio_to_mean_q50, 1.0);
    }

    #[test]
    fn zero_mean_flags_cv() {
        let s = summarize_norms(8, &[0.0, 0.0], 0);
        assert_eq!(s.cv, 0.0);
        assert!(!s.cv_defined);
    }

    #[test]
    fn quantile_order_respected() {
        let mut vals: Vec<f64> = (0..50).map(|i| ((i * 37) % 50) as f64).collect();
        let s = summarize_norms(16, &vals, 0);
        assert!(s.q05 <= s.q95);
        assert!(s.min <= s.q05 && s.q95 <= s.max);
        vals.sort_by(f64::total_cmp);
        assert_eq!(s.min, vals[0]);
    }
}
