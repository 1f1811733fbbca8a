//! Empirical survival curves with exact binomial confidence envelopes, and
//! the comparison of theoretical tail bounds against them.
//!
//! Raw deep-tail frequencies are noise; every acceptance-grade comparison
//! here is made against the Clopper-Pearson upper confidence limit instead
//! of the point estimate.

use std::io::Write;

use statrs::distribution::{Beta, ContinuousCDF};

use crate::bounds;
use crate::error::{Error, Result};

/// Exact binomial upper confidence limit for k successes out of n at
/// two-sided level `1 - alpha` (upper endpoint of the classic interval,
/// `BetaInv(1 - alpha/2; k + 1, n - k)`).
pub fn clopper_pearson_upper(k: usize, n: usize, alpha: f64) -> f64 {
    assert!(k <= n && n > 0, "need 0 <= k <= n, n > 0");
    assert!(alpha > 0.0 && alpha < 1.0, "confidence level out of range");
    if k == n {
        return 1.0;
    }
    let dist = Beta::new((k + 1) as f64, (n - k) as f64).expect("valid shape parameters");
    dist.inverse_cdf(1.0 - alpha / 2.0)
}

/// Threshold grid with empirical survival fractions, their upper confidence
/// envelope, and (optionally) a theoretical bound evaluated on the same
/// grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    pub thresholds: Vec<f64>,
    pub empirical_survival: Vec<f64>,
    pub upper_confidence: Vec<f64>,
    pub bound_values: Vec<f64>,
    pub n_samples: usize,
}

/// Builds the empirical curve of `P(sample - center >= t)` over the grid.
/// `bound_values` starts empty; fill it with [`TailCurve::set_bound`].
pub fn empirical_tail(
    samples: &[f64],
    center: f64,
    thresholds: &[f64],
    conf_alpha: f64,
) -> Result<TailCurve> {
    if samples.is_empty() {
        return Err(Error::EmptySequence);
    }
    if thresholds.is_empty() {
        return Err(Error::InvalidParameter("empty threshold grid".into()));
    }
    if !(conf_alpha > 0.0 && conf_alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence alpha must lie in (0,1), got {conf_alpha}"
        )));
    }
    for w in thresholds.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "threshold grid must be strictly increasing".into(),
            ));
        }
    }
    let n = samples.len();
    let mut survival = Vec::with_capacity(thresholds.len());
    let mut upper = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        let k = samples.iter().filter(|&&z| z - center >= t).count();
        survival.push(k as f64 / n as f64);
        upper.push(clopper_pearson_upper(k, n, conf_alpha));
    }
    Ok(TailCurve {
        thresholds: thresholds.to_vec(),
        empirical_survival: survival,
        upper_confidence: upper,
        bound_values: vec![],
        n_samples: n,
    })
}

impl TailCurve {
    pub fn set_bound(&mut self, f: impl Fn(f64) -> f64) {
        self.bound_values = self.thresholds.iter().map(|&t| f(t)).collect();
    }

    /// CSV with the fixed column set `t,survival,upper_conf,bound`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,survival,upper_conf,bound")?;
        for (i, &t) in self.thresholds.iter().enumerate() {
            let bound = self
                .bound_values
                .get(i)
                .map(|b| b.to_string())
                .unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{}",
                t, self.empirical_survival[i], self.upper_confidence[i], bound
            )?;
        }
        Ok(())
    }
}

/// Outcome of comparing a bound against a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    /// Grid points where the upper confidence limit exceeds the bound (the
    /// statistically meaningful notion of violation).
    pub violations: usize,
    /// Grid points where the raw survival fraction exceeds the bound.
    pub raw_violations: usize,
    /// Largest `upper_confidence - bound` over the grid (negative when the
    /// bound dominates everywhere with room to spare).
    pub worst_gap: f64,
}

pub fn check_bound_dominates(curve: &TailCurve) -> Result<DominationReport> {
    if curve.bound_values.len() != curve.thresholds.len() {
        return Err(Error::InvalidParameter(
            "bound values not populated on the curve".into(),
        ));
    }
    let mut violations = 0;
    let mut raw_violations = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..curve.thresholds.len() {
        let bound = curve.bound_values[i];
        if curve.upper_confidence[i] > bound {
            violations += 1;
        }
        if curve.empirical_survival[i] > bound {
            raw_violations += 1;
        }
        worst_gap = worst_gap.max(curve.upper_confidence[i] - bound);
    }
    Ok(DominationReport {
        violations,
        raw_violations,
        worst_gap,
    })
}

/// Bound shapes with one free constant, for empirical calibration.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundFamily {
    /// Free constant K in the exponential remainder.
    Corollary2 { sigma2: f64, delta: f64, m_bound: f64 },
    /// Free constant C on the power-moment remainder.
    FukNagaev {
        sigma2: f64,
        delta: f64,
        p: f64,
        emax_p: f64,
    },
    /// Free constant C inside the stretched exponential.
    PsiAlphaSum {
        sigma2: f64,
        delta: f64,
        alpha: f64,
        psi_max: f64,
    },
    /// Free constant K in both prefactor and rate.
    Psi2Toeplitz { sum_psi2_sq: f64 },
    /// Free constant K_alpha in the rate.
    PsiAlphaToeplitz {
        sigma2_strong: f64,
        psi_max_norm: f64,
        alpha: f64,
        apply_alpha_power: bool,
    },
}

impl BoundFamily {
    /// Every family is pointwise nondecreasing in its constant, which is
    /// what makes the bisection in `fit_min_constant` valid.
    pub fn eval(&self, t: f64, constant: f64) -> f64 {
        match *self {
            BoundFamily::Corollary2 {
                sigma2,
                delta,
                m_bound,
            } => bounds::corollary2_bound(t, sigma2, delta, m_bound, constant),
            BoundFamily::FukNagaev {
                sigma2,
                delta,
                p,
                emax_p,
            } => bounds::fuk_nagaev_bound(t, sigma2, delta, p, emax_p, constant),
            BoundFamily::PsiAlphaSum {
                sigma2,
                delta,
                alpha,
                psi_max,
            } => bounds::psi_alpha_sum_bound(t, sigma2, delta, alpha, psi_max, constant),
            BoundFamily::Psi2Toeplitz { sum_psi2_sq } => {
                bounds::psi2_toeplitz_bound(t, sum_psi2_sq, constant)
            }
            BoundFamily::PsiAlphaToeplitz {
                sigma2_strong,
                psi_max_norm,
                alpha,
                apply_alpha_power,
            } => bounds::psi_alpha_toeplitz_bound(
                t,
                sigma2_strong,
                psi_max_norm,
                alpha,
                constant,
                apply_alpha_power,
            ),
        }
    }
}

/// Result of the constant search: the constant and whether it actually
/// dominates (false means the range maximum was returned as a flag).
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub constant: f64,
    pub feasible: bool,
}

/// Smallest constant in `range` for which the bound dominates the upper
/// confidence envelope of every curve, by bisection to relative precision
/// 1e-3. Infeasible ranges return the maximum, flagged.
pub fn fit_min_constant(
    curves: &[TailCurve],
    family: &BoundFamily,
    range: (f64, f64),
) -> Result<FitOutcome> {
    if curves.is_empty() {
        return Err(Error::EmptySequence);
    }
    let (min_c, max_c) = range;
    if !(min_c > 0.0 && max_c > min_c) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < min < max, got ({min_c}, {max_c})"
        )));
    }
    let dominates = |c: f64| -> bool {
        curves.iter().all(|curve| {
            curve
                .thresholds
                .iter()
                .zip(&curve.upper_confidence)
                .all(|(&t, &uc)| family.eval(t, c) >= uc)
        })
    };
    if dominates(min_c) {
        return Ok(FitOutcome {
            constant: min_c,
            feasible: true,
        });
    }
    if !dominates(max_c) {
        return Ok(FitOutcome {
            constant: max_c,
            feasible: false,
        });
    }
    let (mut lo, mut hi) = (min_c, max_c);
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if dominates(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(FitOutcome {
        constant: hi,
        feasible: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clopper_pearson_closed_forms() {
        // k = n is certainty.
        assert_eq!(clopper_pearson_upper(5, 5, 0.05), 1.0);
        // n = 2, k = 1 at alpha 0.05: solve 1 - p^2 = 0.025.
        assert_abs_diff_eq!(
            clopper_pearson_upper(1, 2, 0.05),
            0.975f64.sqrt(),
            epsilon = 1e-9
        );
        // k = 0: 1 - (1-p)^n = 1 - alpha/2.
        assert_abs_diff_eq!(
            clopper_pearson_upper(0, 10, 0.1),
            1.0 - 0.05f64.powf(0.1),
            epsilon = 1e-9
        );
    }

    #[test]
    fn empirical_tail_examples() {
        // All samples equal the center: survival 0 past zero.
        let c = empirical_tail(&[5.0; 8], 5.0, &[1.0], 0.05).unwrap();
        assert_eq!(c.empirical_survival, vec![0.0]);

        // All samples far above: survival 1.
        let c = empirical_tail(&[5.0; 8], 0.0, &[4.0], 0.05).unwrap();
        assert_eq!(c.empirical_survival, vec![1.0]);
        assert_eq!(c.upper_confidence, vec![1.0]);

        // Two-point sample: survival 1/2 with the closed-form envelope.
        let c = empirical_tail(&[0.0, 10.0], 0.0, &[5.0], 0.05).unwrap();
        assert_eq!(c.empirical_survival, vec![0.5]);
        assert_abs_diff_eq!(c.upper_confidence[0], 0.975f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn empirical_tail_matches_brute_force_on_tiny_lists() {
        let samples = [0.4, -1.0, 2.2, 2.2, 0.0, 7.5, -3.0];
        let grid = [-4.0, -1.5, 0.0, 2.2, 6.0];
        let c = empirical_tail(&samples, 0.5, &grid, 0.01).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let mut count = 0;
            for &s in &samples {
                if s - 0.5 >= t {
                    count += 1;
                }
            }
            assert_eq!(c.empirical_survival[i], count as f64 / samples.len() as f64);
        }
        // Survival is nonincreasing along the grid.
        for w in c.empirical_survival.windows(2) {
            assert!(w[1] <= w[0]);
        }
        // The envelope sits above the point estimate.
        for (s, u) in c.empirical_survival.iter().zip(&c.upper_confidence) {
            assert!(u >= s);
        }
    }

    #[test]
    fn empirical_tail_rejects_bad_input() {
        assert!(empirical_tail(&[], 0.0, &[1.0], 0.05).is_err());
        assert!(empirical_tail(&[1.0], 0.0, &[], 0.05).is_err());
        assert!(empirical_tail(&[1.0], 0.0, &[2.0, 1.0], 0.05).is_err());
        assert!(empirical_tail(&[1.0], 0.0, &[1.0], 0.0).is_err());
    }

    #[test]
    fn domination_trivial_cases() {
        let mut c = empirical_tail(&[0.0, 1.0, 3.0], 0.0, &[0.5, 2.0], 0.05).unwrap();
        c.set_bound(|_| 1.0);
        let r = check_bound_dominates(&c).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.raw_violations, 0);

        c.set_bound(|_| 0.0);
        let r = check_bound_dominates(&c).unwrap();
        // Survival is positive at both grid points.
        assert_eq!(r.raw_violations, 2);
        assert_eq!(r.violations, 2);
        assert!(r.worst_gap > 0.0);

        let missing = empirical_tail(&[1.0], 0.0, &[0.5], 0.05).unwrap();
        assert!(check_bound_dominates(&missing).is_err());
    }

    #[test]
    fn gaussian_tail_bound_dominates_at_high_confidence() {
        // Synthetic standard normal samples against the subgaussian tail
        // bound exp(-t^2/2), which sits strictly above the true tail: at 99%
        // confidence the envelope stays below it for at least 95% of seeds.
        let tail_bound = |t: f64| (-(t * t) / 2.0f64).exp().min(1.0);
        let grid: Vec<f64> = (0..25).map(|i| 0.1 + 0.12 * i as f64).collect();
        let n = 4000;
        let seeds = 40u64;
        let mut clean = 0;
        for seed in 0..seeds {
            let mut stream = crate::seed::SeedStream::new(808 + seed);
            let samples: Vec<f64> = (0..n).map(|_| stream.next_gaussian()).collect();
            let mut curve = empirical_tail(&samples, 0.0, &grid, 0.01).unwrap();
            curve.set_bound(tail_bound);
            if check_bound_dominates(&curve).unwrap().violations == 0 {
                clean += 1;
            }
        }
        assert!(
            clean as f64 >= 0.95 * seeds as f64,
            "{clean}/{seeds} seeds clean"
        );
    }

    #[test]
    fn fit_recovers_a_planted_constant() {
        // Build a synthetic "upper confidence" curve directly from the bound
        // at K = 2 and check the fit lands on 2 from above.
        let family = BoundFamily::Psi2Toeplitz { sum_psi2_sq: 1.0 };
        let grid: Vec<f64> = (1..20).map(|i| 0.2 * i as f64).collect();
        let curve = TailCurve {
            empirical_survival: vec![0.0; grid.len()],
            upper_confidence: grid.iter().map(|&t| family.eval(t, 2.0)).collect(),
            bound_values: vec![],
            n_samples: 1,
            thresholds: grid,
        };
        let fit = fit_min_constant(&[curve], &family, (1e-3, 1e3)).unwrap();
        assert!(fit.feasible);
        assert!(
            fit.constant >= 2.0 - 1e-9 && fit.constant <= 2.0 * 1.01,
            "fit {}",
            fit.constant
        );
    }

    #[test]
    fn fit_edge_cases() {
        let family = BoundFamily::Psi2Toeplitz { sum_psi2_sq: 1.0 };
        // All-zero envelope: any constant works, so the range minimum wins.
        let tiny_env = TailCurve {
            thresholds: vec![1.0],
            empirical_survival: vec![0.0],
            upper_confidence: vec![0.0],
            bound_values: vec![],
            n_samples: 50,
        };
        let fit = fit_min_constant(&[tiny_env], &family, (0.5, 10.0)).unwrap();
        assert!(fit.feasible);
        assert_eq!(fit.constant, 0.5);

        // Infeasible: envelope pinned at 1 past where the cap can reach.
        let hard = TailCurve {
            thresholds: vec![50.0],
            empirical_survival: vec![1.0],
            upper_confidence: vec![1.0],
            bound_values: vec![],
            n_samples: 50,
        };
        let fit = fit_min_constant(&[hard], &family, (0.5, 0.9)).unwrap();
        assert!(!fit.feasible);
        assert_eq!(fit.constant, 0.9);

        assert!(fit_min_constant(&[], &family, (0.1, 1.0)).is_err());
    }

    #[test]
    fn csv_round_trip_shape() {
        let mut curve = empirical_tail(&[0.0, 1.0], 0.0, &[0.5], 0.05).unwrap();
        curve.set_bound(|t| (-t).exp());
        let mut out = Vec::new();
        curve.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,survival,upper_conf,bound");
        let row = lines.next().unwrap();
        assert!(row.starts_with("0.5,0.5,"));
    }
}
