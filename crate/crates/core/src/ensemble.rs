//! Seeded generation of random coefficient sequences, truncation transforms,
//! and empirical moment estimation.
//!
//! Every entry is a pure function of `(master_seed, sample_index, entry
//! index)` through a counter-based mix, so draws are reproducible across
//! call order and worker counts, and the length-m prefix of a length-n draw
//! equals the length-m draw.

use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffSeq;
use crate::error::{Error, Result};
use crate::seed::{mix3, SeedStream};

/// Index from which the heavy two-point family can fire: the first index
/// whose log and iterated log both exceed one. Below it entries are zero.
pub const TWO_POINT_ACTIVATION: usize = 16;

/// Distribution family of the coefficient entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Uniform on {-1, +1}.
    Rademacher,
    Gaussian { mean: f64, sd: f64 },
    /// Uniform on [-halfwidth, halfwidth].
    UniformCentered { halfwidth: f64 },
    StudentT { dof: f64 },
    /// Index-dependent two-point family: at index i >= 16 the value is
    /// +-sqrt(i ln(i) lll(i)) with probability 1/(i ln(i) ll(i) lll(i))
    /// each and 0 otherwise, where ll/lll are the iterated logs clamped at 1.
    /// Its tail sum of firing probabilities diverges.
    TwoPointHeavy,
    Constant { value: f64 },
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match self {
            Family::Gaussian { mean, sd } => {
                if !mean.is_finite() || !sd.is_finite() || *sd < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "gaussian needs finite mean and sd >= 0, got ({mean}, {sd})"
                    )));
                }
            }
            Family::UniformCentered { halfwidth } => {
                if !halfwidth.is_finite() || *halfwidth < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "uniform halfwidth must be >= 0, got {halfwidth}"
                    )));
                }
            }
            Family::StudentT { dof } => {
                if !(*dof > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "student t needs dof > 0, got {dof}"
                    )));
                }
            }
            Family::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "constant value must be finite, got {value}"
                    )));
                }
            }
            Family::Rademacher | Family::TwoPointHeavy => {}
        }
        Ok(())
    }

    /// Short tag used in run records and file names.
    pub fn label(&self) -> String {
        match self {
            Family::Rademacher => "rademacher".into(),
            Family::Gaussian { mean, sd } => format!("gaussian({mean},{sd})"),
            Family::UniformCentered { halfwidth } => format!("uniform({halfwidth})"),
            Family::StudentT { dof } => format!("student_t({dof})"),
            Family::TwoPointHeavy => "two_point_heavy".into(),
            Family::Constant { value } => format!("constant({value})"),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Family::Gaussian { mean, .. } => *mean,
            Family::Constant { value } => *value,
            Family::StudentT { dof } => {
                if *dof > 1.0 {
                    0.0
                } else {
                    f64::NAN
                }
            }
            _ => 0.0,
        }
    }

    pub fn is_centered(&self) -> bool {
        self.mean() == 0.0
    }

    /// E X_i^2 at a given index; infinite for heavy students.
    pub fn second_moment(&self, index: usize) -> f64 {
        match self {
            Family::Rademacher => 1.0,
            Family::Gaussian { mean, sd } => mean * mean + sd * sd,
            Family::UniformCentered { halfwidth } => halfwidth * halfwidth / 3.0,
            Family::StudentT { dof } => {
                if *dof > 2.0 {
                    dof / (dof - 2.0)
                } else {
                    f64::INFINITY
                }
            }
            Family::TwoPointHeavy => {
                let (p, v) = two_point_heavy_law(index);
                2.0 * p * v * v
            }
            Family::Constant { value } => value * value,
        }
    }

    pub fn has_finite_variance(&self) -> bool {
        !matches!(self, Family::StudentT { dof } if *dof <= 2.0)
    }

    /// Almost-sure bound on |X| when one exists, independent of the index.
    pub fn sup_bound(&self) -> Option<f64> {
        match self {
            Family::Rademacher => Some(1.0),
            Family::UniformCentered { halfwidth } => Some(*halfwidth),
            Family::Constant { value } => Some(value.abs()),
            _ => None,
        }
    }

    fn draw(&self, stream: &mut SeedStream, index: usize) -> f64 {
        match self {
            Family::Rademacher => {
                if stream.next_u64() >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Family::Gaussian { mean, sd } => mean + sd * stream.next_gaussian(),
            Family::UniformCentered { halfwidth } => {
                halfwidth * (2.0 * stream.next_f64() - 1.0)
            }
            Family::StudentT { dof } => student_t_polar(stream, *dof),
            Family::TwoPointHeavy => {
                let (p, v) = two_point_heavy_law(index);
                if p == 0.0 {
                    return 0.0;
                }
                let u = stream.next_f64();
                if u < p {
                    v
                } else if u < 2.0 * p {
                    -v
                } else {
                    0.0
                }
            }
            Family::Constant { value } => *value,
        }
    }
}

/// Firing probability (per sign) and magnitude of the heavy two-point family
/// at a given index. Iterated logs below 1 are clamped to 1.
pub fn two_point_heavy_law(index: usize) -> (f64, f64) {
    if index < TWO_POINT_ACTIVATION {
        return (0.0, 0.0);
    }
    let i = index as f64;
    let l1 = i.ln();
    let l2 = l1.ln().max(1.0);
    let l3 = l1.ln().max(1.0).ln().max(1.0);
    let p = 1.0 / (i * l1 * l2 * l3);
    let v = (i * l1 * l3).sqrt();
    (p, v)
}

/// Polar rejection sampler for the t distribution (Bailey's method).
fn student_t_polar(stream: &mut SeedStream, dof: f64) -> f64 {
    loop {
        let u = 2.0 * stream.next_f64() - 1.0;
        let v = 2.0 * stream.next_f64() - 1.0;
        let w = u * u + v * v;
        if w > 0.0 && w <= 1.0 {
            return u * (dof * (w.powf(-2.0 / dof) - 1.0) / w).sqrt();
        }
    }
}

/// Entry-wise truncation thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TruncationRule {
    /// Threshold `sqrt(i ln i)` per entry; indices 0 and 1, where the
    /// expression is undefined or zero, are never truncated.
    ByIndex,
    /// One threshold `sqrt(n ln n)` shared by all entries.
    ByDimension { n: usize },
}

impl TruncationRule {
    pub fn threshold(&self, index: usize) -> f64 {
        match self {
            TruncationRule::ByIndex => {
                if index < 2 {
                    f64::INFINITY
                } else {
                    let i = index as f64;
                    (i * i.ln()).sqrt()
                }
            }
            TruncationRule::ByDimension { n } => {
                let n = *n as f64;
                (n * n.ln()).sqrt()
            }
        }
    }
}

/// Distribution family plus truncation and seed discipline: everything
/// needed to regenerate a draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub truncation: Option<TruncationRule>,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(family: Family, master_seed: u64) -> Self {
        EnsembleSpec {
            family,
            truncation: None,
            master_seed,
        }
    }

    pub fn with_truncation(mut self, rule: TruncationRule) -> Self {
        self.truncation = Some(rule);
        self
    }
}

/// Draws the length-n coefficient sequence for one sample index.
///
/// Entry i is generated from the stream seeded with
/// `mix3(master_seed, sample_index, i)`, then the spec's truncation rule (if
/// any) is applied.
pub fn sample_sequence(spec: &EnsembleSpec, n: usize, sample_index: u64) -> Result<CoeffSeq> {
    spec.family.validate()?;
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let entries: Vec<f64> = (0..n)
        .map(|i| {
            let mut stream = SeedStream::new(mix3(spec.master_seed, sample_index, i as u64));
            spec.family.draw(&mut stream, i)
        })
        .collect();
    let x = CoeffSeq::new(entries)?;
    Ok(match &spec.truncation {
        Some(rule) => truncate_sequence(&x, rule),
        None => x,
    })
}

/// Zeroes every entry whose magnitude exceeds the rule's threshold.
pub fn truncate_sequence(x: &CoeffSeq, rule: &TruncationRule) -> CoeffSeq {
    let entries: Vec<f64> = x
        .entries()
        .iter()
        .enumerate()
        .map(|(i, &v)| if v.abs() <= rule.threshold(i) { v } else { 0.0 })
        .collect();
    CoeffSeq::new(entries).expect("truncation preserves validity")
}

/// Empirical exponential-moment norm: the smallest c such that the sample
/// mean of `exp((|x|/c)^alpha) - 1` is at most 1, found by bisection to
/// relative precision 1e-6. All-zero samples give 0.
pub fn orlicz_norm_empirical(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySequence);
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "orlicz exponent must be positive, got {alpha}"
        )));
    }
    let max_abs = samples.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if max_abs == 0.0 {
        return Ok(0.0);
    }
    let excess = |c: f64| -> f64 {
        let mean = samples
            .iter()
            .map(|&v| ((v.abs() / c).powf(alpha)).min(700.0).exp())
            .sum::<f64>()
            / samples.len() as f64;
        mean - 1.0
    };
    // c = max|x| / ln(2)^(1/alpha) makes every term at most 2, so it always
    // satisfies the constraint and bounds the bisection from above.
    let mut hi = max_abs * (1.0 / std::f64::consts::LN_2).powf(1.0 / alpha);
    let mut lo = hi;
    for _ in 0..4096 {
        let candidate = lo * 0.5;
        if excess(candidate) <= 1.0 {
            hi = candidate;
            lo = candidate;
        } else {
            lo = candidate;
            break;
        }
        if candidate < f64::MIN_POSITIVE {
            return Ok(0.0);
        }
    }
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if excess(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Monte Carlo estimate of `E max_i |X_i|^p` over independent length-n
/// draws, with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxAbsMoment {
    pub value: f64,
    pub std_error: f64,
    pub n_mc: usize,
}

/// The `seed` argument replaces the spec's master seed so callers can run
/// disjoint estimates from one spec.
pub fn max_abs_moment(
    spec: &EnsembleSpec,
    n: usize,
    p: f64,
    n_mc: usize,
    seed: u64,
) -> Result<MaxAbsMoment> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "moment order must be >= 1, got {p}"
        )));
    }
    if n_mc == 0 {
        return Err(Error::InvalidParameter("need at least one draw".into()));
    }
    let mut eff = spec.clone();
    eff.master_seed = seed;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for k in 0..n_mc {
        let x = sample_sequence(&eff, n, k as u64)?;
        let max_abs = x.entries().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let y = max_abs.powf(p);
        sum += y;
        sum_sq += y * y;
    }
    let mean = sum / n_mc as f64;
    let std_error = if n_mc > 1 {
        let var = (sum_sq - sum * sum / n_mc as f64) / (n_mc as f64 - 1.0);
        (var.max(0.0) / n_mc as f64).sqrt()
    } else {
        0.0
    };
    Ok(MaxAbsMoment {
        value: mean,
        std_error,
        n_mc,
    })
}
