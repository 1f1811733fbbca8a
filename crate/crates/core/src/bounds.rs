//! Closed-form tail-bound evaluators and the weak/strong variance proxies
//! for the shift-basis sum representation of a symmetric Toeplitz matrix.
//!
//! Conventions shared by all evaluators: probabilities are capped at 1, the
//! value at t = 0 is 1 (or the cap), every logarithm is natural, and the
//! absolute constants the underlying inequalities leave unspecified are
//! caller parameters.

use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffSeq;
use crate::lanczos::extreme_eigen_pair;
use crate::toeplitz::{a_basis_norm, SymmetricToeplitz};

/// One bag for the parameters the bound formulas share, so configs and CLI
/// flags have a single shape to fill in. The `free_*` fields hold the
/// absolute constants the inequalities leave unspecified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub sigma2: f64,
    /// Sup bound on the summand norms.
    pub m_bound: f64,
    /// Expected supremum (plug-in estimate in practice).
    pub expected_sup: f64,
    pub delta: f64,
    pub eta: f64,
    pub p: f64,
    pub alpha: f64,
    pub free_k: f64,
    pub free_c: f64,
    pub free_k_alpha: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            sigma2: 0.0,
            m_bound: 0.0,
            expected_sup: 0.0,
            delta: 1.0,
            eta: 1.0,
            p: 2.0,
            alpha: 1.0,
            free_k: 1.0,
            free_c: 1.0,
            free_k_alpha: 1.0,
        }
    }
}

/// Bounded-summand tail bound with the sharp variance constant:
/// `exp(-t^2 / (2(sigma^2 + 2 M EZ) + 3 M t))`; one expression serves both
/// tails.
pub fn klein_rio_bound(t: f64, sigma2: f64, m_bound: f64, expected_sup: f64) -> f64 {
    debug_assert!(t >= 0.0 && sigma2 >= 0.0 && m_bound >= 0.0 && expected_sup >= 0.0);
    if t == 0.0 {
        return 1.0;
    }
    let denom = 2.0 * (sigma2 + 2.0 * m_bound * expected_sup) + 3.0 * m_bound * t;
    if denom <= 0.0 {
        // Every variance proxy vanishes: the variable is deterministic.
        return 0.0;
    }
    (-(t * t) / denom).exp().min(1.0)
}

/// Gaussian term plus an exponential remainder:
/// `exp(-t^2/(2(1+delta) sigma^2)) + exp(-t/(K M))`, capped at 1.
pub fn corollary2_bound(t: f64, sigma2: f64, delta: f64, m_bound: f64, k: f64) -> f64 {
    debug_assert!(t >= 0.0 && delta > 0.0 && k > 0.0);
    if t == 0.0 {
        return 1.0;
    }
    let tail = if m_bound > 0.0 {
        (-t / (k * m_bound)).exp()
    } else {
        0.0
    };
    (gaussian_term(t, sigma2, delta) + tail).min(1.0)
}

/// Gaussian term plus a power-moment remainder:
/// `exp(-t^2/(2(1+delta) sigma^2)) + C Emax_p / t^p`, capped at 1.
pub fn fuk_nagaev_bound(t: f64, sigma2: f64, delta: f64, p: f64, emax_p: f64, c: f64) -> f64 {
    debug_assert!(t >= 0.0 && delta > 0.0 && p >= 1.0 && emax_p >= 0.0 && c > 0.0);
    if t == 0.0 {
        return 1.0;
    }
    (gaussian_term(t, sigma2, delta) + c * emax_p / t.powf(p)).min(1.0)
}

/// Gaussian term plus a stretched-exponential remainder:
/// `exp(-t^2/(2(1+delta) sigma^2)) + 3 exp(-(t/(C psi))^alpha)`, capped at 1.
pub fn psi_alpha_sum_bound(
    t: f64,
    sigma2: f64,
    delta: f64,
    alpha: f64,
    psi_max: f64,
    c: f64,
) -> f64 {
    debug_assert!(t >= 0.0 && delta > 0.0 && alpha > 0.0 && alpha <= 1.0 && c > 0.0);
    if t == 0.0 {
        return 1.0;
    }
    let tail = if psi_max > 0.0 {
        3.0 * (-(t / (c * psi_max)).powf(alpha)).exp()
    } else {
        0.0
    };
    (gaussian_term(t, sigma2, delta) + tail).min(1.0)
}

/// Subgaussian two-sided bound `K exp(-t^2 / (K sum ||X_i||^2))`, capped.
pub fn psi2_toeplitz_bound(t: f64, sum_psi2_sq: f64, k: f64) -> f64 {
    debug_assert!(t >= 0.0 && sum_psi2_sq >= 0.0 && k > 0.0);
    if t == 0.0 {
        return k.min(1.0);
    }
    if sum_psi2_sq == 0.0 {
        return 0.0;
    }
    (k * (-(t * t) / (k * sum_psi2_sq)).exp()).min(1.0)
}

/// Mixed bound `2 exp(-(1/K_alpha) min(t^2/Sigma^2, r))` where `r = t/psi`
/// in the literal printed form, or `(t/psi)^alpha` when `apply_alpha_power`
/// is set (both variants appear in the source inequality; the literal form
/// is the default elsewhere in the crate).
pub fn psi_alpha_toeplitz_bound(
    t: f64,
    sigma2_strong: f64,
    psi_max_norm: f64,
    alpha: f64,
    k_alpha: f64,
    apply_alpha_power: bool,
) -> f64 {
    debug_assert!(t >= 0.0 && k_alpha > 0.0 && alpha > 0.0 && alpha <= 1.0);
    if t == 0.0 {
        return 1.0;
    }
    let quad = if sigma2_strong > 0.0 {
        t * t / sigma2_strong
    } else {
        f64::INFINITY
    };
    let linear = if psi_max_norm > 0.0 {
        let r = t / psi_max_norm;
        if apply_alpha_power {
            r.powf(alpha)
        } else {
            r
        }
    } else {
        f64::INFINITY
    };
    let exponent = quad.min(linear);
    if exponent == f64::INFINITY {
        return 0.0;
    }
    (2.0 * (-exponent / k_alpha).exp()).min(1.0)
}

fn gaussian_term(t: f64, sigma2: f64, delta: f64) -> f64 {
    if sigma2 > 0.0 {
        (-(t * t) / (2.0 * (1.0 + delta) * sigma2)).exp()
    } else {
        0.0
    }
}

/// Truncation level `rho = (2 4^p Emax_p)^{1/p}`. By Markov's inequality at
/// most a `(2 4^p)^{-1}` fraction of draws has `max_i |X_i|` above it.
pub fn hj_truncation_level(p: f64, emax_p: f64) -> f64 {
    debug_assert!(p >= 1.0 && emax_p >= 0.0);
    (2.0 * 4.0f64.powf(p) * emax_p).powf(1.0 / p)
}

/// Strong variance of the shift-basis sum: `sum_i ||A_i||^2 E X_i^2`,
/// together with the cruder cap `4 sum_i E X_i^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongVariance {
    pub value: f64,
    pub crude_cap: f64,
}

pub fn sigma2_strong(second_moments: &[f64]) -> StrongVariance {
    let n = second_moments.len();
    let value = second_moments
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let a = a_basis_norm(n, i).expect("index in range");
            a * a * m
        })
        .sum();
    let crude_cap = 4.0 * second_moments.iter().sum::<f64>();
    StrongVariance { value, crude_cap }
}

/// Bracket and heuristic for the weak variance
/// `sup_{||gamma||_2 <= 1} || [gamma_{|i-j|} s_{|i-j|}] ||^2`,
/// `s_k = sqrt(E X_k^2)`. The exact sup is a maximization of a convex
/// function over the unit ball, so only a guaranteed bracket plus a
/// heuristic is reported.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakVariance {
    /// Objective at the flat weights `gamma_k = 1/sqrt(n)`; a valid lower
    /// bound (equal to `n E X_0^2` in the i.i.d. case).
    pub lower: f64,
    /// The strong variance, a valid upper bound.
    pub upper: f64,
    /// Best objective seen by alternating maximization; always between the
    /// two bounds.
    pub heuristic: f64,
    /// Weights achieving the heuristic.
    pub gamma: Vec<f64>,
}

/// Alternating maximization: fix weights, take the extreme eigenpair of the
/// induced symmetric Toeplitz matrix, push the eigenvector's shift
/// correlations back into the weights, renormalize, repeat `iters` times.
pub fn sigma2_weak(second_moments: &[f64], iters: usize) -> WeakVariance {
    let n = second_moments.len();
    assert!(n > 0, "need at least one moment");
    let s: Vec<f64> = second_moments.iter().map(|&m| m.max(0.0).sqrt()).collect();
    let upper = sigma2_strong(second_moments).value;
    let flat = 1.0 / (n as f64).sqrt();
    let mut gamma = vec![flat; n];
    let mut best_gamma = gamma.clone();
    let mut best = 0.0f64;
    let mut lower = 0.0f64;
    for iter in 0..=iters {
        let coeffs: Vec<f64> = gamma.iter().zip(&s).map(|(g, sk)| g * sk).collect();
        let c = CoeffSeq::new(coeffs).expect("weights and moments are finite");
        let t = SymmetricToeplitz::new(c);
        let pair = extreme_eigen_pair(&t, 1e-10, (4 * n).max(32), 0x516);
        let objective = pair.estimate.value * pair.estimate.value;
        if iter == 0 {
            lower = objective;
        }
        if objective >= best {
            best = objective;
            best_gamma = gamma.clone();
        }
        if iter == iters {
            break;
        }
        // gamma_k proportional to s_k times the eigenvector's lag-k mass.
        let z = &pair.vector;
        if z.is_empty() {
            break;
        }
        let mut next = vec![0.0; n];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut corr = 0.0;
            for i in 0..n - k {
                corr += z[i] * z[i + k];
            }
            *slot = s[k] * if k == 0 { corr } else { 2.0 * corr };
        }
        let norm: f64 = next.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for v in next.iter_mut() {
            *v /= norm;
        }
        gamma = next;
    }
    let heuristic = best.max(lower).min(upper.max(lower));
    WeakVariance {
        lower,
        upper,
        heuristic,
        gamma: best_gamma,
    }
}
