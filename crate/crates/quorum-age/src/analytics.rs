//! Closed-form average-age evaluation and write-quorum optimization.
//!
//! The exact evaluator treats the read client as a renewal process: content
//! ages linearly between successful deliveries, and a delivery resets the age
//! to the write delay of the update that reached the read quorum. All moments
//! reduce to harmonic-number sums plus quorum-overlap combinatorics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HarmonicCache, QuorumConfig, Regime, ShiftedExponential};

/// The exact average age split into its renewal components.
///
/// `total_age = mean_successful_delay + m_moment_ratio * interval_mean
///            + interval_var / (2 * interval_mean)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgeBreakdown {
    /// Mean write delay of updates that actually reach the read quorum.
    pub mean_successful_delay: f64,
    /// Mean write-interval length (mean of the w-th smallest delay).
    pub interval_mean: f64,
    /// Variance of the write-interval length.
    pub interval_var: f64,
    /// Probability that one write interval delivers nothing readable.
    pub miss_probability: f64,
    /// Second-over-twice-first moment ratio of the interval count between
    /// consecutive successful deliveries; 1/2 exactly under a strict quorum.
    pub m_moment_ratio: f64,
    /// Time-average age seen by the reader.
    pub total_age: f64,
}

/// Probability that a write quorum misses the read quorum entirely.
///
/// Zero under a strict quorum; otherwise the hypergeometric ratio
/// `C(n-w, r) / C(n, r)`, evaluated as a telescoping product of factors
/// at most one so it never overflows.
pub fn miss_probability(cfg: QuorumConfig) -> f64 {
    match cfg.regime() {
        Regime::Strict => 0.0,
        Regime::NonStrict => {
            let (n, w, r) = (cfg.nodes(), cfg.write_quorum(), cfg.read_quorum());
            let mut q = 1.0;
            for i in 0..r {
                q *= (n - w - i) as f64 / (n - i) as f64;
            }
            q
        }
    }
}

/// First and second moments of the geometric count of write intervals between
/// consecutive successful deliveries: `(1/p, (2-p)/p²)` with `p = 1 - q`.
///
/// Rejects `q >= 1`, where the read quorum is never served and the age
/// diverges.
pub fn interval_count_moments(q: f64) -> Result<(f64, f64)> {
    if !q.is_finite() || !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "miss probability must lie in [0, 1), got {q}"
        )));
    }
    let p = 1.0 - q;
    Ok((1.0 / p, (2.0 - p) / (p * p)))
}

/// Mean write delay of a successful update, conditioned on the fastest
/// read-quorum node ranking within the write quorum.
///
/// The fastest read-quorum node has overall rank `k` with probability
/// `C(n-k, r-1) / C(n, r)`; ranks above `min(w, n-r+1)` either cannot occur or
/// mean the update was cancelled before reaching the read quorum.
pub fn successful_write_delay_mean(cfg: QuorumConfig, delay: ShiftedExponential) -> f64 {
    let cache = HarmonicCache::new(cfg.nodes());
    successful_write_delay_mean_cached(cfg, delay, &cache)
}

pub(crate) fn successful_write_delay_mean_cached(
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    cache: &HarmonicCache,
) -> f64 {
    let (n, w, r) = (cfg.nodes(), cfg.write_quorum(), cfg.read_quorum());
    let upper = w.min(n - r + 1);
    let success = 1.0 - miss_probability(cfg);
    let h_n = cache.h(n);
    let mut sum = 0.0;
    // rank_prob telescopes: P[rank = k] = r/(n-k+1) * prod_{i<k-1} (n-r-i)/(n-i)
    let mut prefix = 1.0;
    for k in 1..=upper {
        let rank_prob = prefix * r as f64 / (n - k + 1) as f64;
        let mean_k = delay.shift() + (h_n - cache.h(n - k)) / delay.rate();
        sum += mean_k * rank_prob;
        prefix *= (n - r - (k - 1)) as f64 / (n - (k - 1)) as f64;
    }
    sum / success
}

/// Exact time-average age of the content a reader sees, with its full
/// renewal decomposition.
pub fn exact_average_age(cfg: QuorumConfig, delay: ShiftedExponential) -> AgeBreakdown {
    let cache = HarmonicCache::new(cfg.nodes());
    exact_average_age_cached(cfg, delay, &cache)
}

pub(crate) fn exact_average_age_cached(
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    cache: &HarmonicCache,
) -> AgeBreakdown {
    let (n, w) = (cfg.nodes(), cfg.write_quorum());
    let q = miss_probability(cfg);
    let (m1, m2) = interval_count_moments(q).expect("w >= 1 keeps the miss probability below 1");
    let m_moment_ratio = m2 / (2.0 * m1);
    let rate = delay.rate();
    let interval_mean = delay.shift() + (cache.h(n) - cache.h(n - w)) / rate;
    let interval_var = (cache.h2(n) - cache.h2(n - w)) / (rate * rate);
    let mean_successful_delay = successful_write_delay_mean_cached(cfg, delay, cache);
    let total_age = mean_successful_delay
        + m_moment_ratio * interval_mean
        + interval_var / (2.0 * interval_mean);
    AgeBreakdown {
        mean_successful_delay,
        interval_mean,
        interval_var,
        miss_probability: q,
        m_moment_ratio,
        total_age,
    }
}

/// Large-system approximation of the average age.
///
/// With `beta = 1 - w/n` and `omega = beta^r`:
/// strict regime
/// `(1-2*omega)/(2*rate) * ln(1/beta) + (1-omega)*(shift + 1/(rate*r)) + shift/2`,
/// non-strict regime
/// `1/(rate*r) + ln(1/beta)/(2*rate) + shift + shift*(1+omega)/(2*(1-omega))`.
///
/// Rejects `w = n`, where `ln(1/beta)` diverges.
pub fn approx_average_age(cfg: QuorumConfig, delay: ShiftedExponential) -> Result<f64> {
    let (n, w, r) = (cfg.nodes(), cfg.write_quorum(), cfg.read_quorum());
    if w == n {
        return Err(Error::InvalidParameter(
            "approximation requires a write quorum smaller than the node count".into(),
        ));
    }
    let beta = cfg.beta();
    let omega = cfg.omega();
    let log_inv_beta = -beta.ln();
    let rate = delay.rate();
    let shift = delay.shift();
    let r_f = r as f64;
    Ok(match cfg.regime() {
        Regime::Strict => {
            (1.0 - 2.0 * omega) / (2.0 * rate) * log_inv_beta
                + (1.0 - omega) * (shift + 1.0 / (rate * r_f))
                + shift / 2.0
        }
        Regime::NonStrict => {
            1.0 / (rate * r_f)
                + log_inv_beta / (2.0 * rate)
                + shift
                + shift * (1.0 + omega) / (2.0 * (1.0 - omega))
        }
    })
}

/// Miss weight `omega* in (0, 1)` minimizing the non-strict approximation:
/// the unit-interval root of `x² - 2(rate*shift*r + 1)x + 1 = 0`.
///
/// Requires strictly positive `rate` and `shift`.
pub fn optimal_omega(rate: f64, shift: f64, read_quorum: usize) -> Result<f64> {
    if !rate.is_finite() || rate <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "optimizer requires a positive rate, got {rate}"
        )));
    }
    if !shift.is_finite() || shift <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "optimizer requires a positive shift, got {shift}"
        )));
    }
    if read_quorum == 0 {
        return Err(Error::InvalidParameter(
            "read quorum must be at least 1".into(),
        ));
    }
    let a = rate * shift * read_quorum as f64 + 1.0;
    // a - sqrt(a² - 1) without cancellation for large a
    Ok(1.0 / (a + (a * a - 1.0).sqrt()))
}

/// Age-minimizing integer write quorum and its exact age.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuorumOptimum {
    /// Best integer write quorum size.
    pub write_quorum: usize,
    /// Exact average age at that size.
    pub total_age: f64,
    /// Continuous miss weight from [`optimal_omega`].
    pub omega: f64,
    /// Continuous write quorum `n * (1 - omega^(1/r))` before integerization.
    pub continuous_write_quorum: f64,
    /// True when the optimum sits in the non-strict regime (`w* + r <= n`).
    pub non_strict: bool,
}

/// Minimizes the exact average age over integers near the continuous optimum:
/// the candidates `max(1, floor(w0)-2) ..= min(n, ceil(w0)+2)` are evaluated
/// exactly and ties go to the smaller write quorum.
pub fn optimal_write_quorum(
    nodes: usize,
    read_quorum: usize,
    delay: ShiftedExponential,
) -> Result<QuorumOptimum> {
    if nodes == 0 || read_quorum == 0 || read_quorum > nodes {
        return Err(Error::InvalidQuorum(format!(
            "read quorum {read_quorum} outside 1..={nodes}"
        )));
    }
    let omega = optimal_omega(delay.rate(), delay.shift(), read_quorum)?;
    let beta = omega.powf(1.0 / read_quorum as f64);
    let continuous = nodes as f64 * (1.0 - beta);
    let lo = ((continuous.floor() as i64) - 2).max(1) as usize;
    let hi = (((continuous.ceil() as i64) + 2).min(nodes as i64)) as usize;
    let cache = HarmonicCache::new(nodes);
    let mut best: Option<(usize, f64)> = None;
    for w in lo..=hi {
        let cfg = QuorumConfig::new(nodes, w, read_quorum)?;
        let age = exact_average_age_cached(cfg, delay, &cache).total_age;
        // strict inequality keeps the smaller quorum on ties
        if best.is_none_or(|(_, b)| age < b) {
            best = Some((w, age));
        }
    }
    let (write_quorum, total_age) = best.expect("candidate window is never empty");
    Ok(QuorumOptimum {
        write_quorum,
        total_age,
        omega,
        continuous_write_quorum: continuous,
        non_strict: write_quorum + read_quorum <= nodes,
    })
}
