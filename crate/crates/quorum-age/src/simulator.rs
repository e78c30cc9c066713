//! Event-driven Monte Carlo of the write/read age process.
//!
//! Each write interval draws `n` i.i.d. delays; the interval ends when the
//! w-th acknowledgement lands (zero-wait writer), the remaining writes are
//! cancelled, and the read quorum is the fixed node set `{1..r}` (the delays
//! are i.i.d., so any fixed set is statistically identical to a random one).
//! A delivery to the read quorum resets the client age to the write delay of
//! the delivered update; the age path is integrated in closed form between
//! events, with no time discretization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QuorumConfig, ShiftedExponential};

/// Everything sampled and observed in one write interval.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    /// Zero-based interval number.
    pub interval_index: u64,
    /// The `n` sampled write delays, in node order (nodes `0..r` form the
    /// read quorum).
    pub delays: Vec<f64>,
    /// The w-th smallest delay: when this interval's write committed.
    pub commit_time: f64,
    /// Whether the read quorum intersected the write quorum.
    pub success: bool,
    /// Smallest delay among read-quorum nodes that received the update;
    /// present exactly when `success`.
    pub delivered_delay: Option<f64>,
}

/// Simulation outputs for one run (or a pool of replications).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgeStatistics {
    /// Time-average client age over the observed window.
    pub mean_age: f64,
    /// Standard error of `mean_age` (batch means within a run, between-run
    /// scatter when pooling replications).
    pub std_error: f64,
    /// Complete renewal cycles observed (between consecutive deliveries).
    pub cycles: u64,
    /// Fraction of observed intervals whose write missed the read quorum.
    pub empirical_q: f64,
    /// Mean observed interval length.
    #[serde(rename = "empirical_EY")]
    pub empirical_ey: f64,
    /// Mean delivered write delay over observed deliveries.
    #[serde(rename = "empirical_EXtil")]
    pub empirical_extil: f64,
    /// Mean area under the age path per complete cycle.
    #[serde(rename = "empirical_EA")]
    pub empirical_ea: f64,
    /// Length of the observed window (after warmup).
    pub total_time: f64,
}

/// Area under one sawtooth cycle between consecutive successful deliveries.
///
/// With `W` the summed lengths of the intervals spanned by the cycle, the
/// previous delivery resets the age to `previous_delivered_delay` (the left
/// edge of the polygon) and the closing delivery lands at age
/// `delivered_delay`, so the area is
/// `(W + delivered)²/2 - previous_delivered²/2`.
pub fn cycle_area(
    interval_lengths: &[f64],
    delivered_delay: f64,
    previous_delivered_delay: f64,
) -> Result<f64> {
    if interval_lengths.is_empty() {
        return Err(Error::InvalidParameter(
            "a cycle spans at least one write interval".into(),
        ));
    }
    let span: f64 = interval_lengths.iter().sum();
    Ok(area_from_span(
        span,
        delivered_delay,
        previous_delivered_delay,
    ))
}

#[inline]
fn area_from_span(span: f64, delivered: f64, previous: f64) -> f64 {
    0.5 * (span + delivered) * (span + delivered) - 0.5 * previous * previous
}

/// Commit time (w-th smallest delay) and delivered read-quorum delay, if any,
/// for one interval's delays. Reorders the buffer.
fn observe_interval(delays: &mut [f64], w: usize, r: usize) -> (f64, Option<f64>) {
    let min_read = delays[..r].iter().copied().fold(f64::INFINITY, f64::min);
    let n = delays.len();
    let commit = if w == 1 {
        delays.iter().copied().fold(f64::INFINITY, f64::min)
    } else if w == n {
        delays.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        let (_, nth, _) = delays.select_nth_unstable_by(w - 1, f64::total_cmp);
        *nth
    };
    // the fastest read-quorum node received the update iff it ranks within
    // the write quorum, i.e. its delay does not exceed the commit time
    let delivered = (min_read <= commit).then_some(min_read);
    (commit, delivered)
}

/// Streams per-interval records for a deterministic seeded run. The delay
/// stream is identical to [`run_simulation`] with the same seed.
pub fn cycle_records(
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    num_intervals: u64,
    seed: u64,
) -> CycleRecords {
    CycleRecords {
        cfg,
        delay,
        rng: ChaCha8Rng::seed_from_u64(seed),
        next_index: 0,
        num_intervals,
    }
}

/// Iterator over [`CycleRecord`]s; see [`cycle_records`].
pub struct CycleRecords {
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    rng: ChaCha8Rng,
    next_index: u64,
    num_intervals: u64,
}

impl Iterator for CycleRecords {
    type Item = CycleRecord;

    fn next(&mut self) -> Option<CycleRecord> {
        if self.next_index >= self.num_intervals {
            return None;
        }
        let n = self.cfg.nodes();
        let delays: Vec<f64> = (0..n).map(|_| self.delay.sample(&mut self.rng)).collect();
        let mut scratch = delays.clone();
        let (commit_time, delivered_delay) = observe_interval(
            &mut scratch,
            self.cfg.write_quorum(),
            self.cfg.read_quorum(),
        );
        let record = CycleRecord {
            interval_index: self.next_index,
            delays,
            commit_time,
            success: delivered_delay.is_some(),
            delivered_delay,
        };
        self.next_index += 1;
        Some(record)
    }
}

/// Runs one seeded simulation and integrates the exact piecewise-linear age
/// path over the intervals after the warmup prefix.
///
/// Rejects `num_intervals <= warmup_intervals` and runs whose observed window
/// completes fewer than two renewal cycles.
pub fn run_simulation(
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    num_intervals: u64,
    warmup_intervals: u64,
    seed: u64,
) -> Result<AgeStatistics> {
    if num_intervals == 0 || num_intervals <= warmup_intervals {
        return Err(Error::InvalidParameter(format!(
            "need num_intervals > warmup_intervals, got {num_intervals} <= {warmup_intervals}"
        )));
    }
    let (n, w, r) = (cfg.nodes(), cfg.write_quorum(), cfg.read_quorum());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delays = vec![0.0f64; n];

    let mut clock = 0.0f64; // start time of the current interval
    let mut generation = 0.0f64; // timestamp of the freshest delivered content
    let mut observe_from = 0.0f64;
    let mut area = 0.0f64; // direct age integral over the observed window

    let mut observed_intervals = 0u64;
    let mut misses = 0u64;
    let mut interval_len_sum = 0.0f64;
    let mut deliveries = 0u64;
    let mut delivered_sum = 0.0f64;

    // renewal cycles between consecutive post-warmup deliveries
    let mut cycle_open = false;
    let mut previous_delivered = 0.0f64;
    let mut pending_span = 0.0f64;
    let mut cycles: Vec<(f64, f64)> = Vec::new(); // (area, duration)

    for j in 0..num_intervals {
        let observing = j >= warmup_intervals;
        if j == warmup_intervals {
            observe_from = clock;
        }
        for slot in delays.iter_mut() {
            *slot = delay.sample(&mut rng);
        }
        let (commit, delivered) = observe_interval(&mut delays, w, r);
        if observing {
            observed_intervals += 1;
            interval_len_sum += commit;
            if delivered.is_none() {
                misses += 1;
            }
        }
        match delivered {
            Some(x) => {
                if observing {
                    // trapezoid up to the delivery, then from the drop to the commit
                    let age_start = clock - generation;
                    area += (age_start + (age_start + x)) * 0.5 * x;
                    let tail = commit - x;
                    area += (x + (x + tail)) * 0.5 * tail;
                    deliveries += 1;
                    delivered_sum += x;
                    if cycle_open {
                        let cycle_area = area_from_span(pending_span, x, previous_delivered);
                        let duration = pending_span + x - previous_delivered;
                        cycles.push((cycle_area, duration));
                    }
                    cycle_open = true;
                    previous_delivered = x;
                    pending_span = 0.0;
                }
                generation = clock;
            }
            None => {
                if observing {
                    let age_start = clock - generation;
                    area += (age_start + (age_start + commit)) * 0.5 * commit;
                }
            }
        }
        if cycle_open {
            pending_span += commit;
        }
        clock += commit;
    }

    let complete = cycles.len() as u64;
    if complete < 2 {
        return Err(Error::TooFewCycles { complete });
    }
    let total_time = clock - observe_from;
    let mean_age = area / total_time;
    Ok(AgeStatistics {
        mean_age,
        std_error: batch_means_std_error(&cycles),
        cycles: complete,
        empirical_q: misses as f64 / observed_intervals as f64,
        empirical_ey: interval_len_sum / observed_intervals as f64,
        empirical_extil: delivered_sum / deliveries as f64,
        empirical_ea: cycles.iter().map(|(a, _)| a).sum::<f64>() / complete as f64,
        total_time,
    })
}

/// Standard error of the time-average age from batch means over renewal
/// cycles: cycles are grouped into near-equal batches, each batch yields a
/// ratio estimate, and the scatter of batch ratios gives the error.
fn batch_means_std_error(cycles: &[(f64, f64)]) -> f64 {
    let k = cycles.len();
    let batches = if k >= 64 { 32 } else { (k / 2).max(2) };
    let base = k / batches;
    let extra = k % batches;
    let mut ratios = Vec::with_capacity(batches);
    let mut idx = 0;
    for b in 0..batches {
        let len = base + usize::from(b < extra);
        let (mut a_sum, mut d_sum) = (0.0, 0.0);
        for &(a, d) in &cycles[idx..idx + len] {
            a_sum += a;
            d_sum += d;
        }
        idx += len;
        ratios.push(a_sum / d_sum);
    }
    let mean = ratios.iter().sum::<f64>() / batches as f64;
    let var = ratios.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// Runs independent replications seeded `base_seed + i`, pools the
/// time-weighted mean age, and reports the between-replication standard
/// error. A single replication is identical to [`run_simulation`].
///
/// Replications run concurrently; the pooled result does not depend on
/// completion order.
pub fn replicate(
    cfg: QuorumConfig,
    delay: ShiftedExponential,
    num_intervals: u64,
    warmup_intervals: u64,
    replications: u32,
    base_seed: u64,
) -> Result<AgeStatistics> {
    if replications == 0 {
        return Err(Error::InvalidParameter(
            "need at least one replication".into(),
        ));
    }
    if replications == 1 {
        return run_simulation(cfg, delay, num_intervals, warmup_intervals, base_seed);
    }
    let runs = (0..replications)
        .into_par_iter()
        .map(|i| {
            run_simulation(
                cfg,
                delay,
                num_intervals,
                warmup_intervals,
                base_seed.wrapping_add(u64::from(i)),
            )
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let count = runs.len() as f64;
    let total_time: f64 = runs.iter().map(|s| s.total_time).sum();
    let mean_age = runs.iter().map(|s| s.mean_age * s.total_time).sum::<f64>() / total_time;
    let between_var = runs
        .iter()
        .map(|s| (s.mean_age - mean_age) * (s.mean_age - mean_age))
        .sum::<f64>()
        / (count - 1.0);
    let total_cycles: u64 = runs.iter().map(|s| s.cycles).sum();
    Ok(AgeStatistics {
        mean_age,
        std_error: (between_var / count).sqrt(),
        cycles: total_cycles,
        empirical_q: runs.iter().map(|s| s.empirical_q).sum::<f64>() / count,
        empirical_ey: runs.iter().map(|s| s.empirical_ey).sum::<f64>() / count,
        empirical_extil: runs.iter().map(|s| s.empirical_extil).sum::<f64>() / count,
        empirical_ea: runs
            .iter()
            .map(|s| s.empirical_ea * s.cycles as f64)
            .sum::<f64>()
            / total_cycles as f64,
        total_time,
    })
}
