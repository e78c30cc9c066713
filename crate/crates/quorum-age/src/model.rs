//! Distribution primitives, generalized harmonic numbers, and order-statistic
//! moments for shifted-exponential write delays.

use rand::Rng;

use crate::error::{Error, Result};

/// Shifted exponential distribution with CDF
/// `F(x) = 1 - exp(-rate * (x - shift))` for `x >= shift`.
///
/// The shift models the fixed cost of producing and launching an update; the
/// exponential tail models the random part of the write delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedExponential {
    rate: f64,
    shift: f64,
}

impl ShiftedExponential {
    /// `rate` must be positive and `shift` non-negative.
    pub fn new(rate: f64, shift: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "rate must be a positive finite number, got {rate}"
            )));
        }
        if !shift.is_finite() || shift < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "shift must be a non-negative finite number, got {shift}"
            )));
        }
        Ok(Self { rate, shift })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Mean `shift + 1/rate`.
    pub fn mean(&self) -> f64 {
        self.shift + 1.0 / self.rate
    }

    /// Variance `1/rate²`.
    pub fn variance(&self) -> f64 {
        1.0 / (self.rate * self.rate)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.shift {
            0.0
        } else {
            1.0 - (-self.rate * (x - self.shift)).exp()
        }
    }

    /// Draws one delay by inverting the CDF, so a given uniform stream maps to
    /// the same delays everywhere. Every draw is `>= shift`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.shift - (1.0 - u).ln() / self.rate
    }
}

/// Whether the write and read quorums are guaranteed to intersect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `w + r > n`: every committed update is readable.
    Strict,
    /// `w + r <= n`: a write may miss the read quorum entirely.
    NonStrict,
}

/// System sizes: `n` nodes, write quorum `w`, read quorum `r`,
/// with `1 <= w <= n` and `1 <= r <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuorumConfig {
    nodes: usize,
    write_quorum: usize,
    read_quorum: usize,
}

impl QuorumConfig {
    pub fn new(nodes: usize, write_quorum: usize, read_quorum: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidQuorum("node count must be at least 1".into()));
        }
        if write_quorum == 0 || write_quorum > nodes {
            return Err(Error::InvalidQuorum(format!(
                "write quorum {write_quorum} outside 1..={nodes}"
            )));
        }
        if read_quorum == 0 || read_quorum > nodes {
            return Err(Error::InvalidQuorum(format!(
                "read quorum {read_quorum} outside 1..={nodes}"
            )));
        }
        Ok(Self {
            nodes,
            write_quorum,
            read_quorum,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn write_quorum(&self) -> usize {
        self.write_quorum
    }

    pub fn read_quorum(&self) -> usize {
        self.read_quorum
    }

    pub fn regime(&self) -> Regime {
        if self.write_quorum + self.read_quorum > self.nodes {
            Regime::Strict
        } else {
            Regime::NonStrict
        }
    }

    pub fn is_strict(&self) -> bool {
        self.regime() == Regime::Strict
    }

    /// Write fraction `w/n`.
    pub fn alpha(&self) -> f64 {
        self.write_quorum as f64 / self.nodes as f64
    }

    /// Unwritten fraction `1 - w/n`.
    pub fn beta(&self) -> f64 {
        (self.nodes - self.write_quorum) as f64 / self.nodes as f64
    }

    /// `beta^r`, the weight of the unwritten fraction across the read quorum.
    pub fn omega(&self) -> f64 {
        self.beta().powi(self.read_quorum as i32)
    }
}

/// `H_j = sum_{i=1..j} 1/i` by direct summation; `H_0 = 0`.
pub fn harmonic(j: usize) -> f64 {
    (1..=j).map(|i| 1.0 / i as f64).sum()
}

/// `sum_{i=1..j} 1/i²` by direct summation; the empty sum is 0.
pub fn harmonic2(j: usize) -> f64 {
    (1..=j).map(|i| 1.0 / (i * i) as f64).sum()
}

/// Prefix sums of `1/i` and `1/i²` so repeated order-statistic sums cost O(1)
/// per term. Values agree bit-for-bit with [`harmonic`] and [`harmonic2`].
#[derive(Debug, Clone)]
pub struct HarmonicCache {
    h: Vec<f64>,
    h2: Vec<f64>,
}

impl HarmonicCache {
    pub fn new(max: usize) -> Self {
        let mut h = Vec::with_capacity(max + 1);
        let mut h2 = Vec::with_capacity(max + 1);
        h.push(0.0);
        h2.push(0.0);
        for i in 1..=max {
            h.push(h[i - 1] + 1.0 / i as f64);
            h2.push(h2[i - 1] + 1.0 / (i * i) as f64);
        }
        Self { h, h2 }
    }

    pub fn max_index(&self) -> usize {
        self.h.len() - 1
    }

    /// `H_j`. Panics if `j` exceeds the cached maximum.
    pub fn h(&self, j: usize) -> f64 {
        self.h[j]
    }

    /// `sum 1/i²` up to `j`. Panics if `j` exceeds the cached maximum.
    pub fn h2(&self, j: usize) -> f64 {
        self.h2[j]
    }
}

fn check_rank(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "order-statistic rank {k} outside 1..={n}"
        )));
    }
    Ok(())
}

/// Mean of the k-th smallest of n i.i.d. draws:
/// `shift + (H_n - H_{n-k}) / rate`.
pub fn order_stat_mean(k: usize, n: usize, delay: ShiftedExponential) -> Result<f64> {
    check_rank(k, n)?;
    Ok(delay.shift() + (harmonic(n) - harmonic(n - k)) / delay.rate())
}

/// Variance of the k-th smallest of n i.i.d. draws:
/// `(H_{n,2} - H_{n-k,2}) / rate²`.
pub fn order_stat_var(k: usize, n: usize, delay: ShiftedExponential) -> Result<f64> {
    check_rank(k, n)?;
    Ok((harmonic2(n) - harmonic2(n - k)) / (delay.rate() * delay.rate()))
}

/// `n` i.i.d. delays from one rng stream.
pub fn sample_delays<R: Rng + ?Sized>(
    n: usize,
    delay: ShiftedExponential,
    rng: &mut R,
) -> Vec<f64> {
    (0..n).map(|_| delay.sample(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn harmonic_small_values() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        // independent check: Kahan-style backwards summation of 1/j
        let mut back = 0.0;
        for j in (1..=100usize).rev() {
            back += 1.0 / j as f64;
        }
        assert_relative_eq!(harmonic(100), back, max_relative = 1e-14);
        assert_relative_eq!(harmonic(100), 5.187_377_517_639_621, max_relative = 1e-12);
    }

    #[test]
    fn harmonic2_small_values() {
        assert_eq!(harmonic2(0), 0.0);
        assert_eq!(harmonic2(2), 1.25);
        // strictly increasing, bounded by pi²/6
        let mut prev = 0.0;
        for j in 1..=500 {
            let v = harmonic2(j);
            assert!(v > prev);
            prev = v;
        }
        assert!(harmonic2(5000) < 1.644_934_1);
    }

    #[test]
    fn harmonic_first_difference_is_reciprocal() {
        for j in 1..=10_000usize {
            let diff = harmonic(j) - harmonic(j - 1);
            assert!(
                (diff - 1.0 / j as f64).abs() <= 1e-12,
                "difference at j={j} was {diff}"
            );
        }
    }

    #[test]
    fn cache_matches_direct_summation() {
        let cache = HarmonicCache::new(500);
        for j in [0usize, 1, 2, 17, 100, 499, 500] {
            assert_eq!(cache.h(j), harmonic(j));
            assert_eq!(cache.h2(j), harmonic2(j));
        }
    }

    #[test]
    fn order_stat_mean_examples() {
        let unit = ShiftedExponential::new(1.0, 0.0).unwrap();
        assert_relative_eq!(order_stat_mean(1, 1, unit).unwrap(), 1.0);
        assert_relative_eq!(order_stat_mean(1, 2, unit).unwrap(), 0.5);
        let d = ShiftedExponential::new(0.5, 1.0).unwrap();
        let expected = 1.0 + 2.0 * (harmonic(100) - harmonic(40));
        assert_relative_eq!(order_stat_mean(60, 100, d).unwrap(), expected);
        assert_relative_eq!(
            order_stat_mean(60, 100, d).unwrap(),
            2.817_668_957_406_489_5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn order_stat_var_examples() {
        let unit = ShiftedExponential::new(1.0, 0.0).unwrap();
        assert_relative_eq!(order_stat_var(1, 1, unit).unwrap(), 1.0);
        assert_relative_eq!(order_stat_var(1, 2, unit).unwrap(), 0.25);
        let d = ShiftedExponential::new(2.0, 3.0).unwrap();
        let expected = (harmonic2(10) - harmonic2(5)) / 4.0;
        assert_relative_eq!(order_stat_var(5, 10, d).unwrap(), expected);
        assert_relative_eq!(
            order_stat_var(5, 10, d).unwrap(),
            0.021_539_155_013_857_39,
            max_relative = 1e-12
        );
    }

    #[test]
    fn order_stat_rank_out_of_range() {
        let d = ShiftedExponential::new(1.0, 0.0).unwrap();
        assert!(order_stat_mean(0, 5, d).is_err());
        assert!(order_stat_mean(6, 5, d).is_err());
        assert!(order_stat_var(0, 5, d).is_err());
        assert!(order_stat_var(6, 5, d).is_err());
    }

    #[test]
    fn order_stat_mean_increasing_in_rank_with_harmonic_endpoint() {
        let d = ShiftedExponential::new(0.7, 0.3).unwrap();
        for n in [1usize, 2, 5, 17, 100] {
            let mut prev = f64::NEG_INFINITY;
            for k in 1..=n {
                let m = order_stat_mean(k, n, d).unwrap();
                assert!(m >= d.shift());
                assert!(m > prev, "mean must increase with rank at n={n}, k={k}");
                prev = m;
            }
            assert_relative_eq!(
                order_stat_mean(n, n, d).unwrap(),
                d.shift() + harmonic(n) / d.rate(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn sample_delays_support_and_mean() {
        let d = ShiftedExponential::new(1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x in sample_delays(3, d, &mut rng) {
            assert!(x >= 2.0);
        }

        let unit = ShiftedExponential::new(1.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let xs = sample_delays(100_000, unit, &mut rng);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(
            (mean - 1.0).abs() < 0.02,
            "sample mean {mean} too far from 1.0"
        );
    }

    #[test]
    fn sample_delays_deterministic_per_seed() {
        let d = ShiftedExponential::new(0.5, 1.0).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        assert_eq!(sample_delays(64, d, &mut a), sample_delays(64, d, &mut b));
    }

    #[test]
    fn quorum_config_validation_and_regime() {
        assert!(QuorumConfig::new(0, 1, 1).is_err());
        assert!(QuorumConfig::new(3, 0, 1).is_err());
        assert!(QuorumConfig::new(3, 4, 1).is_err());
        assert!(QuorumConfig::new(3, 1, 0).is_err());
        assert!(QuorumConfig::new(3, 1, 4).is_err());

        let strict = QuorumConfig::new(100, 60, 41).unwrap();
        assert_eq!(strict.regime(), Regime::Strict);
        let partial = QuorumConfig::new(100, 60, 40).unwrap();
        assert_eq!(partial.regime(), Regime::NonStrict);
        assert_relative_eq!(partial.alpha(), 0.6);
        assert_relative_eq!(partial.beta(), 0.4);
        assert_relative_eq!(partial.omega(), 0.4f64.powi(40));
    }

    #[test]
    fn distribution_validation() {
        assert!(ShiftedExponential::new(0.0, 0.0).is_err());
        assert!(ShiftedExponential::new(-1.0, 0.0).is_err());
        assert!(ShiftedExponential::new(1.0, -0.1).is_err());
        assert!(ShiftedExponential::new(f64::NAN, 0.0).is_err());
        // shift 0 is a plain exponential and is allowed
        let d = ShiftedExponential::new(2.0, 0.0).unwrap();
        assert_relative_eq!(d.mean(), 0.5);
        assert_relative_eq!(d.variance(), 0.25);
    }

    proptest! {
        #[test]
        fn samples_never_fall_below_shift(
            rate in 0.05f64..20.0,
            shift in 0.0f64..10.0,
            seed in any::<u64>(),
        ) {
            let d = ShiftedExponential::new(rate, shift).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for x in sample_delays(32, d, &mut rng) {
                prop_assert!(x >= shift);
            }
        }

        #[test]
        fn order_stat_mean_dominates_shift(
            n in 1usize..80,
            rate in 0.05f64..20.0,
            shift in 0.0f64..10.0,
        ) {
            let d = ShiftedExponential::new(rate, shift).unwrap();
            for k in 1..=n {
                prop_assert!(order_stat_mean(k, n, d).unwrap() >= shift);
            }
        }
    }
}
