//! Monte Carlo simulation against the closed forms: mean age, miss
//! probability, interval length, and delivered delay should all line up
//! within the reported standard errors.
//!
//! Run with `cargo run --release --example simulate_vs_theory`.

use quorum_age::{exact_average_age, replicate, QuorumConfig, ShiftedExponential};

fn main() -> quorum_age::Result<()> {
    let configs = [
        (1usize, 1usize, 1usize, 1.0, 0.0),
        (2, 1, 1, 1.0, 0.0),
        (20, 10, 2, 1.0, 1.0),
        (100, 60, 1, 0.5, 1.0),
        (100, 30, 5, 0.5, 1.0),
    ];
    println!(
        "{:>18} {:>12} {:>12} {:>10} {:>9} {:>9}",
        "config", "simulated", "exact", "std err", "q (sim)", "q"
    );
    for (n, w, r, rate, shift) in configs {
        let cfg = QuorumConfig::new(n, w, r)?;
        let delay = ShiftedExponential::new(rate, shift)?;
        let stats = replicate(cfg, delay, 200_000, 1_000, 4, 42)?;
        let exact = exact_average_age(cfg, delay);
        println!(
            "{:>18} {:>12.5} {:>12.5} {:>10.5} {:>9.4} {:>9.4}",
            format!("({n},{w},{r})"),
            stats.mean_age,
            exact.total_age,
            stats.std_error,
            stats.empirical_q,
            exact.miss_probability,
        );
    }
    Ok(())
}
