//! Exact average age for one quorum configuration, with the full renewal
//! decomposition and the regime it falls in.
//!
//! Run with `cargo run --example analyze_configuration`.

use quorum_age::{exact_average_age, miss_probability, QuorumConfig, Regime, ShiftedExponential};

fn main() -> quorum_age::Result<()> {
    let delay = ShiftedExponential::new(0.5, 1.0)?;
    println!(
        "write delay: rate {} shift {} (mean {:.3})\n",
        delay.rate(),
        delay.shift(),
        delay.mean()
    );

    for (n, w, r) in [(100, 60, 1), (100, 60, 41), (100, 30, 5), (100, 95, 5)] {
        let cfg = QuorumConfig::new(n, w, r)?;
        let breakdown = exact_average_age(cfg, delay);
        let regime = match cfg.regime() {
            Regime::Strict => "strict",
            Regime::NonStrict => "non-strict",
        };
        println!("n={n} w={w} r={r} ({regime} quorum)");
        println!("  miss probability        {:.6}", miss_probability(cfg));
        println!("  mean interval length    {:.6}", breakdown.interval_mean);
        println!("  interval variance       {:.6}", breakdown.interval_var);
        println!(
            "  mean delivered delay    {:.6}",
            breakdown.mean_successful_delay
        );
        println!("  average age             {:.6}\n", breakdown.total_age);
    }
    Ok(())
}
