//! The age-minimizing write quorum size as the read quorum and the delay
//! parameters vary: bigger read quorums and slower writes both favor
//! committing after fewer acknowledgements.
//!
//! Run with `cargo run --example optimize_write_quorum`.

use quorum_age::{optimal_write_quorum, ShiftedExponential};

fn main() -> quorum_age::Result<()> {
    println!("n = 100, shift c = 1\n");
    println!(
        "{:>6} {:>6} {:>8} {:>10} {:>12} {:>11}",
        "rate", "r", "w*", "age(w*)", "continuous", "non-strict"
    );
    for rate in [0.5, 1.0, 2.0] {
        for r in [1usize, 5, 20] {
            let delay = ShiftedExponential::new(rate, 1.0)?;
            let best = optimal_write_quorum(100, r, delay)?;
            println!(
                "{rate:>6} {r:>6} {:>8} {:>10.5} {:>12.3} {:>11}",
                best.write_quorum, best.total_age, best.continuous_write_quorum, best.non_strict
            );
        }
    }
    println!("\nwaiting for every node (w = n) is never optimal here: the");
    println!("tail acknowledgements age the update more than they help reads");
    Ok(())
}
