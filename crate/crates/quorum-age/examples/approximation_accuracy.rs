//! How tight the large-system approximation is against the exact age across
//! the write-quorum range.
//!
//! Run with `cargo run --example approximation_accuracy`.

use quorum_age::{approx_average_age, exact_average_age, QuorumConfig, ShiftedExponential};

fn main() -> quorum_age::Result<()> {
    let n = 100;
    let delay = ShiftedExponential::new(0.5, 1.0)?;

    for r in [1usize, 5, 20] {
        let mut worst: (f64, usize) = (0.0, 0);
        println!("read quorum r = {r}");
        println!(
            "{:>4} {:>12} {:>12} {:>9}",
            "w", "exact", "approx", "rel err"
        );
        for w in (10..=90).step_by(10) {
            let cfg = QuorumConfig::new(n, w, r)?;
            let exact = exact_average_age(cfg, delay).total_age;
            let approx = approx_average_age(cfg, delay)?;
            let rel = ((approx - exact) / exact).abs();
            if rel > worst.0 {
                worst = (rel, w);
            }
            println!("{w:>4} {exact:>12.6} {approx:>12.6} {:>8.3}%", rel * 100.0);
        }
        println!(
            "  worst on this table: {:.3}% at w={}\n",
            worst.0 * 100.0,
            worst.1
        );
    }
    println!("(the gap grows for small w with large r, where the miss");
    println!(" probability is hypergeometric but the approximation treats");
    println!(" read-quorum nodes as sampled with replacement)");
    Ok(())
}
