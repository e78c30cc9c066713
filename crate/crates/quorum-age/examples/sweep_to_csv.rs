//! Full age-vs-write-quorum sweep written as plot-ready CSV, one file per
//! read quorum size, with the optimum rows echoed to the terminal.
//!
//! Run with `cargo run --release --example sweep_to_csv`.

use std::path::PathBuf;

use quorum_age::{
    default_w_grid, sweep_write_quorum, write_table_file, ShiftedExponential, SimOptions,
    TableFormat,
};

fn main() -> quorum_age::Result<()> {
    let n = 100;
    let delay = ShiftedExponential::new(0.5, 1.0)?;
    let grid = default_w_grid(n);
    let sim = SimOptions {
        intervals: 20_000,
        warmup: 1_000,
        replications: 2,
        base_seed: 42,
    };

    for r in [1usize, 5, 20] {
        let rows = sweep_write_quorum(n, r, delay, &grid, Some(sim))?;
        let path = PathBuf::from(format!("age_sweep_r{r}.csv"));
        write_table_file(&rows, TableFormat::Csv, &path)?;
        let best = rows.iter().find(|row| row.is_optimum_exact).unwrap();
        println!(
            "r={r:>2}: wrote {} rows to {} (optimum w={} age={:.5})",
            rows.len(),
            path.display(),
            best.w,
            best.exact_age
        );
    }
    Ok(())
}
