//! Age-of-information analysis for quorum-replicated storage.
//!
//! A source writes timestamped updates to `n` storage nodes and treats each
//! write as committed once `w` acknowledgements arrive, immediately starting
//! the next write; a client reads from `r` nodes and keeps the freshest copy.
//! Under i.i.d. shifted-exponential write delays this crate computes
//!
//! * the exact time-average age of what the client reads ([`analytics::exact_average_age`]),
//! * a large-system approximation of it ([`analytics::approx_average_age`]),
//! * the age-minimizing write quorum size ([`analytics::optimal_write_quorum`]),
//! * Monte Carlo estimates of all of the above from an event-driven
//!   simulation with exact sawtooth integration ([`simulator::run_simulation`]),
//! * parameter sweeps with CSV/JSON output ([`experiments::sweep_write_quorum`]).
//!
//! Growing the write quorum makes a read more likely to see the newest
//! update but also makes every update older by the time it commits; the
//! interesting output is where that tradeoff bottoms out.
//!
//! ```
//! use quorum_age::{exact_average_age, optimal_write_quorum, QuorumConfig, ShiftedExponential};
//!
//! let delay = ShiftedExponential::new(0.5, 1.0).unwrap();
//! let cfg = QuorumConfig::new(100, 60, 1).unwrap();
//! let breakdown = exact_average_age(cfg, delay);
//! assert!(breakdown.total_age > 5.0 && breakdown.total_age < 5.2);
//!
//! let best = optimal_write_quorum(100, 1, delay).unwrap();
//! assert!(best.total_age <= breakdown.total_age);
//! ```
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod analytics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod simulator;

pub use analytics::{
    approx_average_age, exact_average_age, interval_count_moments, miss_probability, optimal_omega,
    optimal_write_quorum, successful_write_delay_mean, AgeBreakdown, QuorumOptimum,
};
pub use error::{Error, Result};
pub use experiments::{
    default_w_grid, emit_table, parse_table, sweep_write_quorum, write_table_file, SimOptions,
    SweepRow, TableFormat,
};
pub use model::{
    harmonic, harmonic2, order_stat_mean, order_stat_var, sample_delays, HarmonicCache,
    QuorumConfig, Regime, ShiftedExponential,
};
pub use simulator::{
    cycle_area, cycle_records, replicate, run_simulation, AgeStatistics, CycleRecord,
};
