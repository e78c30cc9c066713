//! Write-quorum sweeps: exact, approximate, and simulated age per point, with
//! optimum markers and CSV/JSON output for plotting.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{self, exact_average_age_cached};
use crate::error::{Error, Result};
use crate::model::{HarmonicCache, QuorumConfig, ShiftedExponential};
use crate::simulator;

/// One sweep point. `approx_age` is absent exactly at `w = n`; the simulated
/// columns are absent when the sweep ran without simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub w: usize,
    pub r: usize,
    pub lambda: f64,
    pub c: f64,
    pub exact_age: f64,
    pub approx_age: Option<f64>,
    pub sim_age: Option<f64>,
    pub sim_std_error: Option<f64>,
    pub is_optimum_exact: bool,
    pub is_optimum_approx: bool,
}

/// Simulation effort attached to each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    pub intervals: u64,
    pub warmup: u64,
    pub replications: u32,
    pub base_seed: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            intervals: 100_000,
            warmup: 1_000,
            replications: 4,
            base_seed: 42,
        }
    }
}

/// Evaluates the age curve over `w_values` (sorted and deduplicated) for one
/// `(n, r, lambda, c)`, marking the argmin of the exact and approximate
/// curves with ties broken toward the smaller write quorum.
///
/// Points are independent; with simulation enabled they run concurrently, and
/// each point draws from its own seed block so the output never depends on
/// scheduling order.
pub fn sweep_write_quorum(
    nodes: usize,
    read_quorum: usize,
    delay: ShiftedExponential,
    w_values: &[usize],
    sim: Option<SimOptions>,
) -> Result<Vec<SweepRow>> {
    if w_values.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep needs at least one write quorum size".into(),
        ));
    }
    let mut grid: Vec<usize> = w_values.to_vec();
    grid.sort_unstable();
    grid.dedup();
    // validate the whole grid before any work
    for &w in &grid {
        QuorumConfig::new(nodes, w, read_quorum)?;
    }

    let cache = HarmonicCache::new(nodes);
    let point = |(i, &w): (usize, &usize)| -> Result<SweepRow> {
        let cfg = QuorumConfig::new(nodes, w, read_quorum)?;
        let exact = exact_average_age_cached(cfg, delay, &cache).total_age;
        let approx = if w == nodes {
            None
        } else {
            Some(analytics::approx_average_age(cfg, delay)?)
        };
        let (sim_age, sim_std_error) = match sim {
            Some(opts) => {
                let seed = opts
                    .base_seed
                    .wrapping_add(i as u64 * u64::from(opts.replications));
                let stats = simulator::replicate(
                    cfg,
                    delay,
                    opts.intervals,
                    opts.warmup,
                    opts.replications,
                    seed,
                )?;
                (Some(stats.mean_age), Some(stats.std_error))
            }
            None => (None, None),
        };
        Ok(SweepRow {
            n: nodes,
            w,
            r: read_quorum,
            lambda: delay.rate(),
            c: delay.shift(),
            exact_age: exact,
            approx_age: approx,
            sim_age,
            sim_std_error,
            is_optimum_exact: false,
            is_optimum_approx: false,
        })
    };

    let mut rows: Vec<SweepRow> = if sim.is_some() {
        grid.par_iter()
            .enumerate()
            .map(point)
            .collect::<Result<Vec<_>>>()?
    } else {
        grid.iter()
            .enumerate()
            .map(point)
            .collect::<Result<Vec<_>>>()?
    };

    // rows are in ascending w order, so a strict < keeps the smaller quorum
    let mut best_exact: Option<(usize, f64)> = None;
    let mut best_approx: Option<(usize, f64)> = None;
    for (i, row) in rows.iter().enumerate() {
        if best_exact.is_none_or(|(_, v)| row.exact_age < v) {
            best_exact = Some((i, row.exact_age));
        }
        if let Some(a) = row.approx_age {
            if best_approx.is_none_or(|(_, v)| a < v) {
                best_approx = Some((i, a));
            }
        }
    }
    if let Some((i, _)) = best_exact {
        rows[i].is_optimum_exact = true;
    }
    if let Some((i, _)) = best_approx {
        rows[i].is_optimum_approx = true;
    }
    Ok(rows)
}

/// Default sweep grid: every integer for systems up to 200 nodes, about 200
/// evenly spaced sizes otherwise.
pub fn default_w_grid(nodes: usize) -> Vec<usize> {
    if nodes <= 200 {
        (1..=nodes).collect()
    } else {
        let mut grid: Vec<usize> = (0..200).map(|i| 1 + i * (nodes - 1) / 199).collect();
        grid.dedup();
        grid
    }
}

/// Table output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Renders rows to a writer. CSV columns are exactly
/// `n,w,r,lambda,c,exact_age,approx_age,sim_age,sim_std_error,is_optimum_exact,is_optimum_approx`
/// with empty fields for absent values; JSON is an array of objects with the
/// same keys (absent values are null). Numbers round-trip exactly.
pub fn emit_table<W: std::io::Write>(
    rows: &[SweepRow],
    format: TableFormat,
    mut dest: W,
) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("cannot emit an empty table".into()));
    }
    match format {
        TableFormat::Csv => {
            let mut writer = csv::Writer::from_writer(dest);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut dest, rows)?;
            dest.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Parses what [`emit_table`] produced; `parse_table(emit_table(rows)) == rows`.
pub fn parse_table(bytes: &[u8], format: TableFormat) -> Result<Vec<SweepRow>> {
    match format {
        TableFormat::Csv => {
            let mut reader = csv::Reader::from_reader(bytes);
            let mut rows = Vec::new();
            for row in reader.deserialize() {
                rows.push(row?);
            }
            Ok(rows)
        }
        TableFormat::Json => Ok(serde_json::from_slice(bytes)?),
    }
}

/// Writes a table atomically: the bytes land in a sibling `.tmp` file which
/// is renamed over the destination only once complete.
pub fn write_table_file(rows: &[SweepRow], format: TableFormat, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    emit_table(rows, format, &mut buf)?;
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, &buf).map_err(|source| Error::WriteFile {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|source| Error::WriteFile {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Number of sign changes in the first differences of a sequence; a
/// unimodal-or-monotone age curve has at most one.
pub fn first_difference_sign_changes(values: &[f64]) -> usize {
    let diffs: Vec<f64> = values.windows(2).map(|p| p[1] - p[0]).collect();
    diffs
        .windows(2)
        .filter(|p| (p[0] < 0.0) != (p[1] < 0.0))
        .count()
}
