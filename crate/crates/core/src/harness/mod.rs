//! Configuration-driven experiments with deterministic file output.
//!
//! Every run writes `result.csv` and `meta.json` (mode, config hash, crate
//! version, summary values) plus mode-specific extra files. Grid points are
//! evaluated on a worker pool and merged by index, so outputs do not depend
//! on the worker count.

mod calib;
pub mod config;
pub mod optimize;
pub mod stark;
pub mod sweeps;

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

pub use calib::{export_pauli_bars, read_csv_columns};
pub use config::{device_config, Condition, EpsilonRule, ExperimentConfig, Grid, Mode};
pub use optimize::{maximize_1d, maximize_2d, parabolic_peak, Optimum};
pub use stark::{fit_stark_lambda, StarkFit};
pub use sweeps::{
    landscape_ridge, max_ridge_deviation, mismatch_optimum, settling, stark_curve, state_metrics,
    MismatchPoint, RidgePoint, Settling, Setup, METRIC_COLUMNS,
};

use crate::error::{Error, Result};
use crate::output::Table;

/// Output of one experiment.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub mode: Mode,
    pub table: Table,
    pub summary: BTreeMap<String, f64>,
    /// Additional CSV files, by file name.
    pub extra_tables: Vec<(String, Table)>,
    /// Additional JSON files, by file name.
    pub extra_json: Vec<(String, serde_json::Value)>,
}

impl SweepResult {
    pub fn new(mode: Mode, table: Table) -> Self {
        Self { mode, table, summary: BTreeMap::new(), extra_tables: Vec::new(), extra_json: Vec::new() }
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    mode: &'a str,
    config_sha256: String,
    version: &'static str,
    seed: u64,
    columns: Vec<String>,
    rows: usize,
    summary: &'a BTreeMap<String, f64>,
    files: Vec<&'a str>,
}

/// Runs `cfg` on a pool of `workers` threads (all cores when `None`).
pub fn run_experiment(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<SweepResult> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Config("workers: must be at least 1".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::Solver(format!("worker pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &ExperimentConfig) -> Result<SweepResult> {
    match cfg.mode {
        Mode::Steady => sweeps::run_steady(cfg),
        Mode::Trajectory => sweeps::run_trajectory(cfg),
        Mode::SweepRabi => sweeps::run_rabi(cfg),
        Mode::SweepLandscape => sweeps::run_landscape(cfg),
        Mode::SweepMismatch => sweeps::run_mismatch(cfg),
        Mode::SweepDuration => sweeps::run_duration(cfg),
        Mode::TomographyDemo => calib::run_tomography_demo(cfg),
        Mode::FitS21 => calib::run_fit_s21(cfg),
        Mode::FitT1 => calib::run_fit_t1(cfg),
        Mode::FitLambda => calib::run_fit_lambda(cfg),
    }
}

/// Writes `result.csv`, `meta.json` and any extra files into `dir`.
pub fn write_outputs(result: &SweepResult, cfg: &ExperimentConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    result.table.write(&dir.join("result.csv"))?;
    for (name, t) in &result.extra_tables {
        t.write(&dir.join(name))?;
    }
    for (name, v) in &result.extra_json {
        std::fs::write(dir.join(name), serde_json::to_string_pretty(v)? + "\n")?;
    }
    let mut columns: Vec<String> = result.table.label_column.iter().cloned().collect();
    columns.extend(result.table.columns.iter().cloned());
    let mut files = vec!["result.csv"];
    files.extend(result.extra_tables.iter().map(|(n, _)| n.as_str()));
    files.extend(result.extra_json.iter().map(|(n, _)| n.as_str()));
    let meta = Meta {
        mode: result.mode.name(),
        config_sha256: cfg.hash(),
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        columns,
        rows: result.table.rows.len(),
        summary: &result.summary,
        files,
    };
    std::fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

/// Process exit code for an error: 3 for solver failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_solver_error() {
        3
    } else {
        2
    }
}
