//! Sweep orchestration and the command-line surface.
//!
//! Everything below the CLI is a pure function from a resolved
//! [`SweepConfig`] to records, so the same entry points serve the binary,
//! the test suite, and downstream callers. Output is deterministic: runs
//! with identical configuration produce byte-identical CSV, regardless of
//! the thread count used for the alpha sweep.

use std::io;

use crate::emft::EmftError;
use crate::exactchain::ExactChainError;

pub mod cli;
pub mod config;
pub mod csv;
pub mod extrema;
pub mod sweep;

pub use config::{Mode, PartialConfig, SweepConfig};
pub use csv::{parse_sweep_csv, render_compare_csv, render_sweep_csv};
pub use extrema::count_extrema;
pub use sweep::{
    compare_sections, run_emft_sweep, run_exact_sweep, CompareReport, CompareRow, SweepRecord,
    SweepResult,
};

/// Umbrella error of the harness layer; [`cli`] maps each variant group
/// to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Csv(#[from] csv::CsvError),
    #[error(transparent)]
    Extrema(#[from] extrema::ExtremaError),
    #[error("emft solve failed: {0}")]
    Emft(#[from] EmftError),
    #[error("exact-chain solve failed: {0}")]
    Exact(#[from] ExactChainError),
    #[error("{0} of {1} records did not converge")]
    NotConverged(usize, usize),
    #[error("trajectories were computed on different time grids")]
    GridMismatch,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
