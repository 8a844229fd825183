//! Experiment harness: runs the constraint-handling comparison grid, stores
//! per-run metrics as CSV, and turns them into comparison tables and scatter data.

pub mod config;
pub mod format;
pub mod plugin;
pub mod runner;
pub mod scatter;
pub mod store;
pub mod tables;

pub use config::{ExperimentConfig, PluginEntry, SyntheticEntry};
pub use runner::{generate_fronts, run_experiment, RunOptions, RunSummary};
pub use scatter::{emit_scatter, ScatterRequest};
pub use store::{CellKey, Record, ResultStore};
pub use tables::{emit_tables, TableSet, Totals};
