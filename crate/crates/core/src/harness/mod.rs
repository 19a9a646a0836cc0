//! Sweeps of preferential-attachment networks and their CSV output.

pub mod config;
pub mod cpu;
pub mod record;
pub mod sweep;

pub use config::{Algorithm, ExperimentConfig, SearchSettings};
pub use cpu::thread_cpu_time;
pub use record::{read_runs, run_columns, write_runs, write_summary, RunOutcome, RunRecord, TIMING_COLUMNS};
pub use sweep::{network_seed, run_sweep, search_seed, write_outputs, SweepOutputs};
