//! Experiment runner for hidden-graph top-k degree discovery.
//!
//! A run loads one dataset, executes one algorithm, checks the answer and
//! writes an [`ExperimentRecord`] as JSON plus one CSV row. Sweeps run the
//! cross product of k, worker and seed values.

pub mod error;
pub mod record;
pub mod runner;

pub use error::BenchError;
pub use record::{CsvRow, ExperimentRecord, ResultEntry, SCHEMA_VERSION};
pub use runner::{
    append_csv, compare, emit, load_dataset, load_manifest_file, read_record, record_file_name,
    run_experiment, sweep, write_record, Algorithm, Comparison, RunSpec, SummaryRow, SweepOutcome,
    SweepRow, SweepSpec,
};
