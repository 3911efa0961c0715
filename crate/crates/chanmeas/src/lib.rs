//! Trace files, CSV export and the batch driver for the uplink channel
//! measurement pipeline in `chanmeas-core`.

pub mod config;
pub mod error;
pub mod export;
pub mod measure;
pub mod predict;
pub mod trace;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use export::{export_csv, CsvSelection};
pub use measure::{measure, measure_to_vec, MeasureSummary};
pub use predict::{evaluate_trace, format_report, pairs_csv, PredictOutcome};
pub use trace::{read_trace, write_trace, ChannelTrace, TraceHeader, TraceWriter};
