//! Instance files, reports and the batch runner on top of `kdecomp-core`.

pub mod batch;
pub mod engine;
pub mod instance;
pub mod report;

pub use batch::{run_batch, run_file, BatchInput};
pub use engine::{Engine, Options};
pub use instance::{parse_instance, InputError, Instance, Kind};
pub use report::{BatchEntry, BatchReport, Exact, Report, Verdict};
