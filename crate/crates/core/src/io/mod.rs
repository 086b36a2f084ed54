//! File ingestion, report emission and the command line.

pub mod cli;
mod format;
mod report;

pub use format::{
    check_references, emit_workload_file, parse_workload_file, FileError, Location, ParseError,
    WorkloadFile, FORMAT_VERSION,
};
pub use report::{emit_report, parse_machine_report, render_table, ReportFormat, MACHINE_HEADER};
