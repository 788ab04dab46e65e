//! External text formats: observation CSV, replay scripts, state snapshots
//! and rendered tables. All outputs are deterministic byte for byte.

pub mod observations;
pub mod render;
pub mod replay;
pub mod snapshot;

use thiserror::Error;

pub use observations::{parse_observations, ObservationRecord, ObservationTable};
pub use render::{format_number, render_matrix, render_report_line, Precision};
pub use replay::{parse_script, run_replay, ReplayCommand, ReplayOp, ReplayRun, ReportLine};
pub use snapshot::{read_state, write_state};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("expectation failed at line {line}: expected {expected}, got {actual}")]
    ExpectationFailed {
        line: usize,
        expected: crate::Report,
        actual: crate::Report,
        /// Report lines up to and including the failing command.
        completed: Vec<ReportLine>,
    },
    #[error("snapshot: {0}")]
    Snapshot(String),
}

impl TraceError {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        TraceError::Parse {
            line,
            reason: reason.into(),
        }
    }
}
