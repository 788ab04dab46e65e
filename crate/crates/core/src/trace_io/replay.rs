//! Replay scripts driving the allocation state machine.
//!
//! One command per line; blank lines and lines starting with `#` are
//! skipped:
//!
//! ```text
//! INIT
//! ADD <resource> <workload> [EXPECT <REPORT>]
//! FIND <resource> [EXPECT <REPORT>]
//! MAP <workload> [EXPECT <REPORT>]
//! ```
//!
//! Each executed command yields a report line `<lineNo> <REPORT> [payload]`.

use std::fmt;

use super::observations::lines;
use super::render::render_report_line;
use super::TraceError;
use crate::allocation::{AllocationState, Payload, Report};
use crate::names::{CloudWorkload, ResourceName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayOp {
    Init,
    Add(ResourceName, CloudWorkload),
    Find(ResourceName),
    Map(CloudWorkload),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayCommand {
    /// 1-based line in the script.
    pub line: usize,
    pub op: ReplayOp,
    pub expect: Option<Report>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportLine {
    pub line: usize,
    pub report: Report,
    pub payload: Option<Payload>,
}

impl fmt::Display for ReportLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_report_line(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayRun {
    pub state: AllocationState,
    pub lines: Vec<ReportLine>,
}

fn resource(word: &str, line: usize) -> Result<ResourceName, TraceError> {
    ResourceName::new(word).map_err(|e| TraceError::parse(line, format!("invalid resource: {e}")))
}

fn workload(word: &str, line: usize) -> Result<CloudWorkload, TraceError> {
    CloudWorkload::new(word).map_err(|e| TraceError::parse(line, format!("invalid workload: {e}")))
}

fn parse_line(line: usize, words: &[&str]) -> Result<ReplayCommand, TraceError> {
    let (args, expect) = match words {
        [head @ .., "EXPECT", report] => {
            let report = report
                .parse::<Report>()
                .map_err(|e| TraceError::parse(line, e.to_string()))?;
            (head, Some(report))
        }
        _ => (words, None),
    };
    let op = match args {
        ["INIT"] => ReplayOp::Init,
        ["ADD", res, wl] => ReplayOp::Add(resource(res, line)?, workload(wl, line)?),
        ["FIND", res] => ReplayOp::Find(resource(res, line)?),
        ["MAP", wl] => ReplayOp::Map(workload(wl, line)?),
        ["INIT", ..] => return Err(TraceError::parse(line, "usage: INIT")),
        ["ADD", ..] => {
            return Err(TraceError::parse(
                line,
                "usage: ADD <resource> <workload> [EXPECT <REPORT>]",
            ))
        }
        ["FIND", ..] => return Err(TraceError::parse(line, "usage: FIND <resource> [EXPECT <REPORT>]")),
        ["MAP", ..] => return Err(TraceError::parse(line, "usage: MAP <workload> [EXPECT <REPORT>]")),
        [other, ..] => return Err(TraceError::parse(line, format!("unknown command {other:?}"))),
        [] => return Err(TraceError::parse(line, "missing command before EXPECT")),
    };
    if matches!(op, ReplayOp::Init) && expect.is_some() {
        return Err(TraceError::parse(line, "usage: INIT"));
    }
    Ok(ReplayCommand { line, op, expect })
}

pub fn parse_script(bytes: &[u8]) -> Result<Vec<ReplayCommand>, TraceError> {
    let mut commands = Vec::new();
    for (line, text) in lines(bytes)? {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        commands.push(parse_line(line, &words)?);
    }
    Ok(commands)
}

/// Executes `commands` in order, starting from the empty state.
///
/// Stops at the first command whose report differs from its `EXPECT`
/// clause.
pub fn run_replay(commands: &[ReplayCommand]) -> Result<ReplayRun, TraceError> {
    let mut state = AllocationState::init();
    let mut lines = Vec::with_capacity(commands.len());
    for cmd in commands {
        let (next, report, payload) = match &cmd.op {
            ReplayOp::Init => (AllocationState::init(), Report::Ok, None),
            ReplayOp::Add(r, w) => {
                let out = state.add(r.clone(), w.clone());
                (out.state, out.report, out.payload)
            }
            ReplayOp::Find(r) => {
                let out = state.find(r);
                (out.state, out.report, out.payload)
            }
            ReplayOp::Map(w) => {
                let out = state.map_query(w);
                (out.state, out.report, out.payload)
            }
        };
        state = next;
        lines.push(ReportLine {
            line: cmd.line,
            report,
            payload,
        });
        if let Some(expected) = cmd.expect {
            if expected != report {
                return Err(TraceError::ExpectationFailed {
                    line: cmd.line,
                    expected,
                    actual: report,
                    completed: lines,
                });
            }
        }
    }
    Ok(ReplayRun { state, lines })
}
