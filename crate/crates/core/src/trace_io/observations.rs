//! Observation CSV.
//!
//! ```text
//! resource,workload,w,r
//! R1,W1,1,2
//! R1,W1,2,3
//! ```
//!
//! UTF-8, LF line endings, no quoting. Parsing stops at the first bad line.

use std::collections::BTreeMap;

use super::TraceError;
use crate::names::{CloudWorkload, ResourceName};
use crate::regression::{Dataset, Observation};

pub const HEADER: &str = "resource,workload,w,r";

#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRecord {
    pub resource: ResourceName,
    pub workload: CloudWorkload,
    pub w: f64,
    pub r: f64,
}

pub type ObservationTable = BTreeMap<(ResourceName, CloudWorkload), Dataset>;

/// Splits `text` into numbered lines, requiring UTF-8 and bare LF endings.
pub(crate) fn lines(bytes: &[u8]) -> Result<Vec<(usize, &str)>, TraceError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        TraceError::parse(line, "invalid UTF-8")
    })?;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (idx, line) in body.split('\n').enumerate() {
        if line.contains('\r') {
            return Err(TraceError::parse(idx + 1, "carriage return (expected LF line endings)"));
        }
        out.push((idx + 1, line));
    }
    Ok(out)
}

fn number(field: &str, line: usize) -> Result<f64, TraceError> {
    let value: f64 = field
        .parse()
        .map_err(|_| TraceError::parse(line, "invalid number"))?;
    if !value.is_finite() {
        return Err(TraceError::parse(line, "non-finite number"));
    }
    Ok(value)
}

/// Parses every record, in file order.
pub fn parse_records(bytes: &[u8]) -> Result<Vec<ObservationRecord>, TraceError> {
    let lines = lines(bytes)?;
    let mut iter = lines.into_iter();
    match iter.next() {
        Some((_, HEADER)) => {}
        Some((line, _)) => {
            return Err(TraceError::parse(line, format!("header must be exactly `{HEADER}`")))
        }
        None => return Err(TraceError::parse(1, "missing header")),
    }

    let mut records = Vec::new();
    for (line, text) in iter {
        let fields: Vec<&str> = text.split(',').collect();
        if fields.len() != 4 {
            return Err(TraceError::parse(
                line,
                format!("wrong column count: expected 4, got {}", fields.len()),
            ));
        }
        let resource = ResourceName::new(fields[0])
            .map_err(|e| TraceError::parse(line, format!("invalid resource: {e}")))?;
        let workload = CloudWorkload::new(fields[1])
            .map_err(|e| TraceError::parse(line, format!("invalid workload: {e}")))?;
        let w = number(fields[2], line)?;
        let r = number(fields[3], line)?;
        records.push(ObservationRecord {
            resource,
            workload,
            w,
            r,
        });
    }
    Ok(records)
}

/// Groups records by (resource, workload), keeping file order in each group.
pub fn parse_observations(bytes: &[u8]) -> Result<ObservationTable, TraceError> {
    let mut table = ObservationTable::new();
    for rec in parse_records(bytes)? {
        // finite by construction, push cannot fail
        let _ = table
            .entry((rec.resource, rec.workload))
            .or_default()
            .push(Observation { w: rec.w, r: rec.r });
    }
    Ok(table)
}
