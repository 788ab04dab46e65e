//! Canonical state snapshots.
//!
//! `{"allocation":{"Res1":"Cloudworkload3","Res2":"Cloudworkload2"}}` plus a
//! trailing LF, keys in lexicographic order, no insignificant whitespace.
//! The set of available resources is the key set, so it is not stored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TraceError;
use crate::allocation::AllocationState;
use crate::names::{CloudWorkload, ResourceName};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Snapshot {
    allocation: BTreeMap<String, String>,
}

fn canonical(state: &AllocationState) -> String {
    let snapshot = Snapshot {
        allocation: state
            .allocation()
            .iter()
            .map(|(r, w)| (r.to_string(), w.to_string()))
            .collect(),
    };
    // string keys and values cannot fail to serialize
    let mut text = serde_json::to_string(&snapshot).expect("snapshot serializes");
    text.push('\n');
    text
}

pub fn write_state(state: &AllocationState) -> Vec<u8> {
    canonical(state).into_bytes()
}

/// Inverse of [`write_state`]. Only canonical snapshots are accepted.
pub fn read_state(bytes: &[u8]) -> Result<AllocationState, TraceError> {
    let snapshot: Snapshot =
        serde_json::from_slice(bytes).map_err(|e| TraceError::Snapshot(e.to_string()))?;
    let mut pairs = Vec::with_capacity(snapshot.allocation.len());
    for (r, w) in snapshot.allocation {
        let r = ResourceName::new(r).map_err(|e| TraceError::Snapshot(format!("resource: {e}")))?;
        let w = CloudWorkload::new(w).map_err(|e| TraceError::Snapshot(format!("workload: {e}")))?;
        pairs.push((r, w));
    }
    let state = AllocationState::from_pairs(pairs)
        .ok_or_else(|| TraceError::Snapshot("duplicate resource".into()))?;
    if canonical(&state).as_bytes() != bytes {
        return Err(TraceError::Snapshot("not in canonical form".into()));
    }
    Ok(state)
}
