//! Executable model of the workload analyzer state machine.
//!
//! The state is a pair of observations: the set of available resources and
//! a partial function from resources to the workload each one is allocated
//! to. The schema invariant ties them together:
//!
//! ```text
//! availableResource = dom allocation
//! ```
//!
//! Every operation is a pure function from a state (plus inputs) to an
//! [`OpOutcome`]: the state after the operation, a [`Report`] and an optional
//! output. Operations that do not change the state return a clone of the
//! input, so "the state is unchanged" is checkable by structural equality.
//!
//! The robust operations never overwrite an allocation. A failed operation
//! always hands back the input state untouched.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::names::{CloudWorkload, ResourceName};

/// Outcome of a robust operation (the `REPORT` free type).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Report {
    Ok,
    AlreadyMapped,
    NotMapped,
}

impl Report {
    pub const ALL: [Report; 3] = [Report::Ok, Report::AlreadyMapped, Report::NotMapped];

    pub fn as_str(self) -> &'static str {
        match self {
            Report::Ok => "OK",
            Report::AlreadyMapped => "AlreadyMapped",
            Report::NotMapped => "NotMapped",
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown report value {0:?} (expected OK, AlreadyMapped or NotMapped)")]
pub struct UnknownReport(pub String);

impl FromStr for Report {
    type Err = UnknownReport;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Report::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| UnknownReport(s.to_owned()))
    }
}

/// Output carried by an operation, if it has one (`workload!` or `item!`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Workload(CloudWorkload),
    Resources(BTreeSet<ResourceName>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpOutcome {
    pub state: AllocationState,
    pub report: Report,
    pub payload: Option<Payload>,
}

impl OpOutcome {
    fn unchanged(state: &AllocationState, report: Report) -> Self {
        OpOutcome {
            state: state.clone(),
            report,
            payload: None,
        }
    }

    pub fn workload(&self) -> Option<&CloudWorkload> {
        match &self.payload {
            Some(Payload::Workload(w)) => Some(w),
            _ => None,
        }
    }

    pub fn resources(&self) -> Option<&BTreeSet<ResourceName>> {
        match &self.payload {
            Some(Payload::Resources(set)) => Some(set),
            _ => None,
        }
    }
}

/// The analyzer state. Both observations are stored so that the schema
/// invariant is a real property of the operations rather than a tautology
/// of the representation; see [`AllocationState::satisfies_invariant`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AllocationState {
    available: BTreeSet<ResourceName>,
    allocation: BTreeMap<ResourceName, CloudWorkload>,
}

/// The initial state: no resources known, empty allocation.
pub fn init() -> AllocationState {
    AllocationState::init()
}

impl AllocationState {
    pub fn init() -> Self {
        AllocationState {
            available: BTreeSet::new(),
            allocation: BTreeMap::new(),
        }
    }

    /// Builds a state from resource/workload pairs. Returns `None` if a
    /// resource occurs twice.
    pub fn from_pairs<I>(pairs: I) -> Option<Self>
    where
        I: IntoIterator<Item = (ResourceName, CloudWorkload)>,
    {
        let mut state = Self::init();
        for (resource, workload) in pairs {
            let outcome = state.add(resource, workload);
            if outcome.report != Report::Ok {
                return None;
            }
            state = outcome.state;
        }
        Some(state)
    }

    /// Allocates `resource` to `workload`.
    ///
    /// Succeeds only when `resource` is not yet known; otherwise reports
    /// `AlreadyMapped` and leaves the state as it was.
    pub fn add(&self, resource: ResourceName, workload: CloudWorkload) -> OpOutcome {
        if self.available.contains(&resource) {
            return OpOutcome::unchanged(self, Report::AlreadyMapped);
        }
        let mut next = self.clone();
        next.available.insert(resource.clone());
        next.allocation.insert(resource, workload);
        OpOutcome {
            state: next,
            report: Report::Ok,
            payload: None,
        }
    }

    /// Looks up the workload allocated to `resource`.
    pub fn find(&self, resource: &ResourceName) -> OpOutcome {
        if !self.available.contains(resource) {
            return OpOutcome::unchanged(self, Report::NotMapped);
        }
        match self.allocation.get(resource) {
            Some(workload) => OpOutcome {
                state: self.clone(),
                report: Report::Ok,
                payload: Some(Payload::Workload(workload.clone())),
            },
            // unreachable while the invariant holds
            None => OpOutcome::unchanged(self, Report::NotMapped),
        }
    }

    /// All resources whose allocation equals `rank`. Never fails.
    pub fn map_query(&self, rank: &CloudWorkload) -> OpOutcome {
        let item = self
            .available
            .iter()
            .filter(|n| self.allocation.get(*n) == Some(rank))
            .cloned()
            .collect();
        OpOutcome {
            state: self.clone(),
            report: Report::Ok,
            payload: Some(Payload::Resources(item)),
        }
    }

    pub fn available(&self) -> &BTreeSet<ResourceName> {
        &self.available
    }

    pub fn allocation(&self) -> &BTreeMap<ResourceName, CloudWorkload> {
        &self.allocation
    }

    pub fn len(&self) -> usize {
        self.allocation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allocation.is_empty()
    }

    /// `availableResource = dom allocation`.
    pub fn satisfies_invariant(&self) -> bool {
        self.available.len() == self.allocation.len()
            && self.available.iter().eq(self.allocation.keys())
    }

    /// True when no two resources share a workload.
    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<&CloudWorkload> = self.allocation.values().collect();
        distinct.len() == self.allocation.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(s: &str) -> ResourceName {
        s.parse().unwrap()
    }

    fn wl(s: &str) -> CloudWorkload {
        s.parse().unwrap()
    }

    fn worked_example() -> AllocationState {
        let mut s = init();
        for (r, w) in [
            ("Res1", "Cloudworkload3"),
            ("Res2", "Cloudworkload2"),
            ("Res3", "Cloudworkload1"),
        ] {
            let out = s.add(res(r), wl(w));
            assert_eq!(out.report, Report::Ok);
            s = out.state;
        }
        s
    }

    #[test]
    fn init_is_empty() {
        let s = init();
        assert!(s.available().is_empty());
        assert!(s.allocation().is_empty());
        assert!(s.satisfies_invariant());
    }

    #[test]
    fn init_then_queries() {
        let s = init();
        let out = s.map_query(&wl("Anything"));
        assert_eq!(out.report, Report::Ok);
        assert_eq!(out.resources(), Some(&BTreeSet::new()));

        let out = s.find(&res("Res1"));
        assert_eq!(out.report, Report::NotMapped);
        assert_eq!(out.state, s);
        assert_eq!(out.payload, None);
    }

    #[test]
    fn add_to_empty_state() {
        let out = init().add(res("Res1"), wl("Cloudworkload3"));
        assert_eq!(out.report, Report::Ok);
        assert_eq!(out.payload, None);
        assert_eq!(out.state.allocation().get(&res("Res1")), Some(&wl("Cloudworkload3")));
        assert!(out.state.satisfies_invariant());
    }

    #[test]
    fn duplicate_add_is_rejected_without_overwrite() {
        let s = init().add(res("Res1"), wl("Cloudworkload3")).state;
        let out = s.add(res("Res1"), wl("CloudworkloadX"));
        assert_eq!(out.report, Report::AlreadyMapped);
        assert_eq!(out.state, s);
        assert_eq!(out.state.find(&res("Res1")).workload(), Some(&wl("Cloudworkload3")));
    }

    #[test]
    fn worked_example_observations() {
        let s = worked_example();
        let expected: BTreeSet<_> = ["Res1", "Res2", "Res3"].iter().map(|r| res(r)).collect();
        assert_eq!(s.available(), &expected);
        assert!(s.satisfies_invariant());

        let out = s.find(&res("Res2"));
        assert_eq!(out.report, Report::Ok);
        assert_eq!(out.workload(), Some(&wl("Cloudworkload2")));
        assert_eq!(out.state, s);

        let out = s.map_query(&wl("Cloudworkload2"));
        assert_eq!(out.resources(), Some(&BTreeSet::from([res("Res2")])));
        assert!(s.is_injective());
    }

    #[test]
    fn find_unknown_resource() {
        let out = init().find(&res("Res9"));
        assert_eq!(out.report, Report::NotMapped);
    }

    #[test]
    fn map_query_many_to_one() {
        let s = AllocationState::from_pairs([(res("Res1"), wl("W")), (res("Res2"), wl("W"))]).unwrap();
        assert_eq!(
            s.map_query(&wl("W")).resources(),
            Some(&BTreeSet::from([res("Res1"), res("Res2")]))
        );
        assert_eq!(s.map_query(&wl("W9")).resources(), Some(&BTreeSet::new()));
        assert!(!s.is_injective());
    }

    #[test]
    fn from_pairs_rejects_duplicate_resource() {
        assert!(AllocationState::from_pairs([(res("R"), wl("A")), (res("R"), wl("B"))]).is_none());
    }

    #[test]
    fn report_text_round_trip() {
        for r in Report::ALL {
            assert_eq!(r.as_str().parse::<Report>(), Ok(r));
        }
        assert!("ok".parse::<Report>().is_err());
        assert!("already_Mapped".parse::<Report>().is_err());
    }

    #[test]
    fn state_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<AllocationState>();
        check::<OpOutcome>();
    }
}
