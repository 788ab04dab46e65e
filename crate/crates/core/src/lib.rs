//! Workload/resource mapping for IaaS clouds.
//!
//! Three pieces, usable on their own or chained:
//!
//! - [`allocation`]: the workload analyzer state machine. A state holds the
//!   set of available resources and the partial function allocating each one
//!   to a workload; operations return a new state plus a [`Report`].
//! - [`regression`]: simple linear OLS relating a workload measure `w` to a
//!   resource measure `r`, with residuals, SSR and R².
//! - [`matcher`]: turns fitted models into a predicted-cost matrix and picks
//!   the minimum-cost one-to-one assignment.
//!
//! [`trace_io`] holds the text formats (observation CSV, replay scripts,
//! snapshots, rendered tables).

pub mod allocation;
pub mod matcher;
pub mod names;
pub mod regression;
pub mod trace_io;

pub use allocation::{init, AllocationState, OpOutcome, Payload, Report};
pub use matcher::{
    assign, assign_with, build_cost_matrix, matrix_to_state, state_to_matrix, AssignmentMatrix,
    CostMatrix, MatchError, ModelTable, Padding,
};
pub use names::{CloudWorkload, ResourceName, TokenError};
pub use regression::{
    fit, goodness_of_fit, predict, residuals, ssr, Dataset, Observation, RegressionError,
    RegressionModel,
};
pub use trace_io::TraceError;
