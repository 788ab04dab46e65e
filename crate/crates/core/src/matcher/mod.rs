//! Workload–resource mapping.
//!
//! Fitted regression models give a predicted cost for running each workload
//! on each resource at a common demand level. The mapping is the one-to-one
//! assignment minimising total predicted cost, presented as a resource ×
//! workload matrix with at most one mark per row and per column.

pub mod hungarian;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::allocation::AllocationState;
use crate::names::{CloudWorkload, ResourceName};
use crate::regression::RegressionModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchError {
    #[error("no fitted model for {resource}:{workload}")]
    MissingModel {
        resource: ResourceName,
        workload: CloudWorkload,
    },
    #[error("cost matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("allocation is not one-to-one: workload {0} is allocated more than once")]
    NotInjective(CloudWorkload),
    #[error("label {0} is not present in the matrix orders")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("invalid cost matrix: {0}")]
    InvalidCostMatrix(String),
    #[error("invalid assignment matrix: {0}")]
    InvalidAssignment(String),
}

pub type ModelTable = BTreeMap<(ResourceName, CloudWorkload), RegressionModel>;

fn check_unique<T: Ord + ToString>(labels: &[T]) -> Result<(), MatchError> {
    let mut seen = BTreeSet::new();
    for label in labels {
        if !seen.insert(label) {
            return Err(MatchError::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

/// Predicted cost of workload `j` on resource `i`. Labels are sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    resources: Vec<ResourceName>,
    workloads: Vec<CloudWorkload>,
    cost: Vec<Vec<f64>>,
}

impl CostMatrix {
    pub fn new(
        resources: Vec<ResourceName>,
        workloads: Vec<CloudWorkload>,
        cost: Vec<Vec<f64>>,
    ) -> Result<Self, MatchError> {
        if !resources.windows(2).all(|p| p[0] < p[1]) {
            return Err(MatchError::InvalidCostMatrix(
                "resources must be strictly increasing".into(),
            ));
        }
        if !workloads.windows(2).all(|p| p[0] < p[1]) {
            return Err(MatchError::InvalidCostMatrix(
                "workloads must be strictly increasing".into(),
            ));
        }
        if cost.len() != resources.len() {
            return Err(MatchError::InvalidCostMatrix(format!(
                "{} rows for {} resources",
                cost.len(),
                resources.len()
            )));
        }
        for (i, row) in cost.iter().enumerate() {
            if row.len() != workloads.len() {
                return Err(MatchError::InvalidCostMatrix(format!(
                    "row {i} has {} entries for {} workloads",
                    row.len(),
                    workloads.len()
                )));
            }
            if let Some(j) = row.iter().position(|c| !c.is_finite()) {
                return Err(MatchError::InvalidCostMatrix(format!(
                    "entry ({i},{j}) is not finite"
                )));
            }
        }
        Ok(CostMatrix {
            resources,
            workloads,
            cost,
        })
    }

    pub fn resources(&self) -> &[ResourceName] {
        &self.resources
    }

    pub fn workloads(&self) -> &[CloudWorkload] {
        &self.workloads
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.cost
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cost[i][j]
    }

    pub fn is_square(&self) -> bool {
        self.resources.len() == self.workloads.len()
    }
}

/// Evaluates every (resource, workload) model at `w_query`.
pub fn build_cost_matrix(
    models: &ModelTable,
    resources: &[ResourceName],
    workloads: &[CloudWorkload],
    w_query: f64,
) -> Result<CostMatrix, MatchError> {
    if !w_query.is_finite() {
        return Err(MatchError::InvalidCostMatrix(format!(
            "query level {w_query} is not finite"
        )));
    }
    check_unique(resources)?;
    check_unique(workloads)?;
    let mut resources = resources.to_vec();
    let mut workloads = workloads.to_vec();
    resources.sort();
    workloads.sort();

    let mut cost = Vec::with_capacity(resources.len());
    for resource in &resources {
        let mut row = Vec::with_capacity(workloads.len());
        for workload in &workloads {
            let model = models
                .get(&(resource.clone(), workload.clone()))
                .ok_or_else(|| MatchError::MissingModel {
                    resource: resource.clone(),
                    workload: workload.clone(),
                })?;
            row.push(model.predict(w_query));
        }
        cost.push(row);
    }
    CostMatrix::new(resources, workloads, cost)
}

/// A resource × workload marking with at most one mark per row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentMatrix {
    resources: Vec<ResourceName>,
    workloads: Vec<CloudWorkload>,
    marks: BTreeSet<(usize, usize)>,
}

impl AssignmentMatrix {
    pub fn new(
        resources: Vec<ResourceName>,
        workloads: Vec<CloudWorkload>,
        marks: BTreeSet<(usize, usize)>,
    ) -> Result<Self, MatchError> {
        check_unique(&resources)?;
        check_unique(&workloads)?;
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for &(i, j) in &marks {
            if i >= resources.len() || j >= workloads.len() {
                return Err(MatchError::InvalidAssignment(format!(
                    "mark ({i},{j}) outside {}x{}",
                    resources.len(),
                    workloads.len()
                )));
            }
            if !rows.insert(i) {
                return Err(MatchError::InvalidAssignment(format!("row {i} marked twice")));
            }
            if !cols.insert(j) {
                return Err(MatchError::InvalidAssignment(format!("column {j} marked twice")));
            }
        }
        Ok(AssignmentMatrix {
            resources,
            workloads,
            marks,
        })
    }

    pub fn resources(&self) -> &[ResourceName] {
        &self.resources
    }

    pub fn workloads(&self) -> &[CloudWorkload] {
        &self.workloads
    }

    pub fn marks(&self) -> &BTreeSet<(usize, usize)> {
        &self.marks
    }

    pub fn is_marked(&self, i: usize, j: usize) -> bool {
        self.marks.contains(&(i, j))
    }

    /// Marks as (resource, workload) label pairs, in mark order.
    pub fn pairs(&self) -> Vec<(&ResourceName, &CloudWorkload)> {
        self.marks
            .iter()
            .map(|&(i, j)| (&self.resources[i], &self.workloads[j]))
            .collect()
    }

    pub fn is_perfect(&self) -> bool {
        self.resources.len() == self.workloads.len() && self.marks.len() == self.resources.len()
    }

    /// Every row and column carries at most one mark.
    pub fn satisfies_invariant(&self) -> bool {
        let rows: BTreeSet<usize> = self.marks.iter().map(|m| m.0).collect();
        let cols: BTreeSet<usize> = self.marks.iter().map(|m| m.1).collect();
        rows.len() == self.marks.len()
            && cols.len() == self.marks.len()
            && self
                .marks
                .iter()
                .all(|&(i, j)| i < self.resources.len() && j < self.workloads.len())
    }

    /// Sum of `costs` over the marks, looked up by label.
    pub fn total_cost(&self, costs: &CostMatrix) -> Result<f64, MatchError> {
        let mut sum = 0.0;
        for (resource, workload) in self.pairs() {
            let i = costs
                .resources
                .binary_search(resource)
                .map_err(|_| MatchError::UnknownLabel(resource.to_string()))?;
            let j = costs
                .workloads
                .binary_search(workload)
                .map_err(|_| MatchError::UnknownLabel(workload.to_string()))?;
            sum += costs.cost[i][j];
        }
        Ok(sum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    /// Pad rectangular matrices to square with a sentinel cost.
    #[default]
    Sentinel,
    Disabled,
}

/// Optimal one-to-one assignment, padding rectangular inputs.
pub fn assign(costs: &CostMatrix) -> Result<AssignmentMatrix, MatchError> {
    assign_with(costs, Padding::Sentinel)
}

pub fn assign_with(costs: &CostMatrix, padding: Padding) -> Result<AssignmentMatrix, MatchError> {
    let rows = costs.resources.len();
    let cols = costs.workloads.len();
    if rows != cols && padding == Padding::Disabled {
        return Err(MatchError::NonSquare { rows, cols });
    }

    let n = rows.max(cols);
    let max_abs = costs.cost.iter().flatten().fold(0.0f64, |m, c| m.max(c.abs()));
    let sentinel = 1.0 + n as f64 * max_abs;
    let square: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < rows && j < cols {
                        costs.cost[i][j]
                    } else {
                        sentinel
                    }
                })
                .collect()
        })
        .collect();

    let solution = hungarian::solve(&square);
    let marks = solution
        .columns
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < rows && j < cols)
        .map(|(i, &j)| (i, j))
        .collect();
    AssignmentMatrix::new(costs.resources.clone(), costs.workloads.clone(), marks)
}

/// The allocation state whose pairs are exactly the marks of `m`.
pub fn matrix_to_state(m: &AssignmentMatrix) -> AllocationState {
    let mut state = AllocationState::init();
    for (resource, workload) in m.pairs() {
        state = state.add(resource.clone(), workload.clone()).state;
    }
    state
}

/// Lays a one-to-one allocation out on the given row and column orders.
pub fn state_to_matrix(
    s: &AllocationState,
    resources: &[ResourceName],
    workloads: &[CloudWorkload],
) -> Result<AssignmentMatrix, MatchError> {
    check_unique(resources)?;
    check_unique(workloads)?;
    let row_index: BTreeMap<&ResourceName, usize> =
        resources.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let col_index: BTreeMap<&CloudWorkload, usize> =
        workloads.iter().enumerate().map(|(j, w)| (w, j)).collect();

    let mut used = BTreeSet::new();
    let mut marks = BTreeSet::new();
    for (resource, workload) in s.allocation() {
        if !used.insert(workload) {
            return Err(MatchError::NotInjective(workload.clone()));
        }
        let i = *row_index
            .get(resource)
            .ok_or_else(|| MatchError::UnknownLabel(resource.to_string()))?;
        let j = *col_index
            .get(workload)
            .ok_or_else(|| MatchError::UnknownLabel(workload.to_string()))?;
        marks.insert((i, j));
    }
    AssignmentMatrix::new(resources.to_vec(), workloads.to_vec(), marks)
}
