//! Minimum-cost perfect matching on a dense square matrix.
//!
//! Kuhn–Munkres with row/column potentials, O(n³). The potentials are kept
//! so a second pass can pick the lexicographically smallest optimal matching
//! out of the equality subgraph (edges with zero reduced cost).

use std::collections::VecDeque;

/// Optimal assignment of a square cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// `columns[i]` is the column matched to row `i`.
    pub columns: Vec<usize>,
    pub total: f64,
}

struct Potentials {
    columns: Vec<usize>,
    u: Vec<f64>,
    v: Vec<f64>,
}

fn kuhn_munkres(costs: &[Vec<f64>]) -> Potentials {
    let n = costs.len();
    // 1-based, index 0 is the virtual root column
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];

        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }

            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut columns = vec![0usize; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            columns[row_of[j] - 1] = j - 1;
        }
    }
    Potentials {
        columns,
        u: u[1..].to_vec(),
        v: v[1..].to_vec(),
    }
}

fn total(costs: &[Vec<f64>], columns: &[usize]) -> f64 {
    columns.iter().enumerate().map(|(i, &j)| costs[i][j]).sum()
}

/// Rewrites `columns` into the lexicographically smallest perfect matching
/// of the graph `tight`, keeping it perfect at every step.
fn lexicographic_rematch(tight: &[Vec<bool>], columns: &mut [usize]) {
    let n = columns.len();
    let mut row_of = vec![0usize; n];
    for (i, &j) in columns.iter().enumerate() {
        row_of[j] = i;
    }

    for i in 0..n {
        let current = columns[i];
        for target in 0..current {
            // Row `start` holds `target`; it must reach the column `i` frees
            // through an alternating path over rows that are not fixed yet.
            let start = row_of[target];
            if !tight[i][target] || start < i {
                continue;
            }
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut seen_col = vec![false; n];
            seen_col[target] = true;
            let mut queue = VecDeque::from([start]);
            let mut reached = None;

            'search: while let Some(row) = queue.pop_front() {
                for col in 0..n {
                    if seen_col[col] || !tight[row][col] {
                        continue;
                    }
                    if col == current {
                        reached = Some((row, col));
                        break 'search;
                    }
                    let next = row_of[col];
                    if next <= i {
                        continue;
                    }
                    seen_col[col] = true;
                    parent[next] = Some((row, col));
                    queue.push_back(next);
                }
            }

            if let Some((mut row, mut col)) = reached {
                loop {
                    let prev = parent[row];
                    columns[row] = col;
                    row_of[col] = row;
                    match prev {
                        Some((prev_row, prev_col)) => {
                            col = prev_col;
                            row = prev_row;
                        }
                        None => break,
                    }
                }
                columns[i] = target;
                row_of[target] = i;
                break;
            }
        }
    }
}

/// Solves the assignment problem for a square matrix of finite costs.
///
/// Among all optimal matchings the one with the lexicographically smallest
/// column sequence is returned.
pub fn solve(costs: &[Vec<f64>]) -> Solution {
    let n = costs.len();
    if n == 0 {
        return Solution {
            columns: Vec::new(),
            total: 0.0,
        };
    }
    debug_assert!(costs.iter().all(|row| row.len() == n));

    let Potentials { columns, u, v } = kuhn_munkres(costs);
    let optimum = total(costs, &columns);

    let scale = costs
        .iter()
        .flatten()
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let eps = 1e-12 * scale * n as f64;
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| costs[i][j] - u[i] - v[j] <= eps).collect())
        .collect();

    let mut lex = columns.clone();
    lexicographic_rematch(&tight, &mut lex);
    let lex_total = total(costs, &lex);

    // Tolerance can admit a nearly tight edge; never trade optimality for order.
    if lex_total <= optimum {
        Solution {
            columns: lex,
            total: lex_total,
        }
    } else {
        Solution {
            columns,
            total: optimum,
        }
    }
}
