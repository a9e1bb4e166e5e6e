//! Best-first branch-and-bound over binary variables.
//!
//! Nodes are ordered by relaxation bound (then by creation id, so runs are
//! reproducible). Branching picks the most fractional binary, ties broken by
//! lowest variable index. Each node re-solves its LP relaxation from scratch;
//! at desk scale the tree stays small because the relaxations are tight.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::problem::{LinearProblem, Solution, SolveError, SolveOptions, SolveStatus};
use crate::simplex::{LpOutcome, Simplex};

struct Node {
    bound: f64,
    id: u64,
    values: Vec<f64>,
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap; invert so the lowest bound pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

pub(crate) fn branch_and_bound(
    problem: &LinearProblem,
    options: &SolveOptions,
) -> Result<Solution, SolveError> {
    let deadline = Instant::now() + options.time_limit;
    let binaries: Vec<usize> = problem.binaries().iter().copied().collect();
    let tol = options.feasibility_tolerance;

    let mut iterations: u64 = 0;
    let mut nodes_explored: u64 = 0;

    let root = Simplex::solve(problem, Some(deadline)).map_err(|e| match e {
        crate::simplex::RunError::IterationLimit(n) => SolveError::IterationLimit(n),
    })?;
    iterations += root.iterations;
    match root.outcome {
        LpOutcome::Infeasible => {
            return Ok(Solution {
                status: SolveStatus::Infeasible,
                values: Vec::new(),
                objective_value: f64::NAN,
                achieved_gap: None,
                infeasible_row: root.infeasible_row,
                simplex_iterations: iterations,
                nodes_explored: 1,
            });
        }
        LpOutcome::Unbounded => {
            return Ok(Solution {
                status: SolveStatus::Unbounded,
                values: Vec::new(),
                objective_value: f64::NAN,
                achieved_gap: None,
                infeasible_row: None,
                simplex_iterations: iterations,
                nodes_explored: 1,
            });
        }
        LpOutcome::TimeLimit => {
            return Ok(Solution {
                status: SolveStatus::TimeLimit,
                values: Vec::new(),
                objective_value: f64::NAN,
                achieved_gap: None,
                infeasible_row: None,
                simplex_iterations: iterations,
                nodes_explored: 1,
            });
        }
        LpOutcome::Optimal => {}
    }

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut next_id: u64 = 0;

    let root_node = Node {
        bound: root.objective,
        id: next_id,
        values: root.values,
        fixings: Vec::new(),
    };
    next_id += 1;

    if most_fractional(&binaries, &root_node.values, tol).is_some() {
        heap.push(root_node);
    } else {
        // Root relaxation already integral.
        record_incumbent(problem, root_node.values, root_node.bound, tol, &mut incumbent)?;
    }

    let gap_of = |inc: f64, bound: f64| -> f64 {
        let denom = inc.abs().max(1e-9);
        ((inc - bound) / denom).max(0.0)
    };

    let final_gap;
    let final_status;
    loop {
        // Global bound: the smallest bound still open.
        let best_open = heap.peek().map(|n| n.bound);
        match (&incumbent, best_open) {
            (Some((obj, _)), Some(bound)) => {
                let gap = gap_of(*obj, bound);
                if gap <= options.gap_tolerance {
                    final_gap = gap;
                    final_status = if gap <= 1e-12 {
                        SolveStatus::Optimal
                    } else {
                        SolveStatus::FeasibleWithinGap
                    };
                    break;
                }
            }
            (Some(_), None) => {
                final_gap = 0.0;
                final_status = SolveStatus::Optimal;
                break;
            }
            (None, None) => {
                // Every branch was infeasible.
                return Ok(Solution {
                    status: SolveStatus::Infeasible,
                    values: Vec::new(),
                    objective_value: f64::NAN,
                    achieved_gap: None,
                    infeasible_row: root.infeasible_row,
                    simplex_iterations: iterations,
                    nodes_explored,
                });
            }
            (None, Some(_)) => {}
        }

        if Instant::now() >= deadline {
            let (status, gap) = match &incumbent {
                Some((obj, _)) => (
                    SolveStatus::TimeLimit,
                    best_open.map(|b| gap_of(*obj, b)),
                ),
                None => (SolveStatus::TimeLimit, None),
            };
            let (objective_value, values) = match incumbent {
                Some((obj, vals)) => (obj, vals),
                None => (f64::NAN, Vec::new()),
            };
            return Ok(Solution {
                status,
                values,
                objective_value,
                achieved_gap: gap,
                infeasible_row: None,
                simplex_iterations: iterations,
                nodes_explored,
            });
        }

        let node = heap.pop().expect("loop invariant: heap non-empty here");
        if let Some((obj, _)) = &incumbent {
            if node.bound >= *obj - 1e-12 * obj.abs().max(1.0) {
                continue; // cannot improve on the incumbent
            }
        }
        nodes_explored += 1;

        let branch_var = most_fractional(&binaries, &node.values, tol)
            .expect("only fractional nodes are queued");

        for fix_value in [0.0, 1.0] {
            // The variable's own bounds may already exclude one integer value.
            if fix_value < problem.lower()[branch_var] - 1e-12
                || fix_value > problem.upper()[branch_var] + 1e-12
            {
                continue;
            }
            let mut child_problem = problem.clone();
            for &(j, v) in &node.fixings {
                child_problem.set_bounds(j, v, v);
            }
            child_problem.set_bounds(branch_var, fix_value, fix_value);

            let child = Simplex::solve(&child_problem, Some(deadline)).map_err(|e| match e {
                crate::simplex::RunError::IterationLimit(n) => SolveError::IterationLimit(n),
            })?;
            iterations += child.iterations;
            match child.outcome {
                LpOutcome::Infeasible => continue,
                LpOutcome::Unbounded => {
                    return Ok(Solution {
                        status: SolveStatus::Unbounded,
                        values: Vec::new(),
                        objective_value: f64::NAN,
                        achieved_gap: None,
                        infeasible_row: None,
                        simplex_iterations: iterations,
                        nodes_explored,
                    });
                }
                LpOutcome::TimeLimit => continue, // deadline handled at loop head
                LpOutcome::Optimal => {}
            }

            if let Some((obj, _)) = &incumbent {
                if child.objective >= *obj - 1e-12 * obj.abs().max(1.0) {
                    continue;
                }
            }
            let mut fixings = node.fixings.clone();
            fixings.push((branch_var, fix_value));
            if most_fractional(&binaries, &child.values, tol).is_none() {
                record_incumbent(problem, child.values, child.objective, tol, &mut incumbent)?;
            } else {
                heap.push(Node {
                    bound: child.objective,
                    id: next_id,
                    values: child.values,
                    fixings,
                });
                next_id += 1;
            }
        }
    }

    let (objective_value, values) = incumbent.expect("status implies incumbent");
    Ok(Solution {
        status: final_status,
        values,
        objective_value,
        achieved_gap: Some(final_gap),
        infeasible_row: None,
        simplex_iterations: iterations,
        nodes_explored,
    })
}

/// Most fractional binary (distance to the nearest integer), lowest index on ties.
fn most_fractional(binaries: &[usize], values: &[f64], tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &j in binaries {
        let v = values[j];
        let dist = (v - v.round()).abs();
        if dist <= tol {
            continue;
        }
        match best {
            Some((_, d)) if dist <= d + 1e-12 => {}
            _ => best = Some((j, dist)),
        }
    }
    best.map(|(j, _)| j)
}

fn record_incumbent(
    problem: &LinearProblem,
    values: Vec<f64>,
    objective: f64,
    tol: f64,
    incumbent: &mut Option<(f64, Vec<f64>)>,
) -> Result<(), SolveError> {
    crate::problem::verify_solution(problem, &values, tol.max(1e-7))
        .map_err(SolveError::Verification)?;
    match incumbent {
        Some((obj, _)) if objective >= *obj - 1e-12 * obj.abs().max(1.0) => {}
        _ => *incumbent = Some((objective, values)),
    }
    Ok(())
}
