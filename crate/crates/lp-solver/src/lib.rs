//! Self-contained LP/MILP solver: dense revised simplex with bounded
//! variables plus best-first branch-and-bound over binary variables.
//!
//! Built for dispatch-sized models (a few thousand variables and rows).
//! Results are deterministic: identical problems and options produce
//! identical solutions at any call site.

mod branch_bound;
mod problem;
mod simplex;

pub mod brute;

use std::time::Instant;

pub use problem::{
    verify_solution, Constraint, LinearProblem, ProblemError, Relation, Solution, SolveError,
    SolveOptions, SolveStatus,
};

/// Single entry point so external MILP backends can stand in for the bundled
/// engine without touching callers.
pub trait Solver {
    fn solve(&self, problem: &LinearProblem, options: &SolveOptions) -> Result<Solution, SolveError>;
}

/// The bundled simplex + branch-and-bound engine.
#[derive(Debug, Default, Clone, Copy)]
pub struct BundledSolver;

impl Solver for BundledSolver {
    fn solve(&self, problem: &LinearProblem, options: &SolveOptions) -> Result<Solution, SolveError> {
        if problem.binaries().is_empty() {
            solve_lp(problem, options)
        } else {
            solve_milp(problem, options)
        }
    }
}

/// Solves a pure LP. Problems with binary flags are rejected.
pub fn solve_lp(problem: &LinearProblem, options: &SolveOptions) -> Result<Solution, SolveError> {
    problem.validate()?;
    if !problem.binaries().is_empty() {
        return Err(SolveError::BinariesPresent);
    }
    let deadline = Instant::now() + options.time_limit;
    let result = simplex::Simplex::solve(problem, Some(deadline)).map_err(|e| match e {
        simplex::RunError::IterationLimit(n) => SolveError::IterationLimit(n),
    })?;
    let solution = match result.outcome {
        simplex::LpOutcome::Optimal => {
            verify_solution(problem, &result.values, options.feasibility_tolerance.max(1e-7))
                .map_err(SolveError::Verification)?;
            Solution {
                status: SolveStatus::Optimal,
                values: result.values,
                objective_value: result.objective,
                achieved_gap: Some(0.0),
                infeasible_row: None,
                simplex_iterations: result.iterations,
                nodes_explored: 0,
            }
        }
        simplex::LpOutcome::Infeasible => Solution {
            status: SolveStatus::Infeasible,
            values: Vec::new(),
            objective_value: f64::NAN,
            achieved_gap: None,
            infeasible_row: result.infeasible_row,
            simplex_iterations: result.iterations,
            nodes_explored: 0,
        },
        simplex::LpOutcome::Unbounded => Solution {
            status: SolveStatus::Unbounded,
            values: Vec::new(),
            objective_value: f64::NAN,
            achieved_gap: None,
            infeasible_row: None,
            simplex_iterations: result.iterations,
            nodes_explored: 0,
        },
        simplex::LpOutcome::TimeLimit => {
            let (values, objective_value) = if result.feasible {
                (result.values, result.objective)
            } else {
                (Vec::new(), f64::NAN)
            };
            Solution {
                status: SolveStatus::TimeLimit,
                values,
                objective_value,
                achieved_gap: None,
                infeasible_row: None,
                simplex_iterations: result.iterations,
                nodes_explored: 0,
            }
        }
    };
    Ok(solution)
}

/// Solves a MILP by branch-and-bound; with no binaries this reduces to
/// `solve_lp` exactly.
pub fn solve_milp(problem: &LinearProblem, options: &SolveOptions) -> Result<Solution, SolveError> {
    problem.validate()?;
    if problem.binaries().is_empty() {
        return solve_lp(problem, options);
    }
    let solution = branch_bound::branch_and_bound(problem, options)?;
    if solution.has_values() {
        verify_solution(problem, &solution.values, options.feasibility_tolerance.max(1e-7))
            .map_err(SolveError::Verification)?;
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn single_constraint_lp() {
        // minimize x subject to x >= 3
        let mut p = LinearProblem::new(1);
        p.set_objective_coeff(0, 1.0);
        p.add_constraint(vec![(0, 1.0)], Relation::Ge, 3.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.values[0] - 3.0).abs() < 1e-9);
        assert!((s.objective_value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_vertex_on_facet() {
        // minimize -x - y s.t. x + y <= 1, x,y >= 0: optimum -1 on the facet.
        let mut p = LinearProblem::new(2);
        p.set_objective_coeff(0, -1.0);
        p.set_objective_coeff(1, -1.0);
        p.add_constraint(vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective_value + 1.0).abs() < 1e-9);
        assert!((s.values[0] + s.values[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        // x <= 1 and x >= 2
        let mut p = LinearProblem::new(1);
        p.set_objective_coeff(0, 1.0);
        p.add_constraint(vec![(0, 1.0)], Relation::Le, 1.0);
        p.add_constraint(vec![(0, 1.0)], Relation::Ge, 2.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
        assert!(s.infeasible_row.is_some());
    }

    #[test]
    fn detects_unbounded() {
        // minimize -x, x >= 0, no upper limit
        let mut p = LinearProblem::new(1);
        p.set_objective_coeff(0, -1.0);
        p.add_constraint(vec![(0, 1.0)], Relation::Ge, 0.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Unbounded);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // minimize x + y s.t. x - y = -2, y <= 3 -> x = 0 infeasible? x,y >= 0:
        // x = y - 2, minimized at y = 2, x = 0, objective 2.
        let mut p = LinearProblem::new(2);
        p.set_objective_coeff(0, 1.0);
        p.set_objective_coeff(1, 1.0);
        p.add_constraint(vec![(0, 1.0), (1, -1.0)], Relation::Eq, -2.0);
        p.add_constraint(vec![(1, 1.0)], Relation::Le, 3.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective_value - 2.0).abs() < 1e-9, "{}", s.objective_value);
    }

    #[test]
    fn respects_variable_bounds() {
        // minimize x with x in [-5, -1]: free lower bound below zero.
        let mut p = LinearProblem::new(1);
        p.set_objective_coeff(0, 1.0);
        p.set_bounds(0, -5.0, -1.0);
        let s = solve_lp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.values[0] + 5.0).abs() < 1e-9);
    }

    #[test]
    fn two_item_knapsack() {
        // maximize 3a + 2b s.t. a + b <= 1, binary: a = 1, b = 0, value 3.
        let mut p = LinearProblem::new(2);
        p.set_objective_coeff(0, -3.0);
        p.set_objective_coeff(1, -2.0);
        p.add_constraint(vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.0);
        p.mark_binary(0);
        p.mark_binary(1);
        let s = solve_milp(&p, &options()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective_value + 3.0).abs() < 1e-9);
        assert!((s.values[0] - 1.0).abs() < 1e-7);
        assert!(s.values[1].abs() < 1e-7);
    }

    #[test]
    fn milp_without_binaries_matches_lp() {
        let mut p = LinearProblem::new(2);
        p.set_objective_coeff(0, -1.0);
        p.set_objective_coeff(1, -2.0);
        p.add_constraint(vec![(0, 1.0), (1, 1.0)], Relation::Le, 4.0);
        p.add_constraint(vec![(0, 1.0)], Relation::Le, 3.0);
        let lp = solve_lp(&p, &options()).unwrap();
        let milp = solve_milp(&p, &options()).unwrap();
        assert_eq!(lp.status, milp.status);
        assert_eq!(lp.values, milp.values);
        assert_eq!(lp.objective_value, milp.objective_value);
    }

    #[test]
    fn solve_lp_rejects_binaries() {
        let mut p = LinearProblem::new(1);
        p.mark_binary(0);
        assert!(matches!(
            solve_lp(&p, &options()),
            Err(SolveError::BinariesPresent)
        ));
    }

    #[test]
    fn malformed_problem_names_offending_row() {
        let mut p = LinearProblem::new(1);
        p.add_constraint(vec![(0, 1.0)], Relation::Le, 1.0);
        p.add_constraint(vec![(7, 1.0)], Relation::Le, 1.0);
        match solve_lp(&p, &options()) {
            Err(SolveError::Problem(ProblemError::IndexOutOfRange { row, var, .. })) => {
                assert_eq!(row, 1);
                assert_eq!(var, 7);
            }
            other => panic!("expected index error, got {:?}", other.map(|s| s.status)),
        }
    }

    #[test]
    fn determinism_repeat_solves() {
        let mut p = LinearProblem::new(4);
        for j in 0..4 {
            p.set_objective_coeff(j, 1.0 + j as f64 * 0.5);
        }
        p.add_constraint(vec![(0, 1.0), (1, 2.0), (2, 1.0)], Relation::Ge, 3.0);
        p.add_constraint(vec![(1, 1.0), (3, 1.0)], Relation::Ge, 1.0);
        p.add_constraint(vec![(0, 1.0), (3, 2.0)], Relation::Le, 5.0);
        let a = solve_lp(&p, &options()).unwrap();
        let b = solve_lp(&p, &options()).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.objective_value, b.objective_value);
        assert_eq!(a.simplex_iterations, b.simplex_iterations);
    }

    #[test]
    fn lp_format_dump_lists_sections() {
        let mut p = LinearProblem::new(2);
        p.set_objective_coeff(0, 2.0);
        p.add_constraint(vec![(0, 1.0), (1, -1.0)], Relation::Ge, 0.5);
        p.set_bounds(1, 0.0, 1.0);
        p.mark_binary(1);
        let text = p.to_lp_format();
        for needle in ["Minimize", "Subject To", "Bounds", "Binaries", "End"] {
            assert!(text.contains(needle), "missing {needle} in:\n{text}");
        }
        assert!(text.contains(">= 0.5"));
    }
}
