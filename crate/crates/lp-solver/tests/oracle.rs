//! Solver results cross-checked against brute-force enumeration.

use lp_solver::brute::{enumerate_basic_solutions, enumerate_binary_assignments, BruteOutcome};
use lp_solver::{solve_lp, solve_milp, LinearProblem, Relation, SolveOptions, SolveStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_lp(rng: &mut ChaCha8Rng, vars: usize, rows: usize) -> LinearProblem {
    let mut p = LinearProblem::new(vars);
    for j in 0..vars {
        p.set_objective_coeff(j, rng.gen_range(-5.0..5.0));
        // Finite boxes keep the region bounded so the vertex oracle is complete.
        p.set_bounds(j, 0.0, rng.gen_range(0.5..6.0));
    }
    for _ in 0..rows {
        let mut coeffs = Vec::new();
        for j in 0..vars {
            if rng.gen_bool(0.7) {
                coeffs.push((j, rng.gen_range(-3.0..3.0)));
            }
        }
        if coeffs.is_empty() {
            coeffs.push((rng.gen_range(0..vars), 1.0));
        }
        let relation = match rng.gen_range(0..10) {
            0 => Relation::Eq,
            1..=3 => Relation::Ge,
            _ => Relation::Le,
        };
        let rhs = rng.gen_range(-4.0..8.0);
        p.add_constraint(coeffs, relation, rhs);
    }
    p
}

#[test]
fn lp_matches_vertex_enumeration() {
    let options = SolveOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut optimal = 0;
    let mut infeasible = 0;
    for case in 0..60 {
        let vars = rng.gen_range(2..=6);
        let rows = rng.gen_range(2..=8);
        let p = random_lp(&mut rng, vars, rows);
        let solved = solve_lp(&p, &options).unwrap();
        let oracle = enumerate_basic_solutions(&p, 1e-9);
        match (&solved.status, &oracle) {
            (SolveStatus::Optimal, BruteOutcome::Optimal { objective, .. }) => {
                assert!(
                    (solved.objective_value - objective).abs()
                        <= 1e-7 * objective.abs().max(1.0),
                    "case {case}: solver {} vs oracle {objective}",
                    solved.objective_value
                );
                optimal += 1;
            }
            (SolveStatus::Infeasible, BruteOutcome::Infeasible) => {
                infeasible += 1;
            }
            (status, oracle) => {
                panic!("case {case}: solver {status:?} disagrees with oracle {oracle:?}")
            }
        }
    }
    // The mix should exercise both outcomes.
    assert!(optimal >= 20, "only {optimal} optimal cases");
    assert!(infeasible >= 3, "only {infeasible} infeasible cases");
}

#[test]
fn milp_matches_exhaustive_binary_enumeration() {
    let options = SolveOptions {
        gap_tolerance: 0.0,
        ..SolveOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut optimal = 0;
    for case in 0..25 {
        let cont = rng.gen_range(0..=3);
        let bins = rng.gen_range(2..=8);
        let vars = cont + bins;
        let rows = rng.gen_range(2..=6);
        let mut p = random_lp(&mut rng, vars, rows);
        for j in cont..vars {
            p.mark_binary(j);
        }
        let solved = solve_milp(&p, &options).unwrap();
        let oracle = enumerate_binary_assignments(&p, &options, solve_lp).unwrap();
        match (&solved.status, &oracle) {
            (SolveStatus::Optimal, BruteOutcome::Optimal { objective, .. }) => {
                assert!(
                    (solved.objective_value - objective).abs()
                        <= 1e-7 * objective.abs().max(1.0),
                    "case {case}: solver {} vs oracle {objective}",
                    solved.objective_value
                );
                optimal += 1;
            }
            (SolveStatus::Infeasible, BruteOutcome::Infeasible) => {}
            (status, oracle) => {
                panic!("case {case}: solver {status:?} disagrees with oracle {oracle:?}")
            }
        }
    }
    assert!(optimal >= 10, "only {optimal} optimal cases");
}

#[test]
fn milp_incumbents_are_binary_feasible() {
    let options = SolveOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let mut p = random_lp(&mut rng, 5, 4);
        for j in 2..5 {
            p.mark_binary(j);
        }
        let solved = solve_milp(&p, &options).unwrap();
        if solved.has_values() {
            for &j in p.binaries() {
                let v = solved.values[j];
                assert!(
                    (v - v.round()).abs() <= options.feasibility_tolerance,
                    "binary {j} fractional: {v}"
                );
            }
            lp_solver::verify_solution(&p, &solved.values, 1e-6).unwrap();
        }
    }
}
