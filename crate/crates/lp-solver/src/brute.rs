//! Brute-force reference evaluators used by cross-check tests.
//!
//! These share nothing with the simplex path: basic solutions are enumerated
//! combinatorially and resolved with a plain dense Gaussian elimination, so
//! they can serve as an independent oracle for solver results.

use crate::problem::{LinearProblem, Relation, Solution, SolveError, SolveOptions};

#[derive(Debug, Clone, PartialEq)]
pub enum BruteOutcome {
    Optimal { objective: f64, values: Vec<f64> },
    Infeasible,
}

/// Enumerates every basic solution of the LP (each choice of basis columns
/// and of finite bounds for the nonbasic columns) and returns the best
/// feasible one. Only practical for toy sizes; intended for oracle tests.
///
/// The feasible region must be bounded for the minimum to be attained at a
/// vertex, so callers should give every structural variable finite bounds or
/// a coercive objective.
pub fn enumerate_basic_solutions(problem: &LinearProblem, tol: f64) -> BruteOutcome {
    let n = problem.variable_count();
    let m = problem.constraints().len();
    let total = n + m;

    // Equality form: one slack per row with bounds encoding the relation.
    let mut lower = vec![0.0; total];
    let mut upper = vec![0.0; total];
    lower[..n].copy_from_slice(problem.lower());
    upper[..n].copy_from_slice(problem.upper());
    let mut dense = vec![vec![0.0; total]; m];
    let mut rhs = vec![0.0; m];
    for (i, con) in problem.constraints().iter().enumerate() {
        rhs[i] = con.rhs;
        for &(j, c) in &con.coeffs {
            dense[i][j] += c;
        }
        dense[i][n + i] = 1.0;
        let (lo, hi) = match con.relation {
            Relation::Le => (0.0, f64::INFINITY),
            Relation::Ge => (f64::NEG_INFINITY, 0.0),
            Relation::Eq => (0.0, 0.0),
        };
        lower[n + i] = lo;
        upper[n + i] = hi;
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut basis = Vec::with_capacity(m);
    enumerate_bases(
        0,
        total,
        m,
        &mut basis,
        &mut |basis: &[usize]| {
            try_basis(
                problem, &dense, &rhs, &lower, &upper, basis, n, total, tol, &mut best,
            );
        },
    );

    match best {
        Some((objective, values)) => BruteOutcome::Optimal { objective, values },
        None => BruteOutcome::Infeasible,
    }
}

fn enumerate_bases(
    start: usize,
    total: usize,
    remaining: usize,
    basis: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(basis);
        return;
    }
    for j in start..=(total - remaining) {
        basis.push(j);
        enumerate_bases(j + 1, total, remaining - 1, basis, visit);
        basis.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn try_basis(
    problem: &LinearProblem,
    dense: &[Vec<f64>],
    rhs: &[f64],
    lower: &[f64],
    upper: &[f64],
    basis: &[usize],
    n: usize,
    total: usize,
    tol: f64,
    best: &mut Option<(f64, Vec<f64>)>,
) {
    let m = rhs.len();
    let nonbasic: Vec<usize> = (0..total).filter(|j| !basis.contains(j)).collect();

    // Every nonbasic variable must rest at a finite bound.
    let mut choices: Vec<Vec<f64>> = Vec::with_capacity(nonbasic.len());
    for &j in &nonbasic {
        let mut c = Vec::new();
        if lower[j].is_finite() {
            c.push(lower[j]);
        }
        if upper[j].is_finite() && upper[j] != lower[j] {
            c.push(upper[j]);
        }
        if c.is_empty() {
            return;
        }
        choices.push(c);
    }

    let mut selector = vec![0usize; nonbasic.len()];
    loop {
        let mut x = vec![0.0; total];
        for (pos, &j) in nonbasic.iter().enumerate() {
            x[j] = choices[pos][selector[pos]];
        }
        let mut b = rhs.to_vec();
        for (pos, &j) in nonbasic.iter().enumerate() {
            let v = choices[pos][selector[pos]];
            if v != 0.0 {
                for (i, bi) in b.iter_mut().enumerate() {
                    *bi -= dense[i][j] * v;
                }
            }
        }
        let mut mat = vec![vec![0.0; m]; m];
        for (col, &j) in basis.iter().enumerate() {
            for row in 0..m {
                mat[row][col] = dense[row][j];
            }
        }
        if let Some(xb) = gauss_solve(&mut mat, &mut b) {
            let mut ok = true;
            for (pos, &j) in basis.iter().enumerate() {
                if xb[pos] < lower[j] - tol || xb[pos] > upper[j] + tol {
                    ok = false;
                    break;
                }
                x[j] = xb[pos];
            }
            if ok {
                let objective: f64 = problem
                    .objective()
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * x[j])
                    .sum();
                let structural = x[..n].to_vec();
                match best {
                    Some((obj, _)) if objective >= *obj => {}
                    _ => *best = Some((objective, structural)),
                }
            }
        }

        // Advance the mixed-radix selector over bound choices.
        let mut pos = 0;
        loop {
            if pos == selector.len() {
                return;
            }
            selector[pos] += 1;
            if selector[pos] < choices[pos].len() {
                break;
            }
            selector[pos] = 0;
            pos += 1;
        }
    }
}

/// Solves `mat * x = b` in place; returns None when the matrix is singular.
fn gauss_solve(mat: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let m = b.len();
    for k in 0..m {
        let mut piv = k;
        let mut val = mat[k][k].abs();
        for r in (k + 1)..m {
            if mat[r][k].abs() > val {
                val = mat[r][k].abs();
                piv = r;
            }
        }
        if val < 1e-10 {
            return None;
        }
        if piv != k {
            mat.swap(piv, k);
            b.swap(piv, k);
        }
        for r in (k + 1)..m {
            let f = mat[r][k] / mat[k][k];
            if f != 0.0 {
                for c in k..m {
                    mat[r][c] -= f * mat[k][c];
                }
                b[r] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; m];
    for k in (0..m).rev() {
        let mut acc = b[k];
        for c in (k + 1)..m {
            acc -= mat[k][c] * x[c];
        }
        x[k] = acc / mat[k][k];
    }
    Some(x)
}

/// Exhaustively enumerates all binary assignments, solving the residual LP
/// for each with the supplied LP routine, and returns the best outcome.
pub fn enumerate_binary_assignments(
    problem: &LinearProblem,
    options: &SolveOptions,
    solve_residual: impl Fn(&LinearProblem, &SolveOptions) -> Result<Solution, SolveError>,
) -> Result<BruteOutcome, SolveError> {
    let binaries: Vec<usize> = problem.binaries().iter().copied().collect();
    let k = binaries.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u64..(1u64 << k) {
        let mut residual = problem.clone();
        let mut compatible = true;
        for (pos, &j) in binaries.iter().enumerate() {
            let v = if mask & (1 << pos) != 0 { 1.0 } else { 0.0 };
            if v < problem.lower()[j] - 1e-12 || v > problem.upper()[j] + 1e-12 {
                compatible = false;
                break;
            }
            residual.set_bounds(j, v, v);
        }
        if !compatible {
            continue;
        }
        let mut relaxed = LinearProblem::new(residual.variable_count());
        for j in 0..residual.variable_count() {
            relaxed.set_objective_coeff(j, residual.objective()[j]);
            relaxed.set_bounds(j, residual.lower()[j], residual.upper()[j]);
        }
        for con in residual.constraints() {
            relaxed.add_constraint(con.coeffs.clone(), con.relation, con.rhs);
        }
        let solution = solve_residual(&relaxed, options)?;
        if solution.status == crate::problem::SolveStatus::Optimal {
            match &best {
                Some((obj, _)) if solution.objective_value >= *obj => {}
                _ => best = Some((solution.objective_value, solution.values)),
            }
        }
    }
    Ok(match best {
        Some((objective, values)) => BruteOutcome::Optimal { objective, values },
        None => BruteOutcome::Infeasible,
    })
}
