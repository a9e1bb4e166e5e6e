//! Problem definition, solver options, and solution types.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use thiserror::Error;

/// Relation between a constraint row and its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One linear constraint: sparse coefficient row, relation, right-hand side.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program in minimize form, optionally with binary-flagged variables.
///
/// Variables default to bounds `[0, +inf)`. Binary-flagged variables must keep
/// their bounds inside `[0, 1]`.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    variable_count: usize,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    binaries: BTreeSet<usize>,
}

impl LinearProblem {
    pub fn new(variable_count: usize) -> Self {
        Self {
            variable_count,
            objective: vec![0.0; variable_count],
            constraints: Vec::new(),
            lower: vec![0.0; variable_count],
            upper: vec![f64::INFINITY; variable_count],
            binaries: BTreeSet::new(),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn set_objective_coeff(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    /// Appends a constraint row and returns its index.
    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> usize {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn mark_binary(&mut self, var: usize) {
        self.binaries.insert(var);
        self.lower[var] = self.lower[var].max(0.0);
        self.upper[var] = self.upper[var].min(1.0);
    }

    pub fn binaries(&self) -> &BTreeSet<usize> {
        &self.binaries
    }

    /// Structural checks; returns the first offence with its row or variable index.
    pub fn validate(&self) -> Result<(), ProblemError> {
        for (var, &c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(ProblemError::NonFiniteObjective { var });
            }
        }
        for (row, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(ProblemError::NonFinite { row });
            }
            for &(var, coeff) in &con.coeffs {
                if var >= self.variable_count {
                    return Err(ProblemError::IndexOutOfRange {
                        row,
                        var,
                        count: self.variable_count,
                    });
                }
                if !coeff.is_finite() {
                    return Err(ProblemError::NonFinite { row });
                }
            }
        }
        for var in 0..self.variable_count {
            let (lo, hi) = (self.lower[var], self.upper[var]);
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(ProblemError::EmptyBounds {
                    var,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        for &var in &self.binaries {
            if var >= self.variable_count {
                return Err(ProblemError::IndexOutOfRange {
                    row: usize::MAX,
                    var,
                    count: self.variable_count,
                });
            }
            if self.lower[var] < 0.0 || self.upper[var] > 1.0 {
                return Err(ProblemError::BinaryBounds {
                    var,
                    lower: self.lower[var],
                    upper: self.upper[var],
                });
            }
        }
        Ok(())
    }

    /// Renders the problem in LP text format for cross-checking with external solvers.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::new();
        out.push_str("Minimize\n obj:");
        let mut first = true;
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                push_term(&mut out, c, j, first);
                first = false;
            }
        }
        if first {
            out.push_str(" 0 x0");
        }
        out.push_str("\nSubject To\n");
        for (i, con) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{}:", i);
            let mut first = true;
            for &(j, c) in &con.coeffs {
                if c != 0.0 {
                    push_term(&mut out, c, j, first);
                    first = false;
                }
            }
            if first {
                out.push_str(" 0 x0");
            }
            let _ = writeln!(out, " {} {}", con.relation.symbol(), fmt_num(con.rhs));
        }
        out.push_str("Bounds\n");
        for j in 0..self.variable_count {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => {
                    let _ = writeln!(out, " {} <= x{} <= {}", fmt_num(lo), j, fmt_num(hi));
                }
                (true, false) => {
                    let _ = writeln!(out, " {} <= x{}", fmt_num(lo), j);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= x{} <= {}", j, fmt_num(hi));
                }
                (false, false) => {
                    let _ = writeln!(out, " x{} free", j);
                }
            }
        }
        if !self.binaries.is_empty() {
            out.push_str("Binaries\n");
            for &j in &self.binaries {
                let _ = write!(out, " x{}", j);
            }
            out.push('\n');
        }
        out.push_str("End\n");
        out
    }
}

fn push_term(out: &mut String, coeff: f64, var: usize, first: bool) {
    if coeff < 0.0 {
        let _ = write!(out, " - {} x{}", fmt_num(-coeff), var);
    } else if first {
        let _ = write!(out, " {} x{}", fmt_num(coeff), var);
    } else {
        let _ = write!(out, " + {} x{}", fmt_num(coeff), var);
    }
}

fn fmt_num(v: f64) -> String {
    format!("{}", v)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("constraint row {row} references variable {var} outside 0..{count}")]
    IndexOutOfRange { row: usize, var: usize, count: usize },
    #[error("variable {var} has empty bound interval [{lower}, {upper}]")]
    EmptyBounds { var: usize, lower: f64, upper: f64 },
    #[error("binary variable {var} has bounds [{lower}, {upper}] outside [0, 1]")]
    BinaryBounds { var: usize, lower: f64, upper: f64 },
    #[error("constraint row {row} has a non-finite coefficient or right-hand side")]
    NonFinite { row: usize },
    #[error("objective coefficient for variable {var} is not finite")]
    NonFiniteObjective { var: usize },
}

/// Solve limits and tolerances. Defaults: 300 s, 0.5 % gap, 1e-6 feasibility.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Duration,
    pub gap_tolerance: f64,
    pub feasibility_tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            time_limit: Duration::from_secs(300),
            gap_tolerance: 0.005,
            feasibility_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    FeasibleWithinGap,
    Infeasible,
    Unbounded,
    TimeLimit,
}

/// Solver result. `values` is empty when no feasible point was found
/// (Infeasible, Unbounded, or TimeLimit before the first incumbent).
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub achieved_gap: Option<f64>,
    /// For Infeasible results: a constraint row that could not be satisfied.
    pub infeasible_row: Option<usize>,
    pub simplex_iterations: u64,
    pub nodes_explored: u64,
}

impl Solution {
    pub fn has_values(&self) -> bool {
        !self.values.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("problem has binary variables; use solve_milp")]
    BinariesPresent,
    #[error("simplex iteration limit exceeded ({0} iterations)")]
    IterationLimit(u64),
    #[error("solution failed independent feasibility verification: {0}")]
    Verification(String),
}

/// Independent re-evaluation of every constraint, bound, and binary flag.
///
/// This is the feasibility check applied to every incumbent before it is
/// returned; it deliberately shares no state with the simplex internals.
pub fn verify_solution(problem: &LinearProblem, values: &[f64], tol: f64) -> Result<(), String> {
    if values.len() != problem.variable_count() {
        return Err(format!(
            "value vector has length {}, expected {}",
            values.len(),
            problem.variable_count()
        ));
    }
    for (j, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(format!("variable {} is not finite", j));
        }
        if v < problem.lower()[j] - tol || v > problem.upper()[j] + tol {
            return Err(format!(
                "variable {} = {} violates bounds [{}, {}]",
                j,
                v,
                problem.lower()[j],
                problem.upper()[j]
            ));
        }
    }
    for (i, con) in problem.constraints().iter().enumerate() {
        let lhs: f64 = con.coeffs.iter().map(|&(j, c)| c * values[j]).sum();
        let ok = match con.relation {
            Relation::Le => lhs <= con.rhs + tol,
            Relation::Ge => lhs >= con.rhs - tol,
            Relation::Eq => (lhs - con.rhs).abs() <= tol,
        };
        if !ok {
            return Err(format!(
                "constraint row {} violated: lhs {} {} rhs {}",
                i,
                lhs,
                con.relation.symbol(),
                con.rhs
            ));
        }
    }
    for &j in problem.binaries() {
        let v = values[j];
        if (v - v.round()).abs() > tol {
            return Err(format!("binary variable {} = {} is fractional", j, v));
        }
    }
    Ok(())
}
