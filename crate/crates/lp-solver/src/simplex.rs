//! Two-phase revised simplex for bounded variables.
//!
//! The problem is brought to equality form by appending one slack column per
//! row (coefficient +1, bounds encoding the relation) and one artificial
//! column per row for the phase-1 start. The basis inverse is kept as a dense
//! column-major matrix and updated in place on every pivot; a residual check
//! triggers refactorization if the factors drift.
//!
//! Determinism: entering variable by largest reduced-cost violation with
//! lowest-index tie-break, leaving row by largest pivot magnitude among
//! minimum-ratio rows with lowest-index tie-break. After a run of degenerate
//! pivots the rules switch to Bland's (lowest eligible index) until progress
//! resumes, which guarantees termination.

use std::time::Instant;

use crate::problem::{LinearProblem, Relation};

const PIVOT_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-10;
const BLAND_TRIGGER: u32 = 100;
const RESIDUAL_CHECK_EVERY: u64 = 128;
const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub(crate) struct LpResult {
    pub outcome: LpOutcome,
    /// Structural variable values; meaningful when `feasible` is set.
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: u64,
    /// Row index that could not be satisfied, when infeasible.
    pub infeasible_row: Option<usize>,
    /// Whether `values` is a feasible point (phase 1 completed).
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    Free,
}

pub(crate) struct Simplex {
    n_struct: usize,
    n_rows: usize,
    /// Total columns: structural + slack + artificial.
    n_total: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basic: Vec<usize>,
    /// Dense basis inverse, column-major: entry (r, c) at `binv[c * m + r]`.
    binv: Vec<f64>,
    iterations: u64,
    deadline: Option<Instant>,
    iteration_limit: u64,
    scratch_y: Vec<f64>,
}

pub(crate) enum RunError {
    IterationLimit(u64),
}

impl Simplex {
    pub fn new(problem: &LinearProblem, deadline: Option<Instant>) -> Self {
        let n = problem.variable_count();
        let m = problem.constraints().len();
        let n_total = n + 2 * m;

        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_total];
        for (i, con) in problem.constraints().iter().enumerate() {
            for &(j, c) in &con.coeffs {
                if c != 0.0 {
                    cols[j].push((i, c));
                }
            }
        }
        // Merge duplicate (row, var) entries so each column is a clean sparse vector.
        for col in cols.iter_mut().take(n) {
            col.sort_by_key(|&(r, _)| r);
            col.dedup_by(|b, a| {
                if a.0 == b.0 {
                    a.1 += b.1;
                    true
                } else {
                    false
                }
            });
        }

        let mut lower = vec![0.0; n_total];
        let mut upper = vec![0.0; n_total];
        lower[..n].copy_from_slice(problem.lower());
        upper[..n].copy_from_slice(problem.upper());

        let mut rhs = vec![0.0; m];
        for (i, con) in problem.constraints().iter().enumerate() {
            rhs[i] = con.rhs;
            let slack = n + i;
            cols[slack].push((i, 1.0));
            match con.relation {
                Relation::Le => {
                    lower[slack] = 0.0;
                    upper[slack] = f64::INFINITY;
                }
                Relation::Ge => {
                    lower[slack] = f64::NEG_INFINITY;
                    upper[slack] = 0.0;
                }
                Relation::Eq => {
                    lower[slack] = 0.0;
                    upper[slack] = 0.0;
                }
            }
        }

        let mut state = vec![VarState::AtLower; n_total];
        let mut x = vec![0.0; n_total];
        for j in 0..n + m {
            if lower[j].is_finite() {
                state[j] = VarState::AtLower;
                x[j] = lower[j];
            } else if upper[j].is_finite() {
                state[j] = VarState::AtUpper;
                x[j] = upper[j];
            } else {
                state[j] = VarState::Free;
                x[j] = 0.0;
            }
        }

        // Residual at the nonbasic start decides each artificial's sign so the
        // initial basis is feasible for phase 1.
        let mut residual = rhs.clone();
        for j in 0..n + m {
            let v = x[j];
            if v != 0.0 {
                for &(r, c) in &cols[j] {
                    residual[r] -= c * v;
                }
            }
        }
        let mut basic = Vec::with_capacity(m);
        for i in 0..m {
            let art = n + m + i;
            let sign = if residual[i] < 0.0 { -1.0 } else { 1.0 };
            cols[art].push((i, sign));
            lower[art] = 0.0;
            upper[art] = f64::INFINITY;
            x[art] = residual[i].abs();
            state[art] = VarState::Basic(i);
            basic.push(art);
        }

        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = if residual[i] < 0.0 { -1.0 } else { 1.0 };
        }

        let iteration_limit = 200 * (n_total as u64) + 20_000;

        Self {
            n_struct: n,
            n_rows: m,
            n_total,
            cols,
            lower,
            upper,
            rhs,
            cost: vec![0.0; n_total],
            x,
            state,
            basic,
            binv,
            iterations: 0,
            deadline,
            iteration_limit,
            scratch_y: vec![0.0; m],
        }
    }

    /// Runs phase 1 then phase 2 and extracts structural values.
    pub fn solve(problem: &LinearProblem, deadline: Option<Instant>) -> Result<LpResult, RunError> {
        let mut s = Simplex::new(problem, deadline);

        // Phase 1: minimize total artificial infeasibility.
        for j in (s.n_struct + s.n_rows)..s.n_total {
            s.cost[j] = 1.0;
        }
        let phase1 = s.iterate(true)?;
        if phase1 == LoopExit::TimeLimit {
            return Ok(s.result(LpOutcome::TimeLimit, None, false));
        }
        let infeas: f64 = ((s.n_struct + s.n_rows)..s.n_total)
            .map(|j| s.x[j].max(0.0))
            .sum();
        if infeas > 1e-8 {
            let bad_row = (0..s.n_rows).find(|&i| {
                let art = s.n_struct + s.n_rows + i;
                s.x[art] > 1e-8
            });
            return Ok(s.result(LpOutcome::Infeasible, bad_row, false));
        }
        s.expel_artificials();

        // Phase 2: the real objective, artificials pinned at zero.
        for j in 0..s.n_total {
            s.cost[j] = if j < s.n_struct {
                problem.objective()[j]
            } else {
                0.0
            };
        }
        for j in (s.n_struct + s.n_rows)..s.n_total {
            s.lower[j] = 0.0;
            s.upper[j] = 0.0;
        }
        match s.iterate(false)? {
            LoopExit::Optimal => Ok(s.result(LpOutcome::Optimal, None, true)),
            LoopExit::Unbounded => Ok(s.result(LpOutcome::Unbounded, None, true)),
            LoopExit::TimeLimit => Ok(s.result(LpOutcome::TimeLimit, None, true)),
        }
    }

    fn result(&self, outcome: LpOutcome, infeasible_row: Option<usize>, feasible: bool) -> LpResult {
        let values = self.x[..self.n_struct].to_vec();
        let objective = values
            .iter()
            .zip(&self.cost[..self.n_struct])
            .map(|(v, c)| v * c)
            .sum();
        LpResult {
            outcome,
            values,
            objective,
            iterations: self.iterations,
            infeasible_row,
            feasible,
        }
    }

    /// After phase 1, pivot zero-level artificials out of the basis where a
    /// usable pivot exists; redundant rows keep their artificial pinned at zero.
    fn expel_artificials(&mut self) {
        let art_start = self.n_struct + self.n_rows;
        for r in 0..self.n_rows {
            if self.basic[r] < art_start {
                continue;
            }
            // Row r of the current tableau: rho = e_r^T B^-1, then rho . A_j.
            let m = self.n_rows;
            let mut rho = vec![0.0; m];
            for c in 0..m {
                rho[c] = self.binv[c * m + r];
            }
            let mut candidate: Option<(usize, f64)> = None;
            for j in 0..art_start {
                if matches!(self.state[j], VarState::Basic(_)) {
                    continue;
                }
                let alpha: f64 = self.cols[j].iter().map(|&(i, c)| rho[i] * c).sum();
                if alpha.abs() > 1e-7 {
                    candidate = Some((j, alpha));
                    break;
                }
            }
            if let Some((j, _)) = candidate {
                let w = self.ftran(j);
                self.pivot(j, r, &w, 0.0, 0.0);
            }
        }
    }

    /// Main pivoting loop. `phase1` only affects the early exit when all
    /// artificial infeasibility is gone.
    fn iterate(&mut self, phase1: bool) -> Result<LoopExit, RunError> {
        let mut degenerate_run: u32 = 0;
        let mut bland = false;
        loop {
            if self.iterations >= self.iteration_limit {
                return Err(RunError::IterationLimit(self.iterations));
            }
            if self.iterations % RESIDUAL_CHECK_EVERY == 0 {
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        return Ok(LoopExit::TimeLimit);
                    }
                }
                if self.iterations > 0 && self.residual_norm() > RESIDUAL_TOL {
                    self.refactorize();
                }
            }
            if phase1 {
                let infeas: f64 = ((self.n_struct + self.n_rows)..self.n_total)
                    .map(|j| self.x[j].max(0.0))
                    .sum();
                if infeas <= 1e-12 {
                    return Ok(LoopExit::Optimal);
                }
            }

            self.compute_duals();
            let entering = self.choose_entering(bland);
            let Some((q, dir, dq)) = entering else {
                return Ok(LoopExit::Optimal);
            };

            let w = self.ftran(q);
            let Some((theta, leaving)) = self.ratio_test(q, dir, &w, bland) else {
                return Ok(LoopExit::Unbounded);
            };

            self.iterations += 1;
            if theta <= DEGENERATE_STEP {
                degenerate_run += 1;
                if degenerate_run > BLAND_TRIGGER {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }

            match leaving {
                Leaving::BoundFlip => self.bound_flip(q, dir, theta, &w),
                Leaving::Row(r) => self.pivot(q, r, &w, dir * theta, dq),
            }
        }
    }

    fn residual_norm(&self) -> f64 {
        let mut residual = self.rhs.clone();
        for j in 0..self.n_total {
            let v = self.x[j];
            if v != 0.0 {
                for &(r, c) in &self.cols[j] {
                    residual[r] -= c * v;
                }
            }
        }
        residual.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()))
    }

    /// Rebuilds the basis inverse from scratch (Gauss-Jordan with partial
    /// pivoting) and recomputes basic values from it.
    fn refactorize(&mut self) {
        let m = self.n_rows;
        // Dense basis matrix, column-major.
        let mut mat = vec![0.0; m * m];
        for (pos, &j) in self.basic.iter().enumerate() {
            for &(r, c) in &self.cols[j] {
                mat[pos * m + r] = c;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        // Gauss-Jordan, operating on rows of the column-major buffers.
        for k in 0..m {
            let mut piv_row = k;
            let mut piv_val = mat[k * m + k].abs();
            for r in (k + 1)..m {
                let v = mat[k * m + r].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val <= 1e-12 {
                // Numerically singular basis; leave factors as-is. The caller's
                // verification pass will surface any residual error.
                continue;
            }
            if piv_row != k {
                for c in 0..m {
                    mat.swap(c * m + k, c * m + piv_row);
                    inv.swap(c * m + k, c * m + piv_row);
                }
            }
            let p = mat[k * m + k];
            for c in 0..m {
                mat[c * m + k] /= p;
                inv[c * m + k] /= p;
            }
            for r in 0..m {
                if r == k {
                    continue;
                }
                let f = mat[k * m + r];
                if f != 0.0 {
                    for c in 0..m {
                        mat[c * m + r] -= f * mat[c * m + k];
                        inv[c * m + r] -= f * inv[c * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        // Recompute basic variable values: x_B = B^-1 (b - N x_N).
        let mut rhs = self.rhs.clone();
        for j in 0..self.n_total {
            if matches!(self.state[j], VarState::Basic(_)) {
                continue;
            }
            let v = self.x[j];
            if v != 0.0 {
                for &(r, c) in &self.cols[j] {
                    rhs[r] -= c * v;
                }
            }
        }
        let mut xb = vec![0.0; m];
        for c in 0..m {
            let v = rhs[c];
            if v != 0.0 {
                let col = &self.binv[c * m..(c + 1) * m];
                for r in 0..m {
                    xb[r] += col[r] * v;
                }
            }
        }
        for r in 0..m {
            self.x[self.basic[r]] = xb[r];
        }
    }

    /// y = c_B^T B^-1.
    fn compute_duals(&mut self) {
        let m = self.n_rows;
        for c in 0..m {
            let col = &self.binv[c * m..(c + 1) * m];
            let mut acc = 0.0;
            for r in 0..m {
                let cb = self.cost[self.basic[r]];
                if cb != 0.0 {
                    acc += cb * col[r];
                }
            }
            self.scratch_y[c] = acc;
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.cost[j];
        for &(r, c) in &self.cols[j] {
            d -= self.scratch_y[r] * c;
        }
        d
    }

    /// Entering variable: (index, direction, reduced cost).
    fn choose_entering(&self, bland: bool) -> Option<(usize, f64, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        let mut best_violation = OPT_TOL;
        for j in 0..self.n_total {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if hi - lo <= 0.0 {
                continue; // fixed variables can never move
            }
            let dir = match self.state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => 1.0,
                VarState::AtUpper => -1.0,
                VarState::Free => 0.0,
            };
            let d = self.reduced_cost(j);
            let (violation, dir) = if dir == 0.0 {
                (d.abs(), if d > 0.0 { -1.0 } else { 1.0 })
            } else if dir > 0.0 {
                (-d, 1.0)
            } else {
                (d, -1.0)
            };
            if violation > best_violation {
                if bland {
                    return Some((j, dir, d));
                }
                best_violation = violation;
                best = Some((j, dir, d));
            }
        }
        best
    }

    /// w = B^-1 A_q.
    fn ftran(&mut self, q: usize) -> Vec<f64> {
        let m = self.n_rows;
        let mut w = vec![0.0; m];
        for &(r, c) in &self.cols[q] {
            if c != 0.0 {
                let col = &self.binv[r * m..(r + 1) * m];
                for i in 0..m {
                    w[i] += c * col[i];
                }
            }
        }
        w
    }

    /// Maximum step for entering q in direction `dir`, with the limiting row.
    fn ratio_test(&self, q: usize, dir: f64, w: &[f64], bland: bool) -> Option<(f64, Leaving)> {
        let mut theta = f64::INFINITY;
        let mut leaving = Leaving::BoundFlip;
        let range = self.upper[q] - self.lower[q];
        if range.is_finite() {
            theta = range;
        }
        let mut best_pivot = 0.0_f64;
        let mut best_var = usize::MAX;
        for r in 0..self.n_rows {
            let wr = w[r];
            if wr.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basic[r];
            // Basic value moves by -dir * wr per unit step.
            let delta = -dir * wr;
            let limit = if delta > 0.0 {
                let hi = self.upper[b];
                if hi.is_finite() {
                    (hi - self.x[b]) / delta
                } else {
                    f64::INFINITY
                }
            } else {
                let lo = self.lower[b];
                if lo.is_finite() {
                    (self.x[b] - lo) / (-delta)
                } else {
                    f64::INFINITY
                }
            };
            let limit = limit.max(0.0);
            if !limit.is_finite() {
                continue;
            }
            let improves = if bland {
                // Exact minimum with lowest variable index tie-break.
                limit < theta - 1e-12 || (limit <= theta + 1e-12 && b < best_var)
            } else {
                limit < theta - 1e-9 * (1.0 + theta)
                    || (limit <= theta + 1e-9 * (1.0 + theta) && wr.abs() > best_pivot)
            };
            if improves {
                theta = theta.min(limit);
                leaving = Leaving::Row(r);
                best_pivot = wr.abs();
                best_var = b;
            }
        }
        if !theta.is_finite() {
            return None;
        }
        Some((theta, leaving))
    }

    fn bound_flip(&mut self, q: usize, dir: f64, theta: f64, w: &[f64]) {
        let step = dir * theta;
        self.x[q] += step;
        for r in 0..self.n_rows {
            if w[r] != 0.0 {
                let b = self.basic[r];
                self.x[b] -= step * w[r];
            }
        }
        self.state[q] = if dir > 0.0 {
            self.x[q] = self.upper[q];
            VarState::AtUpper
        } else {
            self.x[q] = self.lower[q];
            VarState::AtLower
        };
    }

    /// Executes the basis change: entering q replaces the variable at row r.
    /// `step` is the signed step of the entering variable.
    fn pivot(&mut self, q: usize, r: usize, w: &[f64], step: f64, _dq: f64) {
        let m = self.n_rows;
        let leaving_var = self.basic[r];

        // Update values.
        if step != 0.0 {
            self.x[q] += step;
            for i in 0..m {
                if w[i] != 0.0 {
                    let b = self.basic[i];
                    self.x[b] -= step * w[i];
                }
            }
        }
        // Snap the leaving variable to the bound it reached.
        let lv = self.x[leaving_var];
        let to_lower = if self.lower[leaving_var].is_finite()
            && self.upper[leaving_var].is_finite()
        {
            (lv - self.lower[leaving_var]).abs() <= (lv - self.upper[leaving_var]).abs()
        } else {
            self.lower[leaving_var].is_finite()
        };
        if to_lower {
            self.x[leaving_var] = self.lower[leaving_var];
            self.state[leaving_var] = VarState::AtLower;
        } else {
            self.x[leaving_var] = self.upper[leaving_var];
            self.state[leaving_var] = VarState::AtUpper;
        }

        self.basic[r] = q;
        self.state[q] = VarState::Basic(r);

        // binv <- E binv with E the elementary transform for column w, row r.
        let wr = w[r];
        for c in 0..m {
            let col = &mut self.binv[c * m..(c + 1) * m];
            let t = col[r] / wr;
            if t != 0.0 {
                for i in 0..m {
                    col[i] -= w[i] * t;
                }
                // The loop above zeroed col[r] against itself; restore the scaled value.
                col[r] = t;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LoopExit {
    Optimal,
    Unbounded,
    TimeLimit,
}

#[derive(Debug, Clone, Copy)]
enum Leaving {
    BoundFlip,
    Row(usize),
}
