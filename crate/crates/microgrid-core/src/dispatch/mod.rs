//! Dispatch optimization: build the model, solve it, and extract a
//! physically validated schedule with its cost breakdown.

mod check;
mod model;

use std::time::Instant;

use lp_solver::{Solution, Solver, SolveError, SolveOptions, SolveStatus};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Scenario, Tariff, ValidationFinding};

pub use check::check_schedule;
pub use model::{build_model, DispatchModel, RowLabel, VariableMap};

/// How simultaneous charging and discharging is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntiSimultaneityMode {
    /// Shared charge+discharge power budget per battery and period (linear).
    LinearBudget,
    /// Exclusive per-period modes enforced with binary indicators.
    BinaryModes,
}

/// Whether minimum dwell times are enforced on the mode indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DwellTimeMode {
    Off,
    BinaryModes,
}

#[derive(Debug, Clone)]
pub struct DispatchOptions {
    pub solve: SolveOptions,
    pub anti_simultaneity: AntiSimultaneityMode,
    pub dwell_time: DwellTimeMode,
    pub include_wear_in_objective: bool,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            anti_simultaneity: AntiSimultaneityMode::LinearBudget,
            dwell_time: DwellTimeMode::Off,
            include_wear_in_objective: false,
        }
    }
}

impl DispatchOptions {
    /// The strict mixed-integer variant: binary exclusivity plus dwell times.
    pub fn binary_modes() -> Self {
        Self {
            anti_simultaneity: AntiSimultaneityMode::BinaryModes,
            dwell_time: DwellTimeMode::BinaryModes,
            ..Self::default()
        }
    }
}

/// Optimal values of all decision variables for one scenario day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchSchedule {
    /// Grid import per participant and period, MW.
    pub grid_import: Vec<Vec<f64>>,
    /// Allocation fraction per participant, solar unit, and period.
    pub solar_alloc: Vec<Vec<Vec<f64>>>,
    /// Charging power per participant, battery, and period, MW.
    pub charge: Vec<Vec<Vec<f64>>>,
    /// Discharging power per participant, battery, and period, MW.
    pub discharge: Vec<Vec<Vec<f64>>>,
    /// Stored energy per battery and period, MWh.
    pub soc: Vec<Vec<f64>>,
    /// Declared system peak, MW.
    pub system_peak_mw: f64,
    /// Hours per period, carried for energy arithmetic.
    pub period_hours: f64,
}

impl DispatchSchedule {
    pub fn participants(&self) -> usize {
        self.grid_import.len()
    }

    pub fn periods(&self) -> usize {
        self.grid_import.first().map_or(0, |row| row.len())
    }

    /// Total grid import across participants at period `t`, MW.
    pub fn total_import_at(&self, t: usize) -> f64 {
        self.grid_import.iter().map(|row| row[t]).sum()
    }

    /// Highest total import over the horizon, MW.
    pub fn max_total_import(&self) -> f64 {
        (0..self.periods())
            .map(|t| self.total_import_at(t))
            .fold(0.0, f64::max)
    }

    /// Battery throughput (charge plus discharge) over the horizon, MWh.
    pub fn battery_throughput_mwh(&self) -> f64 {
        let mut total = 0.0;
        for per_unit in self.charge.iter().chain(self.discharge.iter()) {
            for row in per_unit {
                total += row.iter().sum::<f64>() * self.period_hours;
            }
        }
        total
    }
}

/// Cost components in dollars for one scenario day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub energy_cost: f64,
    pub peak_charge: f64,
    /// Reported wear cost; included in `total_cost` only when the wear term
    /// was part of the objective.
    pub battery_wear_cost: f64,
    pub total_cost: f64,
}

/// Solver outcome details carried into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub status: String,
    pub objective_value: f64,
    pub achieved_gap: Option<f64>,
    pub simplex_iterations: u64,
    pub nodes_explored: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct DispatchOutcome {
    pub schedule: DispatchSchedule,
    pub costs: CostBreakdown,
    pub stats: SolverStats,
}

#[derive(Debug, Error)]
pub enum DispatchError {
    #[error("scenario validation failed: {}", format_findings(.0))]
    InvalidScenario(Vec<ValidationFinding>),
    #[error("invalid dispatch options: {0}")]
    InvalidOptions(String),
    #[error("dispatch model infeasible; certificate row: {row}")]
    Infeasible { row: String },
    #[error("time limit reached with no feasible incumbent")]
    TimeLimitNoIncumbent,
    #[error("dispatch model unbounded")]
    Unbounded,
    #[error(transparent)]
    Solver(#[from] SolveError),
    #[error("schedule failed physical re-validation:\n{0}")]
    PhysicsViolation(String),
}

fn format_findings(findings: &[ValidationFinding]) -> String {
    findings
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Solves the scenario's dispatch model and returns the schedule, costs, and
/// solver statistics. The returned schedule has been re-validated against the
/// scenario physics by independent arithmetic.
pub fn optimize_dispatch(
    scenario: &Scenario,
    options: &DispatchOptions,
) -> Result<DispatchOutcome, DispatchError> {
    let model = build_model(scenario, options)?;
    let started = Instant::now();
    let solution = lp_solver::BundledSolver.solve(&model.problem, &options.solve)?;
    let wall_seconds = started.elapsed().as_secs_f64();
    extract_outcome(scenario, options, &model, solution, wall_seconds)
}

fn extract_outcome(
    scenario: &Scenario,
    options: &DispatchOptions,
    model: &DispatchModel,
    solution: Solution,
    wall_seconds: f64,
) -> Result<DispatchOutcome, DispatchError> {
    match solution.status {
        SolveStatus::Optimal | SolveStatus::FeasibleWithinGap => {}
        SolveStatus::Infeasible => {
            let row = solution
                .infeasible_row
                .and_then(|r| model.row_labels.get(r))
                .map(|label| label.to_string())
                .unwrap_or_else(|| "unidentified row".to_string());
            return Err(DispatchError::Infeasible { row });
        }
        SolveStatus::Unbounded => return Err(DispatchError::Unbounded),
        SolveStatus::TimeLimit => {
            if !solution.has_values() {
                return Err(DispatchError::TimeLimitNoIncumbent);
            }
        }
    }

    let schedule = extract_schedule(scenario, &model.map, &solution.values);
    let violations = check_schedule(&schedule, scenario, 1e-6);
    if !violations.is_empty() {
        return Err(DispatchError::PhysicsViolation(violations.join("\n")));
    }
    let costs = assemble_costs_with(
        &schedule,
        &scenario.tariff,
        options.include_wear_in_objective,
    );
    let stats = SolverStats {
        status: format!("{:?}", solution.status),
        objective_value: solution.objective_value,
        achieved_gap: solution.achieved_gap,
        simplex_iterations: solution.simplex_iterations,
        nodes_explored: solution.nodes_explored,
        wall_seconds,
    };
    Ok(DispatchOutcome {
        schedule,
        costs,
        stats,
    })
}

/// Maps solver values back through the index map. Solver noise below the
/// feasibility tolerance is clamped so the schedule satisfies sign
/// invariants exactly.
fn extract_schedule(scenario: &Scenario, map: &VariableMap, values: &[f64]) -> DispatchSchedule {
    let n = scenario.participant_count();
    let s = scenario.solar_count();
    let b = scenario.bess_count();
    let t = scenario.periods();
    let clamp = |v: f64| if v < 0.0 && v > -1e-6 { 0.0 } else { v };

    let grid_import = (0..n)
        .map(|i| (0..t).map(|period| clamp(values[map.grid(i, period)])).collect())
        .collect();
    let solar_alloc = (0..n)
        .map(|i| {
            (0..s)
                .map(|j| {
                    (0..t)
                        .map(|period| clamp(values[map.alloc(i, j, period)]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let charge = (0..n)
        .map(|i| {
            (0..b)
                .map(|k| {
                    (0..t)
                        .map(|period| clamp(values[map.charge(i, k, period)]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let discharge = (0..n)
        .map(|i| {
            (0..b)
                .map(|k| {
                    (0..t)
                        .map(|period| clamp(values[map.discharge(i, k, period)]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let soc = (0..b)
        .map(|k| (0..t).map(|period| values[map.soc(k, period)]).collect())
        .collect();

    DispatchSchedule {
        grid_import,
        solar_alloc,
        charge,
        discharge,
        soc,
        system_peak_mw: clamp(values[map.peak()]),
        period_hours: scenario.period_hours(),
    }
}

/// Cost breakdown for a schedule under a tariff; the wear term is reported
/// but kept out of the total.
pub fn assemble_costs(schedule: &DispatchSchedule, tariff: &Tariff) -> CostBreakdown {
    assemble_costs_with(schedule, tariff, false)
}

fn assemble_costs_with(
    schedule: &DispatchSchedule,
    tariff: &Tariff,
    wear_in_total: bool,
) -> CostBreakdown {
    let dt = schedule.period_hours;
    let energy_cost: f64 = (0..schedule.periods())
        .map(|t| tariff.energy_price[t] * schedule.total_import_at(t) * dt)
        .sum();
    let peak_charge = tariff.peak_charge_rate * schedule.system_peak_mw;
    let battery_wear_cost = tariff.battery_wear_cost * schedule.battery_throughput_mwh();
    let total_cost = energy_cost + peak_charge + if wear_in_total { battery_wear_cost } else { 0.0 };
    CostBreakdown {
        energy_cost,
        peak_charge,
        battery_wear_cost,
        total_cost,
    }
}

/// Cost of the no-coordination counterfactual: every load is served straight
/// from the grid with no solar and no battery.
pub fn baseline_costs(scenario: &Scenario) -> CostBreakdown {
    let dt = scenario.period_hours();
    let energy_cost: f64 = (0..scenario.periods())
        .map(|t| scenario.tariff.energy_price[t] * scenario.total_load_at(t) * dt)
        .sum();
    let peak_charge = scenario.tariff.peak_charge_rate * scenario.peak_load();
    CostBreakdown {
        energy_cost,
        peak_charge,
        battery_wear_cost: 0.0,
        total_cost: energy_cost + peak_charge,
    }
}

/// Renders the dispatch model in LP text format for external cross-checks.
pub fn dump_model_lp(
    scenario: &Scenario,
    options: &DispatchOptions,
) -> Result<String, DispatchError> {
    Ok(build_model(scenario, options)?.problem.to_lp_format())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BessSpec, Scenario, TimeGrid};
    use crate::testkit::{bare_scenario, table_shaped_scenario};

    fn opts() -> DispatchOptions {
        DispatchOptions::default()
    }

    #[test]
    fn hand_countable_model() {
        // One load, two periods, no assets: variables {G(0), G(1), P_peak},
        // 4 balance rows, 2 peak rows, and one ramp pair.
        let scenario = bare_scenario(vec![vec![1.0, 1.0]], vec![100.0, 200.0]);
        let model = build_model(&scenario, &opts()).unwrap();
        assert_eq!(model.problem.variable_count(), 3);
        assert_eq!(model.problem.constraints().len(), 8);
        assert!(model.problem.binaries().is_empty());
        let balance_rows = model
            .row_labels
            .iter()
            .filter(|l| matches!(l, RowLabel::BalanceLower { .. } | RowLabel::BalanceUpper { .. }))
            .count();
        let peak_rows = model
            .row_labels
            .iter()
            .filter(|l| matches!(l, RowLabel::PeakTracking { .. }))
            .count();
        let ramp_rows = model
            .row_labels
            .iter()
            .filter(|l| matches!(l, RowLabel::RampUp { .. } | RowLabel::RampDown { .. }))
            .count();
        assert_eq!((balance_rows, peak_rows, ramp_rows), (4, 2, 2));
    }

    #[test]
    fn linear_budget_mode_has_no_binaries() {
        let model = build_model(&table_shaped_scenario(), &opts()).unwrap();
        assert!(model.problem.binaries().is_empty());
    }

    #[test]
    fn binary_modes_have_one_indicator_per_battery_period() {
        let scenario = table_shaped_scenario();
        let model = build_model(&scenario, &DispatchOptions::binary_modes()).unwrap();
        assert_eq!(
            model.problem.binaries().len(),
            scenario.bess_count() * scenario.periods()
        );
        assert_eq!(model.problem.binaries().len(), 48);
    }

    #[test]
    fn dwell_without_binary_modes_rejected() {
        let options = DispatchOptions {
            dwell_time: DwellTimeMode::BinaryModes,
            ..opts()
        };
        assert!(matches!(
            build_model(&table_shaped_scenario(), &options),
            Err(DispatchError::InvalidOptions(_))
        ));
    }

    #[test]
    fn invalid_scenario_rejected_with_findings() {
        let mut scenario = table_shaped_scenario();
        scenario.tariff.energy_price.truncate(3);
        match build_model(&scenario, &opts()) {
            Err(DispatchError::InvalidScenario(findings)) => assert!(!findings.is_empty()),
            other => panic!("expected validation rejection, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn idle_system_yields_zero_schedule() {
        // All-zero loads with the terminal requirement equal to the initial
        // charge: the batteries can rest and nothing is bought.
        let mut scenario = bare_scenario(vec![vec![0.0; 4], vec![0.0; 4]], vec![100.0; 4]);
        scenario.bess_units.push(BessSpec::standard("bess_1"));
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!(outcome.costs.total_cost.abs() < 1e-9);
        assert!(outcome.schedule.max_total_import() < 1e-9);
        assert!(outcome.schedule.battery_throughput_mwh() < 1e-7);
        assert!(outcome.schedule.system_peak_mw < 1e-9);
    }

    #[test]
    fn rigid_load_has_no_degrees_of_freedom() {
        // With a zero balance band and no assets the import must equal the
        // load exactly: energy 100 + 200, peak charge on 1 MW.
        let mut scenario = bare_scenario(vec![vec![1.0, 1.0]], vec![100.0, 200.0]);
        scenario.balance_tolerance = 0.0;
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!((outcome.schedule.grid_import[0][0] - 1.0).abs() < 1e-7);
        assert!((outcome.schedule.grid_import[0][1] - 1.0).abs() < 1e-7);
        assert!((outcome.costs.energy_cost - 300.0).abs() < 1e-6);
        assert!(
            (outcome.costs.peak_charge - scenario.tariff.peak_charge_rate).abs() < 1e-4,
            "peak charge {}",
            outcome.costs.peak_charge
        );
    }

    /// Fine grid search over net battery power per period; independent of the
    /// LP path.
    fn arbitrage_oracle(scenario: &Scenario) -> f64 {
        let prices = &scenario.tariff.energy_price;
        let loads = &scenario.loads[0].demand;
        let bess = &scenario.bess_units[0];
        let initial = bess.soc_initial * bess.capacity_mwh;
        let steps = 200;
        let mut best = f64::INFINITY;
        for a in 0..=steps {
            for b in 0..=steps {
                let net0 = -bess.power_limit_mw + 2.0 * bess.power_limit_mw * a as f64 / steps as f64;
                let net1 = -bess.power_limit_mw + 2.0 * bess.power_limit_mw * b as f64 / steps as f64;
                let g0 = loads[0] - net0;
                let g1 = loads[1] - net1;
                if g0 < 0.0 || g1 < 0.0 {
                    continue;
                }
                if (g1 - g0).abs() > scenario.ramp_limit_fraction * loads[1] + 1e-12 {
                    continue;
                }
                let s0 = initial - net0;
                let s1 = s0 - net1;
                let lo = bess.soc_min * bess.capacity_mwh;
                let hi = bess.soc_max * bess.capacity_mwh;
                if s0 < lo || s0 > hi || s1 < lo || s1 > hi {
                    continue;
                }
                if s1 < bess.soc_terminal_min * bess.capacity_mwh {
                    continue;
                }
                best = best.min(prices[0] * g0 + prices[1] * g1);
            }
        }
        best
    }

    #[test]
    fn battery_shifts_expensive_period() {
        // Half the evening load comes out of the battery: import only in the
        // cheap period. Grid-search oracle value frozen at 50.
        let mut scenario = bare_scenario(vec![vec![0.5, 0.5]], vec![100.0, 300.0]);
        scenario.balance_tolerance = 0.0;
        scenario.ramp_limit_fraction = 1.0;
        scenario.tariff.peak_charge_rate = 0.0;
        scenario.bess_units.push(BessSpec {
            charge_eff: 1.0,
            discharge_eff: 1.0,
            soc_min: 0.0,
            soc_max: 1.0,
            soc_terminal_min: 0.0,
            soc_initial: 0.5,
            ..BessSpec::standard("bess_1")
        });

        let oracle = arbitrage_oracle(&scenario);
        assert!((oracle - 50.0).abs() < 1e-9, "oracle {}", oracle);

        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!((outcome.costs.energy_cost - oracle).abs() < 1e-6);
        let discharged: f64 = outcome.schedule.discharge[0][0][1];
        assert!((discharged - 0.5).abs() < 1e-6, "discharge {}", discharged);
    }

    #[test]
    fn infeasible_ramp_names_certificate_row() {
        // The load collapses faster than the ramp limit allows and there is
        // nothing to absorb the difference.
        let mut scenario = bare_scenario(vec![vec![1.0, 0.01]], vec![100.0, 100.0]);
        scenario.balance_tolerance = 0.0;
        match optimize_dispatch(&scenario, &opts()) {
            Err(DispatchError::Infeasible { row }) => {
                assert!(!row.is_empty(), "certificate row should be named");
            }
            other => panic!("expected infeasibility, got ok={}", other.is_ok()),
        }
    }

    #[test]
    fn baseline_flat_load() {
        let scenario = bare_scenario(vec![vec![0.1; 24]], vec![100.0; 24]);
        let costs = baseline_costs(&scenario);
        assert!((costs.energy_cost - 240.0).abs() < 1e-9);
        assert!((costs.peak_charge - scenario.tariff.peak_charge_rate * 0.1).abs() < 1e-9);
    }

    #[test]
    fn baseline_non_coincident_peaks() {
        let scenario = bare_scenario(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![100.0, 100.0]);
        let costs = baseline_costs(&scenario);
        assert!(
            (costs.peak_charge - scenario.tariff.peak_charge_rate).abs() < 1e-9,
            "baseline peak should be 1.0 MW"
        );
    }

    #[test]
    fn assemble_costs_peak_fixture() {
        // 8700 $/MW on a 0.78631 MW peak.
        let schedule = DispatchSchedule {
            grid_import: vec![vec![0.0; 24]],
            solar_alloc: vec![vec![]],
            charge: vec![vec![]],
            discharge: vec![vec![]],
            soc: vec![],
            system_peak_mw: 0.78631,
            period_hours: 1.0,
        };
        let scenario = table_shaped_scenario();
        let costs = assemble_costs(&schedule, &scenario.tariff);
        assert!((costs.peak_charge - 6_840.90).abs() < 0.05);
    }

    #[test]
    fn assemble_costs_zero_schedule() {
        let schedule = DispatchSchedule {
            grid_import: vec![vec![0.0; 4]],
            solar_alloc: vec![vec![]],
            charge: vec![vec![]],
            discharge: vec![vec![]],
            soc: vec![],
            system_peak_mw: 0.0,
            period_hours: 1.0,
        };
        let scenario = bare_scenario(vec![vec![0.0; 4]], vec![100.0; 4]);
        let costs = assemble_costs(&schedule, &scenario.tariff);
        assert_eq!(costs.total_cost, 0.0);
        assert_eq!(costs.energy_cost, 0.0);
        assert_eq!(costs.battery_wear_cost, 0.0);
    }

    #[test]
    fn assemble_costs_flat_rate() {
        let schedule = DispatchSchedule {
            grid_import: vec![vec![1.0; 24]],
            solar_alloc: vec![vec![]],
            charge: vec![vec![]],
            discharge: vec![vec![]],
            soc: vec![],
            system_peak_mw: 1.0,
            period_hours: 1.0,
        };
        let mut scenario = bare_scenario(vec![vec![1.0; 24]], vec![100.0; 24]);
        scenario.tariff.peak_charge_rate = 0.0;
        let costs = assemble_costs(&schedule, &scenario.tariff);
        assert!((costs.energy_cost - 2_400.0).abs() < 1e-9);
    }

    #[test]
    fn physics_check_rejects_corrupted_schedule() {
        let mut scenario = bare_scenario(vec![vec![1.0, 1.0]], vec![100.0, 200.0]);
        scenario.balance_tolerance = 0.0;
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        let mut bad = outcome.schedule.clone();
        bad.grid_import[0][0] += 0.5;
        let violations = check_schedule(&bad, &scenario, 1e-6);
        assert!(violations.iter().any(|v| v.contains("balance")));
    }

    #[test]
    fn optimized_equals_baseline_without_assets_and_band() {
        // With a zero band and no assets the import tracks the load exactly.
        let demands = vec![
            vec![0.5, 0.52, 0.55, 0.53, 0.5, 0.48],
            vec![0.2, 0.21, 0.22, 0.21, 0.2, 0.19],
        ];
        let mut scenario = bare_scenario(demands, vec![80.0, 90.0, 120.0, 150.0, 110.0, 95.0]);
        scenario.balance_tolerance = 0.0;
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        let baseline = baseline_costs(&scenario);
        assert!((outcome.costs.energy_cost - baseline.energy_cost).abs() < 1e-6);
        assert!((outcome.costs.peak_charge - baseline.peak_charge).abs() < 1e-4);
    }

    #[test]
    fn peak_variable_is_tight() {
        let scenario = table_shaped_scenario();
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!(
            (outcome.schedule.system_peak_mw - outcome.schedule.max_total_import()).abs() < 1e-6,
            "peak {} vs max import {}",
            outcome.schedule.system_peak_mw,
            outcome.schedule.max_total_import()
        );
    }

    #[test]
    fn wear_term_changes_total_only_when_enabled() {
        let mut scenario = bare_scenario(vec![vec![0.5, 0.5]], vec![100.0, 300.0]);
        scenario.balance_tolerance = 0.0;
        scenario.ramp_limit_fraction = 1.0;
        scenario.bess_units.push(BessSpec {
            soc_min: 0.0,
            soc_terminal_min: 0.0,
            soc_initial: 0.5,
            ..BessSpec::standard("bess_1")
        });
        let plain = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!(
            (plain.costs.total_cost - plain.costs.energy_cost - plain.costs.peak_charge).abs()
                < 1e-9
        );
        let with_wear = optimize_dispatch(
            &scenario,
            &DispatchOptions {
                include_wear_in_objective: true,
                ..opts()
            },
        )
        .unwrap();
        assert!(
            (with_wear.costs.total_cost
                - with_wear.costs.energy_cost
                - with_wear.costs.peak_charge
                - with_wear.costs.battery_wear_cost)
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn relaxation_ordering_on_small_scenario() {
        let mut scenario = bare_scenario(
            vec![vec![0.3, 0.32, 0.35, 0.33, 0.3, 0.28]],
            vec![80.0, 90.0, 200.0, 250.0, 110.0, 95.0],
        );
        scenario.ramp_limit_fraction = 1.0;
        scenario.bess_units.push(BessSpec::standard("bess_1"));
        let lp = optimize_dispatch(&scenario, &opts()).unwrap();
        let milp = optimize_dispatch(&scenario, &DispatchOptions::binary_modes()).unwrap();
        assert!(
            milp.costs.total_cost >= lp.costs.total_cost - 1e-6,
            "binary modes {} vs linear budget {}",
            milp.costs.total_cost,
            lp.costs.total_cost
        );
    }

    #[test]
    fn time_grid_scales_energy_terms() {
        // Two 12-hour periods: the same MW load costs twice the hourly rate.
        let mut scenario = bare_scenario(vec![vec![1.0, 1.0]], vec![100.0, 100.0]);
        scenario.time_grid = TimeGrid {
            period_count: 2,
            period_hours: 12.0,
        };
        scenario.balance_tolerance = 0.0;
        let outcome = optimize_dispatch(&scenario, &opts()).unwrap();
        assert!((outcome.costs.energy_cost - 2_400.0).abs() < 1e-6);
    }
}
