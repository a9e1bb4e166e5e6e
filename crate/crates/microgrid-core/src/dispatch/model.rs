//! Translation of a scenario into the linear/mixed-integer dispatch model.

use lp_solver::{LinearProblem, Relation};

use crate::model::Scenario;

use super::{AntiSimultaneityMode, DispatchError, DispatchOptions, DwellTimeMode};

/// Column layout of the dispatch model. All index helpers are total over the
/// ranges declared at build time.
#[derive(Debug, Clone)]
pub struct VariableMap {
    pub participants: usize,
    pub solar_units: usize,
    pub bess_units: usize,
    pub periods: usize,
    grid_base: usize,
    alloc_base: usize,
    charge_base: usize,
    discharge_base: usize,
    soc_base: usize,
    peak_index: usize,
    mode_base: Option<usize>,
    pub variable_count: usize,
}

impl VariableMap {
    fn new(n: usize, s: usize, b: usize, t: usize, with_modes: bool) -> Self {
        let grid_base = 0;
        let alloc_base = grid_base + n * t;
        let charge_base = alloc_base + n * s * t;
        let discharge_base = charge_base + n * b * t;
        let soc_base = discharge_base + n * b * t;
        let peak_index = soc_base + b * t;
        let mode_base = if with_modes { Some(peak_index + 1) } else { None };
        let variable_count = peak_index + 1 + if with_modes { b * t } else { 0 };
        Self {
            participants: n,
            solar_units: s,
            bess_units: b,
            periods: t,
            grid_base,
            alloc_base,
            charge_base,
            discharge_base,
            soc_base,
            peak_index,
            mode_base,
            variable_count,
        }
    }

    /// Grid import G_i(t).
    pub fn grid(&self, i: usize, t: usize) -> usize {
        self.grid_base + i * self.periods + t
    }

    /// Solar allocation fraction for (participant, unit, period).
    pub fn alloc(&self, i: usize, j: usize, t: usize) -> usize {
        self.alloc_base + (i * self.solar_units + j) * self.periods + t
    }

    /// Charging power routed through participant i into battery k.
    pub fn charge(&self, i: usize, k: usize, t: usize) -> usize {
        self.charge_base + (i * self.bess_units + k) * self.periods + t
    }

    /// Discharging power from battery k to participant i.
    pub fn discharge(&self, i: usize, k: usize, t: usize) -> usize {
        self.discharge_base + (i * self.bess_units + k) * self.periods + t
    }

    /// Stored energy of battery k at the end of period t, in MWh.
    pub fn soc(&self, k: usize, t: usize) -> usize {
        self.soc_base + k * self.periods + t
    }

    /// Declared system peak in MW.
    pub fn peak(&self) -> usize {
        self.peak_index
    }

    /// Charge/discharge mode indicator of battery k (1 = charging),
    /// present only when binary modes were requested.
    pub fn mode(&self, k: usize, t: usize) -> Option<usize> {
        self.mode_base.map(|base| base + k * self.periods + t)
    }
}

/// Provenance of each constraint row, used for infeasibility diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowLabel {
    BalanceLower { participant: usize, period: usize },
    BalanceUpper { participant: usize, period: usize },
    SolarBudget { unit: usize, period: usize },
    SocRecursion { unit: usize, period: usize },
    ChargeCap { unit: usize, period: usize },
    DischargeCap { unit: usize, period: usize },
    PowerBudget { unit: usize, period: usize },
    ChargeMode { unit: usize, period: usize },
    DischargeMode { unit: usize, period: usize },
    DwellOn { unit: usize, switch_period: usize, hold_period: usize },
    DwellOff { unit: usize, switch_period: usize, hold_period: usize },
    TerminalSoc { unit: usize },
    PeakTracking { period: usize },
    RampUp { participant: usize, period: usize },
    RampDown { participant: usize, period: usize },
}

impl std::fmt::Display for RowLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowLabel::BalanceLower { participant, period } => {
                write!(f, "balance lower band, participant {participant}, period {period}")
            }
            RowLabel::BalanceUpper { participant, period } => {
                write!(f, "balance upper band, participant {participant}, period {period}")
            }
            RowLabel::SolarBudget { unit, period } => {
                write!(f, "solar allocation budget, unit {unit}, period {period}")
            }
            RowLabel::SocRecursion { unit, period } => {
                write!(f, "state-of-charge recursion, battery {unit}, period {period}")
            }
            RowLabel::ChargeCap { unit, period } => {
                write!(f, "charge power cap, battery {unit}, period {period}")
            }
            RowLabel::DischargeCap { unit, period } => {
                write!(f, "discharge power cap, battery {unit}, period {period}")
            }
            RowLabel::PowerBudget { unit, period } => {
                write!(f, "combined charge+discharge budget, battery {unit}, period {period}")
            }
            RowLabel::ChargeMode { unit, period } => {
                write!(f, "charge mode link, battery {unit}, period {period}")
            }
            RowLabel::DischargeMode { unit, period } => {
                write!(f, "discharge mode link, battery {unit}, period {period}")
            }
            RowLabel::DwellOn { unit, switch_period, hold_period } => write!(
                f,
                "minimum dwell (on), battery {unit}, switch at {switch_period}, hold {hold_period}"
            ),
            RowLabel::DwellOff { unit, switch_period, hold_period } => write!(
                f,
                "minimum dwell (off), battery {unit}, switch at {switch_period}, hold {hold_period}"
            ),
            RowLabel::TerminalSoc { unit } => write!(f, "terminal state of charge, battery {unit}"),
            RowLabel::PeakTracking { period } => write!(f, "peak tracking, period {period}"),
            RowLabel::RampUp { participant, period } => {
                write!(f, "ramp-up limit, participant {participant}, period {period}")
            }
            RowLabel::RampDown { participant, period } => {
                write!(f, "ramp-down limit, participant {participant}, period {period}")
            }
        }
    }
}

/// The assembled problem together with its column map and row provenance.
#[derive(Debug, Clone)]
pub struct DispatchModel {
    pub problem: LinearProblem,
    pub map: VariableMap,
    pub row_labels: Vec<RowLabel>,
}

/// Builds the dispatch optimization model for a validated scenario.
pub fn build_model(
    scenario: &Scenario,
    options: &DispatchOptions,
) -> Result<DispatchModel, DispatchError> {
    let findings = crate::model::validate_scenario(scenario);
    if !findings.is_empty() {
        return Err(DispatchError::InvalidScenario(findings));
    }
    if options.dwell_time == DwellTimeMode::BinaryModes
        && options.anti_simultaneity != AntiSimultaneityMode::BinaryModes
    {
        return Err(DispatchError::InvalidOptions(
            "dwell-time enforcement requires binary anti-simultaneity modes".into(),
        ));
    }

    let n = scenario.participant_count();
    let s = scenario.solar_count();
    let b = scenario.bess_count();
    let t = scenario.periods();
    let dt = scenario.period_hours();
    let eps = scenario.balance_tolerance;
    let ramp = scenario.ramp_limit_fraction;
    let with_modes = options.anti_simultaneity == AntiSimultaneityMode::BinaryModes;

    let map = VariableMap::new(n, s, b, t, with_modes);
    let mut problem = LinearProblem::new(map.variable_count);
    let mut labels = Vec::new();

    // Objective: energy cost + peak charge, optionally battery wear.
    for i in 0..n {
        for period in 0..t {
            problem.set_objective_coeff(
                map.grid(i, period),
                scenario.tariff.energy_price[period] * dt,
            );
        }
    }
    problem.set_objective_coeff(map.peak(), scenario.tariff.peak_charge_rate);
    if options.include_wear_in_objective {
        let wear = scenario.tariff.battery_wear_cost * dt;
        for i in 0..n {
            for k in 0..b {
                for period in 0..t {
                    problem.set_objective_coeff(map.charge(i, k, period), wear);
                    problem.set_objective_coeff(map.discharge(i, k, period), wear);
                }
            }
        }
    }

    // SOC box limits as variable bounds; mode indicators as binaries.
    for (k, bess) in scenario.bess_units.iter().enumerate() {
        let lo = bess.soc_min * bess.capacity_mwh;
        let hi = bess.soc_max * bess.capacity_mwh;
        for period in 0..t {
            problem.set_bounds(map.soc(k, period), lo, hi);
        }
        if with_modes {
            for period in 0..t {
                problem.mark_binary(map.mode(k, period).expect("modes enabled"));
            }
        }
    }

    // Power balance band: two inequality rows per participant and period.
    for i in 0..n {
        for period in 0..t {
            let load = scenario.loads[i].demand[period];
            let mut coeffs = vec![(map.grid(i, period), 1.0)];
            for (j, unit) in scenario.solar_units.iter().enumerate() {
                let gen = unit.generation[period];
                if gen != 0.0 {
                    coeffs.push((map.alloc(i, j, period), gen));
                }
            }
            for k in 0..b {
                coeffs.push((map.discharge(i, k, period), 1.0));
                coeffs.push((map.charge(i, k, period), -1.0));
            }
            problem.add_constraint(coeffs.clone(), Relation::Ge, load * (1.0 - eps));
            labels.push(RowLabel::BalanceLower { participant: i, period });
            problem.add_constraint(coeffs, Relation::Le, load * (1.0 + eps));
            labels.push(RowLabel::BalanceUpper { participant: i, period });
        }
    }

    // Each solar unit's output can be allocated at most once.
    for j in 0..s {
        for period in 0..t {
            let coeffs = (0..n).map(|i| (map.alloc(i, j, period), 1.0)).collect();
            problem.add_constraint(coeffs, Relation::Le, 1.0);
            labels.push(RowLabel::SolarBudget { unit: j, period });
        }
    }

    // SOC evolution anchored at the initial charge, plus power caps.
    for (k, bess) in scenario.bess_units.iter().enumerate() {
        for period in 0..t {
            let mut coeffs = vec![(map.soc(k, period), 1.0)];
            if period > 0 {
                coeffs.push((map.soc(k, period - 1), -1.0));
            }
            for i in 0..n {
                coeffs.push((map.charge(i, k, period), -bess.charge_eff * dt));
                coeffs.push((map.discharge(i, k, period), dt / bess.discharge_eff));
            }
            let rhs = if period == 0 {
                bess.soc_initial * bess.capacity_mwh
            } else {
                0.0
            };
            problem.add_constraint(coeffs, Relation::Eq, rhs);
            labels.push(RowLabel::SocRecursion { unit: k, period });
        }

        let p_max = bess.power_limit_mw;
        for period in 0..t {
            let charge_sum: Vec<(usize, f64)> =
                (0..n).map(|i| (map.charge(i, k, period), 1.0)).collect();
            let discharge_sum: Vec<(usize, f64)> =
                (0..n).map(|i| (map.discharge(i, k, period), 1.0)).collect();

            problem.add_constraint(charge_sum.clone(), Relation::Le, p_max);
            labels.push(RowLabel::ChargeCap { unit: k, period });
            problem.add_constraint(discharge_sum.clone(), Relation::Le, p_max);
            labels.push(RowLabel::DischargeCap { unit: k, period });

            let mut budget = charge_sum.clone();
            budget.extend(discharge_sum.iter().copied());
            problem.add_constraint(budget, Relation::Le, p_max);
            labels.push(RowLabel::PowerBudget { unit: k, period });

            if with_modes {
                let z = map.mode(k, period).expect("modes enabled");
                let mut charging = charge_sum.clone();
                charging.push((z, -p_max));
                problem.add_constraint(charging, Relation::Le, 0.0);
                labels.push(RowLabel::ChargeMode { unit: k, period });

                let mut discharging = discharge_sum.clone();
                discharging.push((z, p_max));
                problem.add_constraint(discharging, Relation::Le, p_max);
                labels.push(RowLabel::DischargeMode { unit: k, period });
            }
        }

        problem.add_constraint(
            vec![(map.soc(k, t - 1), 1.0)],
            Relation::Ge,
            bess.soc_terminal_min * bess.capacity_mwh,
        );
        labels.push(RowLabel::TerminalSoc { unit: k });

        // Minimum dwell on the mode indicator: once it switches, it holds for
        // min_dwell_periods. The first period has no predecessor and is free.
        if options.dwell_time == DwellTimeMode::BinaryModes {
            let tau = bess.min_dwell_periods;
            for switch in 1..t {
                for hold in (switch + 1)..t.min(switch + tau) {
                    let z_prev = map.mode(k, switch - 1).expect("modes enabled");
                    let z_switch = map.mode(k, switch).expect("modes enabled");
                    let z_hold = map.mode(k, hold).expect("modes enabled");
                    // Switch on: z(hold) >= z(switch) - z(prev).
                    problem.add_constraint(
                        vec![(z_hold, 1.0), (z_switch, -1.0), (z_prev, 1.0)],
                        Relation::Ge,
                        0.0,
                    );
                    labels.push(RowLabel::DwellOn {
                        unit: k,
                        switch_period: switch,
                        hold_period: hold,
                    });
                    // Switch off: z(hold) <= 1 - z(prev) + z(switch).
                    problem.add_constraint(
                        vec![(z_hold, 1.0), (z_switch, -1.0), (z_prev, 1.0)],
                        Relation::Le,
                        1.0,
                    );
                    labels.push(RowLabel::DwellOff {
                        unit: k,
                        switch_period: switch,
                        hold_period: hold,
                    });
                }
            }
        }
    }

    // Total grid import never exceeds the declared peak.
    for period in 0..t {
        let mut coeffs: Vec<(usize, f64)> = (0..n).map(|i| (map.grid(i, period), 1.0)).collect();
        coeffs.push((map.peak(), -1.0));
        problem.add_constraint(coeffs, Relation::Le, 0.0);
        labels.push(RowLabel::PeakTracking { period });
    }

    // Ramp limits relative to the current-period load; no row at period 0.
    for i in 0..n {
        for period in 1..t {
            let bound = ramp * scenario.loads[i].demand[period];
            problem.add_constraint(
                vec![(map.grid(i, period), 1.0), (map.grid(i, period - 1), -1.0)],
                Relation::Le,
                bound,
            );
            labels.push(RowLabel::RampUp { participant: i, period });
            problem.add_constraint(
                vec![(map.grid(i, period - 1), 1.0), (map.grid(i, period), -1.0)],
                Relation::Le,
                bound,
            );
            labels.push(RowLabel::RampDown { participant: i, period });
        }
    }

    debug_assert_eq!(labels.len(), problem.constraints().len());
    Ok(DispatchModel {
        problem,
        map,
        row_labels: labels,
    })
}
