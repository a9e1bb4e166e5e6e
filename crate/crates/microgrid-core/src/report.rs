//! Assembled run report: everything a full pipeline run produces, with each
//! number re-derivable from the schedule and scenario.

use serde::{Deserialize, Serialize};

use crate::allocation::AllocationReport;
use crate::dispatch::{baseline_costs, CostBreakdown, DispatchSchedule, SolverStats};
use crate::fairness::FairnessReport;
use crate::model::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub participants: usize,
    pub solar_units: usize,
    pub bess_units: usize,
    pub periods: usize,
    pub period_hours: f64,
    pub total_load_mwh: f64,
    pub total_solar_mwh: f64,
    pub peak_load_mw: f64,
}

impl ScenarioSummary {
    pub fn from_scenario(scenario: &Scenario) -> Self {
        Self {
            participants: scenario.participant_count(),
            solar_units: scenario.solar_count(),
            bess_units: scenario.bess_count(),
            periods: scenario.periods(),
            period_hours: scenario.period_hours(),
            total_load_mwh: scenario.total_load_energy(),
            total_solar_mwh: scenario.total_solar_energy(),
            peak_load_mw: scenario.peak_load(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantDigest {
    pub id: String,
    pub load_mwh: f64,
    pub grid_energy_mwh: f64,
    pub solar_energy_mwh: f64,
    /// Discharge minus charge, MWh; negative means net charging duty.
    pub battery_net_mwh: f64,
    pub energy_cost_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryDigest {
    pub id: String,
    pub cycles: f64,
    pub throughput_mwh: f64,
    pub soc_min_mwh: f64,
    pub soc_max_mwh: f64,
    pub terminal_soc_mwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchDigest {
    pub system_peak_mw: f64,
    pub max_total_import_mw: f64,
    pub peak_reduction_percent: f64,
    pub cost_reduction_percent: f64,
    pub participants: Vec<ParticipantDigest>,
    pub batteries: Vec<BatteryDigest>,
}

/// Full pipeline output for one scenario day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioSummary,
    pub baseline: CostBreakdown,
    pub optimized: CostBreakdown,
    pub dispatch: DispatchDigest,
    pub allocation: AllocationReport,
    pub fairness: FairnessReport,
    pub standalone_policy: String,
    pub standalone_costs: Vec<f64>,
    pub solver: SolverStats,
}

/// Builds the digest sections from the raw schedule.
pub fn dispatch_digest(
    scenario: &Scenario,
    schedule: &DispatchSchedule,
    optimized: &CostBreakdown,
) -> DispatchDigest {
    let dt = scenario.period_hours();
    let baseline = baseline_costs(scenario);
    let participants = scenario
        .loads
        .iter()
        .enumerate()
        .map(|(i, load)| {
            let grid_energy: f64 = schedule.grid_import[i].iter().sum::<f64>() * dt;
            let solar_energy: f64 = scenario
                .solar_units
                .iter()
                .enumerate()
                .map(|(j, unit)| {
                    (0..scenario.periods())
                        .map(|t| schedule.solar_alloc[i][j][t] * unit.generation[t] * dt)
                        .sum::<f64>()
                })
                .sum();
            let battery_net: f64 = (0..scenario.bess_count())
                .map(|k| {
                    (0..scenario.periods())
                        .map(|t| {
                            (schedule.discharge[i][k][t] - schedule.charge[i][k][t]) * dt
                        })
                        .sum::<f64>()
                })
                .sum();
            let energy_cost: f64 = (0..scenario.periods())
                .map(|t| scenario.tariff.energy_price[t] * schedule.grid_import[i][t] * dt)
                .sum();
            ParticipantDigest {
                id: load.participant_id.clone(),
                load_mwh: load.demand.iter().sum::<f64>() * dt,
                grid_energy_mwh: grid_energy,
                solar_energy_mwh: solar_energy,
                battery_net_mwh: battery_net,
                energy_cost_usd: energy_cost,
            }
        })
        .collect();
    let batteries = scenario
        .bess_units
        .iter()
        .enumerate()
        .map(|(k, bess)| {
            let discharged: f64 = (0..scenario.periods())
                .map(|t| {
                    (0..scenario.participant_count())
                        .map(|i| schedule.discharge[i][k][t])
                        .sum::<f64>()
                        * dt
                })
                .sum();
            let charged: f64 = (0..scenario.periods())
                .map(|t| {
                    (0..scenario.participant_count())
                        .map(|i| schedule.charge[i][k][t])
                        .sum::<f64>()
                        * dt
                })
                .sum();
            let soc_min = schedule.soc[k].iter().copied().fold(f64::MAX, f64::min);
            let soc_max = schedule.soc[k].iter().copied().fold(f64::MIN, f64::max);
            BatteryDigest {
                id: bess.unit_id.clone(),
                cycles: discharged / bess.capacity_mwh,
                throughput_mwh: charged + discharged,
                soc_min_mwh: soc_min,
                soc_max_mwh: soc_max,
                terminal_soc_mwh: schedule.soc[k][scenario.periods() - 1],
            }
        })
        .collect();

    let peak_reduction_percent = if scenario.peak_load() > 0.0 {
        (scenario.peak_load() - schedule.system_peak_mw) / scenario.peak_load() * 100.0
    } else {
        0.0
    };
    let cost_reduction_percent = if baseline.total_cost > 0.0 {
        (baseline.total_cost - optimized.total_cost) / baseline.total_cost * 100.0
    } else {
        0.0
    };

    DispatchDigest {
        system_peak_mw: schedule.system_peak_mw,
        max_total_import_mw: schedule.max_total_import(),
        peak_reduction_percent,
        cost_reduction_percent,
        participants,
        batteries,
    }
}

/// Assembles a complete run report from the pipeline pieces.
#[allow(clippy::too_many_arguments)]
pub fn build_run_report(
    scenario: &Scenario,
    schedule: &DispatchSchedule,
    optimized: CostBreakdown,
    allocation: AllocationReport,
    fairness: FairnessReport,
    standalone_policy: &str,
    standalone_costs: Vec<f64>,
    solver: SolverStats,
) -> RunReport {
    let dispatch = dispatch_digest(scenario, schedule, &optimized);
    RunReport {
        scenario: ScenarioSummary::from_scenario(scenario),
        baseline: baseline_costs(scenario),
        optimized,
        dispatch,
        allocation,
        fairness,
        standalone_policy: standalone_policy.to_string(),
        standalone_costs,
        solver,
    }
}
