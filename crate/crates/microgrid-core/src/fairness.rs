//! Fairness and synergy metrics computed from a schedule, an allocation
//! report, and standalone-cost counterfactuals.
//!
//! Metrics that lose their denominator (no solar, zero load, zero benefits)
//! are reported as explicitly undefined rather than as sentinel numbers.

use serde::{Deserialize, Serialize};

use crate::allocation::AllocationReport;
use crate::dispatch::DispatchSchedule;
use crate::model::Scenario;

/// Why a metric could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricUndefined {
    ZeroBenefitDenominator,
    ZeroCostDenominator,
    ZeroTotalLoad,
    ZeroSolar,
    ZeroLoadPeak,
}

impl std::fmt::Display for MetricUndefined {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            MetricUndefined::ZeroBenefitDenominator => {
                "total benefits (solar + peak savings) are zero"
            }
            MetricUndefined::ZeroCostDenominator => "total costs (battery + grid) are zero",
            MetricUndefined::ZeroTotalLoad => "total load energy is zero",
            MetricUndefined::ZeroSolar => "no solar generation available",
            MetricUndefined::ZeroLoadPeak => "original load peak is zero",
        };
        f.write_str(text)
    }
}

/// Normalized benefit share minus normalized cost share per participant.
/// The shares each sum to one, so the net positions sum to zero.
pub fn net_positions(report: &AllocationReport) -> Result<Vec<f64>, MetricUndefined> {
    let n = report.participants();
    let benefit_total: f64 = (0..n)
        .map(|i| report.solar_benefit[i] + report.peak_savings[i])
        .sum();
    let cost_total: f64 = (0..n)
        .map(|i| report.bess_cost[i] + report.grid_cost[i])
        .sum();
    if benefit_total <= 0.0 {
        return Err(MetricUndefined::ZeroBenefitDenominator);
    }
    if cost_total <= 0.0 {
        return Err(MetricUndefined::ZeroCostDenominator);
    }
    Ok((0..n)
        .map(|i| {
            (report.solar_benefit[i] + report.peak_savings[i]) / benefit_total
                - (report.bess_cost[i] + report.grid_cost[i]) / cost_total
        })
        .collect())
}

/// Total and per-participant value created by pooling: the standalone cost
/// sum minus the cooperative total.
pub fn cooperative_gain(standalone: &[f64], coop_total: f64) -> (f64, f64) {
    let standalone_sum: f64 = standalone.iter().sum();
    let cg = standalone_sum - coop_total;
    (cg, cg / standalone.len() as f64)
}

/// Each participant's share of total load energy.
pub fn load_proportions(scenario: &Scenario) -> Result<Vec<f64>, MetricUndefined> {
    let totals: Vec<f64> = scenario
        .loads
        .iter()
        .map(|l| l.demand.iter().sum::<f64>())
        .collect();
    let grand: f64 = totals.iter().sum();
    if grand <= 0.0 {
        return Err(MetricUndefined::ZeroTotalLoad);
    }
    Ok(totals.into_iter().map(|v| v / grand).collect())
}

/// Absolute deviation of net position from load proportion.
pub fn deviations(net_position: &[f64], load_proportion: &[f64]) -> Vec<f64> {
    net_position
        .iter()
        .zip(load_proportion)
        .map(|(np, lp)| (np - lp).abs())
        .collect()
}

/// Fraction of available solar energy allocated to loads. Bounded by one
/// while allocations respect the per-unit budget.
pub fn solar_utilization(
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> Result<f64, MetricUndefined> {
    let available: f64 = scenario
        .solar_units
        .iter()
        .flat_map(|u| u.generation.iter())
        .sum();
    if available <= 0.0 {
        return Err(MetricUndefined::ZeroSolar);
    }
    let mut used = 0.0;
    for i in 0..scenario.participant_count() {
        for (j, unit) in scenario.solar_units.iter().enumerate() {
            for t in 0..scenario.periods() {
                used += schedule.solar_alloc[i][j][t] * unit.generation[t];
            }
        }
    }
    Ok(used / available)
}

/// Solar utilization extended with a credit for battery discharge energy
/// that was originally charged from solar, so it can exceed one.
///
/// Attribution is per period, grid first: charging is assumed to draw on
/// grid import before allocated solar. Within each period charging is
/// accounted before discharging. Each battery carries a solar-content
/// inventory that discharges draw down proportionally; the initial state of
/// charge counts as non-solar.
pub fn effective_solar_utilization(
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> Result<f64, MetricUndefined> {
    let dt = scenario.period_hours();
    let available: f64 = scenario
        .solar_units
        .iter()
        .flat_map(|u| u.generation.iter())
        .map(|g| g * dt)
        .sum();
    if available <= 0.0 {
        return Err(MetricUndefined::ZeroSolar);
    }

    let n = scenario.participant_count();
    let b = scenario.bess_count();
    let mut direct = 0.0;
    let mut shifted = 0.0;
    // Solar-sourced energy currently stored in each battery, MWh.
    let mut solar_content = vec![0.0_f64; b];

    for t in 0..scenario.periods() {
        let grid_power: f64 = (0..n).map(|i| schedule.grid_import[i][t]).sum();
        let mut allocated_power = 0.0;
        for i in 0..n {
            for (j, unit) in scenario.solar_units.iter().enumerate() {
                allocated_power += schedule.solar_alloc[i][j][t] * unit.generation[t];
            }
        }
        direct += allocated_power * dt;

        let charge_power: f64 = (0..b)
            .map(|k| (0..n).map(|i| schedule.charge[i][k][t]).sum::<f64>())
            .sum();
        let solar_charge_power = (charge_power - grid_power).max(0.0).min(allocated_power);
        let solar_fraction = if charge_power > 0.0 {
            solar_charge_power / charge_power
        } else {
            0.0
        };

        for (k, bess) in scenario.bess_units.iter().enumerate() {
            let charge_k: f64 = (0..n).map(|i| schedule.charge[i][k][t]).sum();
            let discharge_k: f64 = (0..n).map(|i| schedule.discharge[i][k][t]).sum();
            let stored_before = if t == 0 {
                bess.soc_initial * bess.capacity_mwh
            } else {
                schedule.soc[k][t - 1]
            };
            // Charge first.
            solar_content[k] += bess.charge_eff * charge_k * dt * solar_fraction;
            let store_level = stored_before + bess.charge_eff * charge_k * dt;
            // Then discharge draws down the mixed store proportionally.
            if discharge_k > 0.0 && store_level > 0.0 {
                let fraction = (solar_content[k] / store_level).clamp(0.0, 1.0);
                let outflow = discharge_k * dt / bess.discharge_eff;
                solar_content[k] = (solar_content[k] - fraction * outflow).max(0.0);
                shifted += fraction * discharge_k * dt;
            }
        }
    }
    Ok((direct + shifted) / available)
}

/// Equivalent full discharge cycles per battery.
pub fn bess_cycling(schedule: &DispatchSchedule, scenario: &Scenario) -> Vec<f64> {
    let dt = scenario.period_hours();
    let n = scenario.participant_count();
    scenario
        .bess_units
        .iter()
        .enumerate()
        .map(|(k, bess)| {
            let discharged: f64 = (0..scenario.periods())
                .map(|t| (0..n).map(|i| schedule.discharge[i][k][t]).sum::<f64>() * dt)
                .sum();
            discharged / bess.capacity_mwh
        })
        .collect()
}

/// Relative reduction of the system peak versus the original load peak.
pub fn peak_reduction_efficiency(
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> Result<f64, MetricUndefined> {
    let original = scenario.peak_load();
    if original <= 0.0 {
        return Err(MetricUndefined::ZeroLoadPeak);
    }
    Ok((original - schedule.system_peak_mw) / original)
}

/// The synergy metric bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynergyMetrics {
    pub solar_utilization_rate: Option<f64>,
    pub effective_solar_utilization: Option<f64>,
    pub bess_cycling: Vec<f64>,
    pub peak_reduction_efficiency: Option<f64>,
}

pub fn synergy_metrics(schedule: &DispatchSchedule, scenario: &Scenario) -> SynergyMetrics {
    SynergyMetrics {
        solar_utilization_rate: solar_utilization(schedule, scenario).ok(),
        effective_solar_utilization: effective_solar_utilization(schedule, scenario).ok(),
        bess_cycling: bess_cycling(schedule, scenario),
        peak_reduction_efficiency: peak_reduction_efficiency(schedule, scenario).ok(),
    }
}

/// Per-participant fairness positions plus system-level gains and synergy
/// metrics. `None` marks metrics whose denominators vanished; `notes`
/// explains each one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub net_position: Option<Vec<f64>>,
    pub load_proportion: Option<Vec<f64>>,
    pub proportionality_deviation: Option<Vec<f64>>,
    pub cooperative_gain: f64,
    pub average_gain: f64,
    pub solar_utilization_rate: Option<f64>,
    pub effective_solar_utilization: Option<f64>,
    pub bess_cycling: Vec<f64>,
    pub peak_reduction_efficiency: Option<f64>,
    pub notes: Vec<String>,
}

/// Assembles the full fairness suite.
pub fn build_report(
    scenario: &Scenario,
    schedule: &DispatchSchedule,
    allocation: &AllocationReport,
    standalone: &[f64],
    coop_total: f64,
) -> FairnessReport {
    let mut notes = Vec::new();
    let mut note = |name: &str, reason: MetricUndefined| {
        notes.push(format!("{name} undefined: {reason}"));
    };

    let net_position = match net_positions(allocation) {
        Ok(v) => Some(v),
        Err(reason) => {
            note("net_position", reason);
            None
        }
    };
    let load_proportion = match load_proportions(scenario) {
        Ok(v) => Some(v),
        Err(reason) => {
            note("load_proportion", reason);
            None
        }
    };
    let proportionality_deviation = match (&net_position, &load_proportion) {
        (Some(np), Some(lp)) => Some(deviations(np, lp)),
        _ => None,
    };
    let (cooperative_gain, average_gain) = self::cooperative_gain(standalone, coop_total);

    let solar_utilization_rate = match solar_utilization(schedule, scenario) {
        Ok(v) => Some(v),
        Err(reason) => {
            note("solar_utilization_rate", reason);
            None
        }
    };
    let effective = match effective_solar_utilization(schedule, scenario) {
        Ok(v) => Some(v),
        Err(_) => None, // same denominator as the base rate; one note suffices
    };
    let peak_reduction = match peak_reduction_efficiency(schedule, scenario) {
        Ok(v) => Some(v),
        Err(reason) => {
            note("peak_reduction_efficiency", reason);
            None
        }
    };
    if allocation.grid_cost_equal_split {
        notes.push(
            "grid_cost used the equal-split fallback: total grid import is zero".to_string(),
        );
    }

    FairnessReport {
        net_position,
        load_proportion,
        proportionality_deviation,
        cooperative_gain,
        average_gain,
        solar_utilization_rate,
        effective_solar_utilization: effective,
        bess_cycling: bess_cycling(schedule, scenario),
        peak_reduction_efficiency: peak_reduction,
        notes,
    }
}
