//! Core domain types and scenario validation.
//!
//! All types are immutable after construction and safe to share across
//! threads. Series are dense arrays indexed `0..T-1`; units are MW, MWh,
//! $/MWh, and hours throughout.

use serde::{Deserialize, Serialize};

pub const DEFAULT_PEAK_CHARGE_RATE: f64 = 8_700.0;
pub const DEFAULT_BATTERY_WEAR_COST: f64 = 10.0;
pub const DEFAULT_GRID_FIXED_COST: f64 = 1_000.0;
pub const DEFAULT_BALANCE_TOLERANCE: f64 = 0.001;
pub const DEFAULT_RAMP_LIMIT_FRACTION: f64 = 0.2;
pub const DEFAULT_SOLAR_RATED_MW: f64 = 1.5;

/// Discrete optimization horizon: `period_count` periods of `period_hours` each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub period_count: usize,
    pub period_hours: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            period_count: 24,
            period_hours: 1.0,
        }
    }
}

/// One participant's demand series in MW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadProfile {
    pub participant_id: String,
    pub demand: Vec<f64>,
}

/// One shared solar unit: generation series in MW and nameplate rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolarUnit {
    pub unit_id: String,
    pub generation: Vec<f64>,
    pub rated_capacity: f64,
}

/// Battery energy storage unit parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BessSpec {
    pub unit_id: String,
    pub capacity_mwh: f64,
    pub power_limit_mw: f64,
    pub charge_eff: f64,
    pub discharge_eff: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    pub soc_terminal_min: f64,
    pub soc_initial: f64,
    pub min_dwell_periods: usize,
}

impl BessSpec {
    /// Standard unit parameters: 1.0 MWh, 0.5 MW, 96 %/96 % efficiencies,
    /// SOC window 15-95 %, terminal and initial SOC 40 %, 2-period dwell.
    pub fn standard(unit_id: impl Into<String>) -> Self {
        Self {
            unit_id: unit_id.into(),
            capacity_mwh: 1.0,
            power_limit_mw: 0.5,
            charge_eff: 0.96,
            discharge_eff: 0.96,
            soc_min: 0.15,
            soc_max: 0.95,
            soc_terminal_min: 0.40,
            soc_initial: 0.40,
            min_dwell_periods: 2,
        }
    }
}

/// Tariff parameters: time-of-use energy prices plus the per-day peak,
/// wear, and fixed-cost rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tariff {
    /// $/MWh per period.
    pub energy_price: Vec<f64>,
    /// $/MW, applied once per optimized day.
    pub peak_charge_rate: f64,
    /// $/MWh of battery throughput.
    pub battery_wear_cost: f64,
    /// $/day.
    pub grid_fixed_cost: f64,
}

/// Complete input for one optimization day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub time_grid: TimeGrid,
    pub loads: Vec<LoadProfile>,
    pub solar_units: Vec<SolarUnit>,
    pub bess_units: Vec<BessSpec>,
    pub tariff: Tariff,
    /// Fractional half-width of the power-balance band.
    pub balance_tolerance: f64,
    /// Grid import ramp limit as a fraction of the current-period load.
    pub ramp_limit_fraction: f64,
}

impl Scenario {
    pub fn participant_count(&self) -> usize {
        self.loads.len()
    }

    pub fn solar_count(&self) -> usize {
        self.solar_units.len()
    }

    pub fn bess_count(&self) -> usize {
        self.bess_units.len()
    }

    pub fn periods(&self) -> usize {
        self.time_grid.period_count
    }

    pub fn period_hours(&self) -> f64 {
        self.time_grid.period_hours
    }

    /// Total demand across participants at period `t`, in MW.
    pub fn total_load_at(&self, t: usize) -> f64 {
        self.loads.iter().map(|l| l.demand[t]).sum()
    }

    /// Highest simultaneous demand across the horizon, in MW.
    pub fn peak_load(&self) -> f64 {
        (0..self.periods())
            .map(|t| self.total_load_at(t))
            .fold(0.0, f64::max)
    }

    /// Total demand energy over the horizon, in MWh.
    pub fn total_load_energy(&self) -> f64 {
        let dt = self.period_hours();
        (0..self.periods())
            .map(|t| self.total_load_at(t) * dt)
            .sum()
    }

    /// Total solar generation over the horizon, in MWh.
    pub fn total_solar_energy(&self) -> f64 {
        let dt = self.period_hours();
        self.solar_units
            .iter()
            .flat_map(|u| u.generation.iter())
            .map(|g| g * dt)
            .sum()
    }
}

/// One violated invariant: where it is and what is wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationFinding {
    pub path: String,
    pub reason: String,
}

impl std::fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

/// Checks every type invariant; an empty result means the scenario is
/// accepted by all downstream operations. Pure: identical inputs give
/// identical findings.
pub fn validate_scenario(scenario: &Scenario) -> Vec<ValidationFinding> {
    let mut findings = Vec::new();
    let mut push = |path: &str, reason: String| {
        findings.push(ValidationFinding {
            path: path.to_string(),
            reason,
        });
    };

    let t = scenario.time_grid.period_count;
    if t < 1 {
        push("time_grid.period_count", "must be >= 1".to_string());
    }
    if !(scenario.time_grid.period_hours > 0.0) {
        push(
            "time_grid.period_hours",
            format!("must be > 0, got {}", scenario.time_grid.period_hours),
        );
    }

    if scenario.loads.is_empty() {
        push("loads", "at least one participant required".to_string());
    }
    let mut seen = std::collections::BTreeSet::new();
    for (i, load) in scenario.loads.iter().enumerate() {
        let path = format!("loads[{}]", i);
        if !seen.insert(load.participant_id.as_str()) {
            push(
                &path,
                format!("duplicate participant id '{}'", load.participant_id),
            );
        }
        if load.demand.len() != t {
            push(
                &format!("{}.demand", path),
                format!("series length mismatch: {} entries, expected {}", load.demand.len(), t),
            );
        }
        for (idx, &d) in load.demand.iter().enumerate() {
            if !(d >= 0.0) {
                push(
                    &format!("{}.demand[{}]", path, idx),
                    format!("must be >= 0, got {}", d),
                );
                break;
            }
        }
    }

    for (j, unit) in scenario.solar_units.iter().enumerate() {
        let path = format!("solar_units[{}]", j);
        if unit.generation.len() != t {
            push(
                &format!("{}.generation", path),
                format!(
                    "series length mismatch: {} entries, expected {}",
                    unit.generation.len(),
                    t
                ),
            );
        }
        for (idx, &g) in unit.generation.iter().enumerate() {
            if !(g >= 0.0) || g > unit.rated_capacity + 1e-12 {
                push(
                    &format!("{}.generation[{}]", path, idx),
                    format!(
                        "must be within [0, rated_capacity {}], got {}",
                        unit.rated_capacity, g
                    ),
                );
                break;
            }
        }
    }

    for (k, bess) in scenario.bess_units.iter().enumerate() {
        let path = format!("bess_units[{}]", k);
        if !(bess.charge_eff > 0.0 && bess.charge_eff <= 1.0) {
            push(
                &format!("{}.charge_eff", path),
                format!("must be in (0, 1], got {}", bess.charge_eff),
            );
        }
        if !(bess.discharge_eff > 0.0 && bess.discharge_eff <= 1.0) {
            push(
                &format!("{}.discharge_eff", path),
                format!("must be in (0, 1], got {}", bess.discharge_eff),
            );
        }
        if !(bess.soc_min >= 0.0 && bess.soc_min < bess.soc_max && bess.soc_max <= 1.0) {
            push(
                &format!("{}.soc_min", path),
                format!(
                    "soc_min < soc_max violated: soc_min {}, soc_max {}",
                    bess.soc_min, bess.soc_max
                ),
            );
        }
        if bess.soc_initial < bess.soc_min || bess.soc_initial > bess.soc_max {
            push(
                &format!("{}.soc_initial", path),
                format!(
                    "must lie within [soc_min {}, soc_max {}], got {}",
                    bess.soc_min, bess.soc_max, bess.soc_initial
                ),
            );
        }
        if bess.soc_terminal_min < bess.soc_min || bess.soc_terminal_min > bess.soc_max {
            push(
                &format!("{}.soc_terminal_min", path),
                format!(
                    "must lie within [soc_min {}, soc_max {}], got {}",
                    bess.soc_min, bess.soc_max, bess.soc_terminal_min
                ),
            );
        }
        if !(bess.capacity_mwh > 0.0) {
            push(
                &format!("{}.capacity_mwh", path),
                format!("must be > 0, got {}", bess.capacity_mwh),
            );
        }
        if !(bess.power_limit_mw > 0.0) {
            push(
                &format!("{}.power_limit_mw", path),
                format!("must be > 0, got {}", bess.power_limit_mw),
            );
        }
        if bess.min_dwell_periods < 1 {
            push(
                &format!("{}.min_dwell_periods", path),
                "must be >= 1".to_string(),
            );
        }
    }

    if scenario.tariff.energy_price.len() != t {
        push(
            "tariff.energy_price",
            format!(
                "series length mismatch: {} entries, expected {}",
                scenario.tariff.energy_price.len(),
                t
            ),
        );
    }
    for (idx, &p) in scenario.tariff.energy_price.iter().enumerate() {
        if !(p > 0.0) {
            push(
                &format!("tariff.energy_price[{}]", idx),
                format!("must be > 0, got {}", p),
            );
            break;
        }
    }
    if !(scenario.tariff.peak_charge_rate >= 0.0) {
        push(
            "tariff.peak_charge_rate",
            format!("must be >= 0, got {}", scenario.tariff.peak_charge_rate),
        );
    }
    if !(scenario.tariff.battery_wear_cost >= 0.0) {
        push(
            "tariff.battery_wear_cost",
            format!("must be >= 0, got {}", scenario.tariff.battery_wear_cost),
        );
    }
    if !(scenario.tariff.grid_fixed_cost >= 0.0) {
        push(
            "tariff.grid_fixed_cost",
            format!("must be >= 0, got {}", scenario.tariff.grid_fixed_cost),
        );
    }

    if !(scenario.balance_tolerance >= 0.0 && scenario.balance_tolerance < 1.0) {
        push(
            "balance_tolerance",
            format!("must be in [0, 1), got {}", scenario.balance_tolerance),
        );
    }
    if !(scenario.ramp_limit_fraction >= 0.0 && scenario.ramp_limit_fraction <= 1.0) {
        push(
            "ramp_limit_fraction",
            format!("must be in [0, 1], got {}", scenario.ramp_limit_fraction),
        );
    }

    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::table_shaped_scenario;

    #[test]
    fn table_shaped_scenario_is_clean() {
        let findings = validate_scenario(&table_shaped_scenario());
        assert!(findings.is_empty(), "{:?}", findings);
    }

    #[test]
    fn inverted_soc_bounds_flagged() {
        let mut s = table_shaped_scenario();
        s.bess_units[0].soc_min = 0.95;
        s.bess_units[0].soc_max = 0.15;
        let findings = validate_scenario(&s);
        assert!(findings
            .iter()
            .any(|f| f.reason.contains("soc_min < soc_max violated")));
    }

    #[test]
    fn short_price_series_flagged() {
        let mut s = table_shaped_scenario();
        s.tariff.energy_price.truncate(23);
        let findings = validate_scenario(&s);
        assert!(findings.iter().any(|f| {
            f.path == "tariff.energy_price" && f.reason.contains("length mismatch")
        }));
    }

    #[test]
    fn duplicate_participant_flagged() {
        let mut s = table_shaped_scenario();
        s.loads[3].participant_id = s.loads[0].participant_id.clone();
        let findings = validate_scenario(&s);
        assert!(findings.iter().any(|f| f.reason.contains("duplicate")));
    }

    #[test]
    fn validation_is_pure() {
        let mut s = table_shaped_scenario();
        s.bess_units[1].soc_initial = 0.05;
        let a = validate_scenario(&s);
        let b = validate_scenario(&s);
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}
