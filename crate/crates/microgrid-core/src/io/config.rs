//! Run configuration: TOML sections with Table-I style defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{
    BessSpec, DEFAULT_BALANCE_TOLERANCE, DEFAULT_BATTERY_WEAR_COST, DEFAULT_GRID_FIXED_COST,
    DEFAULT_PEAK_CHARGE_RATE, DEFAULT_RAMP_LIMIT_FRACTION, DEFAULT_SOLAR_RATED_MW,
};
use lp_solver::SolveOptions;

use super::IoError;
use crate::allocation::StandalonePolicy;
use crate::dispatch::{AntiSimultaneityMode, DispatchOptions, DwellTimeMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub time: TimeSection,
    pub files: FilesSection,
    pub tariff: TariffSection,
    pub dispatch: DispatchSection,
    pub solver: SolverSection,
    pub allocation: AllocationSection,
    pub output: OutputSection,
    pub solar_units: Vec<SolarUnitSpec>,
    pub bess_units: Vec<BessUnitSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            time: TimeSection::default(),
            files: FilesSection::default(),
            tariff: TariffSection::default(),
            dispatch: DispatchSection::default(),
            solver: SolverSection::default(),
            allocation: AllocationSection::default(),
            output: OutputSection::default(),
            solar_units: Vec::new(),
            bess_units: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub periods: usize,
    pub period_hours: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            periods: 24,
            period_hours: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilesSection {
    pub loads: PathBuf,
    pub solar: Option<PathBuf>,
    pub prices: PathBuf,
}

impl Default for FilesSection {
    fn default() -> Self {
        Self {
            loads: PathBuf::from("loads.csv"),
            solar: Some(PathBuf::from("solar.csv")),
            prices: PathBuf::from("prices.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TariffSection {
    pub peak_charge_rate: f64,
    pub battery_wear_cost: f64,
    pub grid_fixed_cost: f64,
}

impl Default for TariffSection {
    fn default() -> Self {
        Self {
            peak_charge_rate: DEFAULT_PEAK_CHARGE_RATE,
            battery_wear_cost: DEFAULT_BATTERY_WEAR_COST,
            grid_fixed_cost: DEFAULT_GRID_FIXED_COST,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispatchSection {
    pub balance_tolerance: f64,
    pub ramp_limit_fraction: f64,
    pub anti_simultaneity: AntiSimultaneityMode,
    pub dwell_time: DwellTimeMode,
    pub include_wear_in_objective: bool,
}

impl Default for DispatchSection {
    fn default() -> Self {
        Self {
            balance_tolerance: DEFAULT_BALANCE_TOLERANCE,
            ramp_limit_fraction: DEFAULT_RAMP_LIMIT_FRACTION,
            anti_simultaneity: AntiSimultaneityMode::LinearBudget,
            dwell_time: DwellTimeMode::Off,
            include_wear_in_objective: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub time_limit_seconds: f64,
    pub gap_tolerance: f64,
    pub feasibility_tolerance: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            time_limit_seconds: 300.0,
            gap_tolerance: 0.005,
            feasibility_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AllocationSection {
    pub standalone_policy: StandalonePolicy,
    /// Worker count for coalition evaluation; 0 lets the runtime choose.
    pub parallelism: usize,
}

impl Default for AllocationSection {
    fn default() -> Self {
        Self {
            standalone_policy: StandalonePolicy::GridOnly,
            parallelism: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
    /// Also write the assembled model in LP text format.
    pub dump_model: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            dump_model: false,
        }
    }
}

/// Rated-capacity override for a solar CSV column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolarUnitSpec {
    pub id: String,
    #[serde(default = "default_rated")]
    pub rated_capacity_mw: f64,
}

fn default_rated() -> f64 {
    DEFAULT_SOLAR_RATED_MW
}

/// Battery unit parameters; everything except the id has standard defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BessUnitSpec {
    pub id: String,
    #[serde(default = "d_capacity")]
    pub capacity_mwh: f64,
    #[serde(default = "d_power")]
    pub power_limit_mw: f64,
    #[serde(default = "d_eff")]
    pub charge_eff: f64,
    #[serde(default = "d_eff")]
    pub discharge_eff: f64,
    #[serde(default = "d_soc_min")]
    pub soc_min: f64,
    #[serde(default = "d_soc_max")]
    pub soc_max: f64,
    #[serde(default = "d_soc_terminal")]
    pub soc_terminal_min: f64,
    #[serde(default = "d_soc_initial")]
    pub soc_initial: f64,
    #[serde(default = "d_dwell")]
    pub min_dwell_periods: usize,
}

fn d_capacity() -> f64 {
    1.0
}
fn d_power() -> f64 {
    0.5
}
fn d_eff() -> f64 {
    0.96
}
fn d_soc_min() -> f64 {
    0.15
}
fn d_soc_max() -> f64 {
    0.95
}
fn d_soc_terminal() -> f64 {
    0.40
}
fn d_soc_initial() -> f64 {
    0.40
}
fn d_dwell() -> usize {
    2
}

impl BessUnitSpec {
    pub fn to_spec(&self) -> BessSpec {
        BessSpec {
            unit_id: self.id.clone(),
            capacity_mwh: self.capacity_mwh,
            power_limit_mw: self.power_limit_mw,
            charge_eff: self.charge_eff,
            discharge_eff: self.discharge_eff,
            soc_min: self.soc_min,
            soc_max: self.soc_max,
            soc_terminal_min: self.soc_terminal_min,
            soc_initial: self.soc_initial,
            min_dwell_periods: self.min_dwell_periods,
        }
    }

    pub fn from_spec(spec: &BessSpec) -> Self {
        Self {
            id: spec.unit_id.clone(),
            capacity_mwh: spec.capacity_mwh,
            power_limit_mw: spec.power_limit_mw,
            charge_eff: spec.charge_eff,
            discharge_eff: spec.discharge_eff,
            soc_min: spec.soc_min,
            soc_max: spec.soc_max,
            soc_terminal_min: spec.soc_terminal_min,
            soc_initial: spec.soc_initial,
            min_dwell_periods: spec.min_dwell_periods,
        }
    }
}

impl RunConfig {
    /// Solver options assembled from the `[solver]` section.
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            time_limit: std::time::Duration::from_secs_f64(self.solver.time_limit_seconds),
            gap_tolerance: self.solver.gap_tolerance,
            feasibility_tolerance: self.solver.feasibility_tolerance,
        }
    }

    /// Dispatch options assembled from the `[dispatch]` and `[solver]` sections.
    pub fn dispatch_options(&self) -> DispatchOptions {
        DispatchOptions {
            solve: self.solve_options(),
            anti_simultaneity: self.dispatch.anti_simultaneity,
            dwell_time: self.dispatch.dwell_time,
            include_wear_in_objective: self.dispatch.include_wear_in_objective,
        }
    }
}

/// Parses a config file. Numeric and path fields are merged over defaults;
/// scenario-level invariants are checked later by `load_scenario`.
pub fn load_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| IoError::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
