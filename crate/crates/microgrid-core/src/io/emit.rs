//! Report and plot-data emission, plus scenario file writing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::dispatch::DispatchSchedule;
use crate::model::Scenario;
use crate::report::RunReport;

use super::{IoError, RunConfig};

pub const REPORT_FILE: &str = "report.json";
pub const SYSTEM_POWER_FILE: &str = "system_power.csv";
pub const BATTERY_SOC_FILE: &str = "battery_soc.csv";
pub const ALLOCATION_BY_LOAD_FILE: &str = "allocation_by_load.csv";

fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Shortest round-trip decimal form of an f64 cell.
fn cell(v: f64) -> String {
    format!("{}", v)
}

/// Writes the structured report plus the three plot-data tables. Returns the
/// paths written, in a fixed order.
pub fn emit_report(
    report: &RunReport,
    scenario: &Scenario,
    schedule: &DispatchSchedule,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, IoError> {
    std::fs::create_dir_all(out_dir).map_err(|source| IoError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();

    let report_path = out_dir.join(REPORT_FILE);
    let json =
        serde_json::to_string_pretty(report).map_err(|e| IoError::Serialize(e.to_string()))?;
    write_file(&report_path, &format!("{json}\n"))?;
    written.push(report_path);

    let system_path = out_dir.join(SYSTEM_POWER_FILE);
    write_file(&system_path, &system_power_table(scenario, schedule))?;
    written.push(system_path);

    let battery_path = out_dir.join(BATTERY_SOC_FILE);
    write_file(&battery_path, &battery_table(scenario, schedule))?;
    written.push(battery_path);

    let allocation_path = out_dir.join(ALLOCATION_BY_LOAD_FILE);
    write_file(&allocation_path, &allocation_table(report, scenario))?;
    written.push(allocation_path);

    Ok(written)
}

/// System power and price per period, mirroring the per-scenario power plots.
fn system_power_table(scenario: &Scenario, schedule: &DispatchSchedule) -> String {
    let mut out = String::from("period,total_load_mw,grid_import_mw,solar_used_mw,price_usd_per_mwh\n");
    for t in 0..scenario.periods() {
        let load = scenario.total_load_at(t);
        let import = schedule.total_import_at(t);
        let solar_used: f64 = (0..scenario.participant_count())
            .map(|i| {
                scenario
                    .solar_units
                    .iter()
                    .enumerate()
                    .map(|(j, unit)| schedule.solar_alloc[i][j][t] * unit.generation[t])
                    .sum::<f64>()
            })
            .sum();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            t,
            cell(load),
            cell(import),
            cell(solar_used),
            cell(scenario.tariff.energy_price[t])
        );
    }
    out
}

/// Battery operation and state of charge per period, with the SOC bound
/// columns for plotting the operating window.
fn battery_table(scenario: &Scenario, schedule: &DispatchSchedule) -> String {
    let mut header = String::from("period");
    for k in 1..=scenario.bess_count() {
        let _ = write!(
            header,
            ",soc_{k}_mwh,charge_{k}_mw,discharge_{k}_mw,soc_min_{k}_mwh,soc_max_{k}_mwh"
        );
    }
    let mut out = header;
    out.push('\n');
    for t in 0..scenario.periods() {
        let _ = write!(out, "{t}");
        for (k, bess) in scenario.bess_units.iter().enumerate() {
            let charge: f64 = (0..scenario.participant_count())
                .map(|i| schedule.charge[i][k][t])
                .sum();
            let discharge: f64 = (0..scenario.participant_count())
                .map(|i| schedule.discharge[i][k][t])
                .sum();
            let _ = write!(
                out,
                ",{},{},{},{},{}",
                cell(schedule.soc[k][t]),
                cell(charge),
                cell(discharge),
                cell(bess.soc_min * bess.capacity_mwh),
                cell(bess.soc_max * bess.capacity_mwh)
            );
        }
        out.push('\n');
    }
    out
}

/// Per-load distribution of the four allocation components.
fn allocation_table(report: &RunReport, scenario: &Scenario) -> String {
    let mut out =
        String::from("participant,solar_benefit_usd,bess_cost_usd,peak_savings_usd,grid_cost_usd\n");
    for (i, load) in scenario.loads.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            load.participant_id,
            cell(report.allocation.solar_benefit[i]),
            cell(report.allocation.bess_cost[i]),
            cell(report.allocation.peak_savings[i]),
            cell(report.allocation.grid_cost[i])
        );
    }
    out
}

/// Writes a scenario as the CSV tables plus a config file, so that loading
/// the config reproduces the scenario exactly.
pub fn write_scenario(
    scenario: &Scenario,
    config: &RunConfig,
    dir: &Path,
    config_name: &str,
) -> Result<Vec<PathBuf>, IoError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();

    let loads_path = dir.join(&config.files.loads);
    let mut out = String::from("period");
    for load in &scenario.loads {
        let _ = write!(out, ",{}", load.participant_id);
    }
    out.push('\n');
    for t in 0..scenario.periods() {
        let _ = write!(out, "{t}");
        for load in &scenario.loads {
            let _ = write!(out, ",{}", cell(load.demand[t]));
        }
        out.push('\n');
    }
    write_file(&loads_path, &out)?;
    written.push(loads_path);

    if let Some(solar_rel) = &config.files.solar {
        let solar_path = dir.join(solar_rel);
        let mut out = String::from("period");
        for unit in &scenario.solar_units {
            let _ = write!(out, ",{}", unit.unit_id);
        }
        out.push('\n');
        for t in 0..scenario.periods() {
            let _ = write!(out, "{t}");
            for unit in &scenario.solar_units {
                let _ = write!(out, ",{}", cell(unit.generation[t]));
            }
            out.push('\n');
        }
        write_file(&solar_path, &out)?;
        written.push(solar_path);
    }

    let prices_path = dir.join(&config.files.prices);
    let mut out = String::from("period,price_usd_per_mwh\n");
    for t in 0..scenario.periods() {
        let _ = writeln!(out, "{t},{}", cell(scenario.tariff.energy_price[t]));
    }
    write_file(&prices_path, &out)?;
    written.push(prices_path);

    let config_path = dir.join(config_name);
    let toml_text =
        toml::to_string_pretty(config).map_err(|e| IoError::Serialize(e.to_string()))?;
    write_file(&config_path, &toml_text)?;
    written.push(config_path);

    Ok(written)
}

/// Builds the config that `write_scenario` pairs with a scenario so the
/// round trip reproduces it exactly.
pub fn config_for_scenario(scenario: &Scenario, base: &RunConfig) -> RunConfig {
    let mut config = base.clone();
    config.time.periods = scenario.periods();
    config.time.period_hours = scenario.period_hours();
    config.tariff.peak_charge_rate = scenario.tariff.peak_charge_rate;
    config.tariff.battery_wear_cost = scenario.tariff.battery_wear_cost;
    config.tariff.grid_fixed_cost = scenario.tariff.grid_fixed_cost;
    config.dispatch.balance_tolerance = scenario.balance_tolerance;
    config.dispatch.ramp_limit_fraction = scenario.ramp_limit_fraction;
    config.files.solar = if scenario.solar_units.is_empty() {
        None
    } else {
        base.files.solar.clone().or(Some("solar.csv".into()))
    };
    config.solar_units = scenario
        .solar_units
        .iter()
        .map(|u| super::SolarUnitSpec {
            id: u.unit_id.clone(),
            rated_capacity_mw: u.rated_capacity,
        })
        .collect();
    config.bess_units = scenario
        .bess_units
        .iter()
        .map(super::BessUnitSpec::from_spec)
        .collect();
    config
}
