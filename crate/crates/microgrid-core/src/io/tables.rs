//! CSV table ingestion with per-cell error locations.

use std::path::Path;

use crate::model::{LoadProfile, Scenario, SolarUnit, TimeGrid, Tariff, DEFAULT_SOLAR_RATED_MW};

use super::{IoError, RunConfig};

/// Parsed wide table: column ids and one series per column.
struct WideTable {
    ids: Vec<String>,
    series: Vec<Vec<f64>>,
}

fn read_wide_table(path: &Path, label: &str, expected_rows: usize) -> Result<WideTable, IoError> {
    let file_name = label.to_string();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|source| IoError::Csv {
            file: file_name.clone(),
            source,
        })?
        .clone();
    let ids: Vec<String> = headers.iter().skip(1).map(|h| h.to_string()).collect();
    {
        let mut seen = std::collections::BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(IoError::DuplicateId {
                    file: file_name,
                    id: id.clone(),
                });
            }
        }
    }

    let mut series = vec![Vec::with_capacity(expected_rows); ids.len()];
    let mut rows = 0usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| IoError::Csv {
            file: file_name.clone(),
            source,
        })?;
        let period_cell = record.get(0).unwrap_or("");
        match period_cell.parse::<usize>() {
            Ok(p) if p == row_idx => {}
            _ => {
                return Err(IoError::PeriodIndex {
                    file: file_name,
                    row: row_idx,
                    expected: row_idx,
                    got: period_cell.to_string(),
                });
            }
        }
        for (col, id) in ids.iter().enumerate() {
            let cell = record.get(col + 1).unwrap_or("");
            let value = cell.parse::<f64>().map_err(|_| IoError::NonNumeric {
                file: file_name.clone(),
                row: row_idx,
                column: id.clone(),
                cell: cell.to_string(),
            })?;
            series[col].push(value);
        }
        rows += 1;
    }
    if rows != expected_rows {
        return Err(IoError::LengthMismatch {
            file: file_name,
            expected: expected_rows,
            got: rows,
        });
    }
    Ok(WideTable { ids, series })
}

/// Loads and validates a scenario from the tables referenced by the config.
/// Paths are resolved relative to `base_dir`.
pub fn load_scenario(config: &RunConfig, base_dir: &Path) -> Result<Scenario, IoError> {
    let t = config.time.periods;

    let loads_path = base_dir.join(&config.files.loads);
    let loads_table = read_wide_table(&loads_path, "loads", t)?;
    if loads_table.ids.is_empty() {
        return Err(IoError::NoParticipants {
            file: "loads".to_string(),
        });
    }
    let loads: Vec<LoadProfile> = loads_table
        .ids
        .into_iter()
        .zip(loads_table.series)
        .map(|(participant_id, demand)| LoadProfile {
            participant_id,
            demand,
        })
        .collect();

    let solar_units: Vec<SolarUnit> = match &config.files.solar {
        Some(rel) => {
            let path = base_dir.join(rel);
            let table = read_wide_table(&path, "solar", t)?;
            table
                .ids
                .into_iter()
                .zip(table.series)
                .map(|(unit_id, generation)| {
                    let rated = config
                        .solar_units
                        .iter()
                        .find(|s| s.id == unit_id)
                        .map(|s| s.rated_capacity_mw)
                        .unwrap_or(DEFAULT_SOLAR_RATED_MW);
                    SolarUnit {
                        unit_id,
                        generation,
                        rated_capacity: rated,
                    }
                })
                .collect()
        }
        None => Vec::new(),
    };

    let prices_path = base_dir.join(&config.files.prices);
    let price_table = read_wide_table(&prices_path, "prices", t)?;
    if price_table.ids.len() != 1 {
        return Err(IoError::ColumnCount {
            file: "prices".to_string(),
            found: price_table.ids.len(),
        });
    }
    let energy_price = price_table.series.into_iter().next().expect("one column");

    let scenario = Scenario {
        time_grid: TimeGrid {
            period_count: t,
            period_hours: config.time.period_hours,
        },
        loads,
        solar_units,
        bess_units: config.bess_units.iter().map(|b| b.to_spec()).collect(),
        tariff: Tariff {
            energy_price,
            peak_charge_rate: config.tariff.peak_charge_rate,
            battery_wear_cost: config.tariff.battery_wear_cost,
            grid_fixed_cost: config.tariff.grid_fixed_cost,
        },
        balance_tolerance: config.dispatch.balance_tolerance,
        ramp_limit_fraction: config.dispatch.ramp_limit_fraction,
    };

    let findings = crate::model::validate_scenario(&scenario);
    if !findings.is_empty() {
        return Err(IoError::Validation { findings });
    }
    Ok(scenario)
}
