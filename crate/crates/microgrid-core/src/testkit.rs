//! Scenario builders shared by unit tests.

use crate::model::*;

/// Ten loads, two 1.5 MW solar units, two standard 1.0 MWh batteries,
/// flat prices; passes validation.
pub(crate) fn table_shaped_scenario() -> Scenario {
    let t = 24;
    let loads = (0..10)
        .map(|i| LoadProfile {
            participant_id: format!("load_{}", i + 1),
            demand: vec![0.1 + 0.01 * i as f64; t],
        })
        .collect();
    let solar_units = (0..2)
        .map(|j| SolarUnit {
            unit_id: format!("solar_{}", j + 1),
            generation: (0..t)
                .map(|h| {
                    if (6..18).contains(&h) {
                        1.2 * ((h as f64 - 6.0) / 12.0 * std::f64::consts::PI).sin()
                    } else {
                        0.0
                    }
                })
                .collect(),
            rated_capacity: DEFAULT_SOLAR_RATED_MW,
        })
        .collect();
    Scenario {
        time_grid: TimeGrid::default(),
        loads,
        solar_units,
        bess_units: vec![BessSpec::standard("bess_1"), BessSpec::standard("bess_2")],
        tariff: Tariff {
            energy_price: vec![100.0; t],
            peak_charge_rate: DEFAULT_PEAK_CHARGE_RATE,
            battery_wear_cost: DEFAULT_BATTERY_WEAR_COST,
            grid_fixed_cost: DEFAULT_GRID_FIXED_COST,
        },
        balance_tolerance: DEFAULT_BALANCE_TOLERANCE,
        ramp_limit_fraction: DEFAULT_RAMP_LIMIT_FRACTION,
    }
}

/// Minimal scenario: bare loads and prices, no solar, no batteries.
pub(crate) fn bare_scenario(demands: Vec<Vec<f64>>, prices: Vec<f64>) -> Scenario {
    let t = prices.len();
    Scenario {
        time_grid: TimeGrid {
            period_count: t,
            period_hours: 1.0,
        },
        loads: demands
            .into_iter()
            .enumerate()
            .map(|(i, demand)| LoadProfile {
                participant_id: format!("load_{}", i + 1),
                demand,
            })
            .collect(),
        solar_units: Vec::new(),
        bess_units: Vec::new(),
        tariff: Tariff {
            energy_price: prices,
            peak_charge_rate: DEFAULT_PEAK_CHARGE_RATE,
            battery_wear_cost: DEFAULT_BATTERY_WEAR_COST,
            grid_fixed_cost: DEFAULT_GRID_FIXED_COST,
        },
        balance_tolerance: DEFAULT_BALANCE_TOLERANCE,
        ramp_limit_fraction: DEFAULT_RAMP_LIMIT_FRACTION,
    }
}
