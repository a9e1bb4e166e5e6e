//! Independent physical validation of a dispatch schedule.
//!
//! Re-derives every model constraint by direct arithmetic on the schedule
//! arrays, deliberately sharing nothing with the solver or the model builder.

use crate::model::Scenario;

use super::DispatchSchedule;

/// Checks the schedule against the scenario's physics. Returns one message
/// per violated relation; an empty result certifies the schedule.
pub fn check_schedule(schedule: &DispatchSchedule, scenario: &Scenario, tol: f64) -> Vec<String> {
    let mut violations = Vec::new();
    let n = scenario.participant_count();
    let s = scenario.solar_count();
    let b = scenario.bess_count();
    let t = scenario.periods();
    let dt = scenario.period_hours();
    let eps = scenario.balance_tolerance;

    let shape_ok = schedule.grid_import.len() == n
        && schedule.grid_import.iter().all(|row| row.len() == t)
        && schedule.solar_alloc.len() == n
        && schedule
            .solar_alloc
            .iter()
            .all(|per_unit| per_unit.len() == s && per_unit.iter().all(|row| row.len() == t))
        && schedule.charge.len() == n
        && schedule
            .charge
            .iter()
            .all(|per_unit| per_unit.len() == b && per_unit.iter().all(|row| row.len() == t))
        && schedule.discharge.len() == n
        && schedule
            .discharge
            .iter()
            .all(|per_unit| per_unit.len() == b && per_unit.iter().all(|row| row.len() == t))
        && schedule.soc.len() == b
        && schedule.soc.iter().all(|row| row.len() == t);
    if !shape_ok {
        violations.push("schedule arrays do not match scenario dimensions".to_string());
        return violations;
    }

    // Non-negativity of every decision quantity.
    for i in 0..n {
        for period in 0..t {
            if schedule.grid_import[i][period] < -tol {
                violations.push(format!(
                    "grid import negative: participant {i}, period {period}: {}",
                    schedule.grid_import[i][period]
                ));
            }
        }
        for j in 0..s {
            for period in 0..t {
                if schedule.solar_alloc[i][j][period] < -tol {
                    violations.push(format!(
                        "solar allocation negative: participant {i}, unit {j}, period {period}"
                    ));
                }
            }
        }
        for k in 0..b {
            for period in 0..t {
                if schedule.charge[i][k][period] < -tol {
                    violations.push(format!(
                        "charge negative: participant {i}, battery {k}, period {period}"
                    ));
                }
                if schedule.discharge[i][k][period] < -tol {
                    violations.push(format!(
                        "discharge negative: participant {i}, battery {k}, period {period}"
                    ));
                }
            }
        }
    }

    // Per-participant power balance within the tolerance band.
    for i in 0..n {
        for period in 0..t {
            let load = scenario.loads[i].demand[period];
            let solar: f64 = (0..s)
                .map(|j| schedule.solar_alloc[i][j][period] * scenario.solar_units[j].generation[period])
                .sum();
            let battery: f64 = (0..b)
                .map(|k| schedule.discharge[i][k][period] - schedule.charge[i][k][period])
                .sum();
            let supply = schedule.grid_import[i][period] + solar + battery;
            let lo = load * (1.0 - eps);
            let hi = load * (1.0 + eps);
            if supply < lo - tol || supply > hi + tol {
                violations.push(format!(
                    "balance violated: participant {i}, period {period}: supply {supply}, band [{lo}, {hi}]"
                ));
            }
        }
    }

    // Solar allocation budget per unit and period.
    for j in 0..s {
        for period in 0..t {
            let total: f64 = (0..n).map(|i| schedule.solar_alloc[i][j][period]).sum();
            if total > 1.0 + tol {
                violations.push(format!(
                    "solar over-allocated: unit {j}, period {period}: {total}"
                ));
            }
        }
    }

    // Battery state evolution, box limits, power caps, terminal reserve.
    for (k, bess) in scenario.bess_units.iter().enumerate() {
        let cap = bess.capacity_mwh;
        let mut prev = bess.soc_initial * cap;
        for period in 0..t {
            let charge: f64 = (0..n).map(|i| schedule.charge[i][k][period]).sum();
            let discharge: f64 = (0..n).map(|i| schedule.discharge[i][k][period]).sum();
            let expected = prev + dt * (bess.charge_eff * charge - discharge / bess.discharge_eff);
            let soc = schedule.soc[k][period];
            if (soc - expected).abs() > tol {
                violations.push(format!(
                    "state-of-charge recursion violated: battery {k}, period {period}: {soc} vs {expected}"
                ));
            }
            if soc < bess.soc_min * cap - tol || soc > bess.soc_max * cap + tol {
                violations.push(format!(
                    "state of charge out of bounds: battery {k}, period {period}: {soc}"
                ));
            }
            if charge > bess.power_limit_mw + tol {
                violations.push(format!(
                    "charge cap exceeded: battery {k}, period {period}: {charge}"
                ));
            }
            if discharge > bess.power_limit_mw + tol {
                violations.push(format!(
                    "discharge cap exceeded: battery {k}, period {period}: {discharge}"
                ));
            }
            if charge + discharge > bess.power_limit_mw + tol {
                violations.push(format!(
                    "combined charge+discharge budget exceeded: battery {k}, period {period}"
                ));
            }
            prev = soc;
        }
        let terminal = schedule.soc[k][t - 1];
        if terminal < bess.soc_terminal_min * cap - tol {
            violations.push(format!(
                "terminal state of charge below reserve: battery {k}: {terminal}"
            ));
        }
    }

    // Peak covers the total import in every period.
    for period in 0..t {
        let total: f64 = (0..n).map(|i| schedule.grid_import[i][period]).sum();
        if total > schedule.system_peak_mw + tol {
            violations.push(format!(
                "total import {total} exceeds declared peak {} in period {period}",
                schedule.system_peak_mw
            ));
        }
    }

    // Ramp limits on each participant's import, relative to current load.
    for i in 0..n {
        for period in 1..t {
            let step =
                (schedule.grid_import[i][period] - schedule.grid_import[i][period - 1]).abs();
            let bound = scenario.ramp_limit_fraction * scenario.loads[i].demand[period];
            if step > bound + tol {
                violations.push(format!(
                    "ramp limit exceeded: participant {i}, period {period}: step {step}, bound {bound}"
                ));
            }
        }
    }

    violations
}
