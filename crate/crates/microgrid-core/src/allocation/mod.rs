//! Exact Shapley-value allocation over the four cost/benefit components,
//! evaluated on the fixed grand-coalition schedule.
//!
//! Coalitions are bitmasks over participants. Coalition values are filled in
//! parallel into a dense table indexed by mask; the value of each slot does
//! not depend on scheduling, and the marginal-contribution sums run in fixed
//! mask order, so results are bit-identical at any worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispatch::{optimize_dispatch, DispatchError, DispatchOptions, DispatchSchedule};
use crate::model::Scenario;

/// Participants beyond this cap would need sampling, which is out of scope;
/// the tool refuses instead.
pub const EXACT_ENUMERATION_CAP: usize = 20;

/// A subset of participants, encoded as a bitmask over `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition(pub u32);

impl Coalition {
    pub fn empty() -> Self {
        Coalition(0)
    }

    pub fn grand(n: usize) -> Self {
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn contains(self, participant: usize) -> bool {
        self.0 & (1 << participant) != 0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn members(self, n: usize) -> impl Iterator<Item = usize> {
        (0..n).filter(move |&i| self.contains(i))
    }
}

/// The four allocation components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    SolarBenefit,
    BessCost,
    PeakSavings,
    GridCost,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::SolarBenefit,
        Component::BessCost,
        Component::PeakSavings,
        Component::GridCost,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Component::SolarBenefit => "solar_benefit",
            Component::BessCost => "bess_cost",
            Component::PeakSavings => "peak_savings",
            Component::GridCost => "grid_cost",
        }
    }
}

/// Coalition value of allocated solar, priced at the grid tariff.
pub fn eval_solar_benefit(
    coalition: Coalition,
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> f64 {
    let dt = scenario.period_hours();
    let mut total = 0.0;
    for i in coalition.members(scenario.participant_count()) {
        for (j, unit) in scenario.solar_units.iter().enumerate() {
            for t in 0..scenario.periods() {
                total += scenario.tariff.energy_price[t]
                    * schedule.solar_alloc[i][j][t]
                    * unit.generation[t]
                    * dt;
            }
        }
    }
    total
}

/// Coalition share of battery wear, charged on throughput.
pub fn eval_bess_cost(
    coalition: Coalition,
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> f64 {
    let dt = scenario.period_hours();
    let mut throughput = 0.0;
    for i in coalition.members(scenario.participant_count()) {
        for k in 0..scenario.bess_count() {
            for t in 0..scenario.periods() {
                throughput += (schedule.charge[i][k][t] + schedule.discharge[i][k][t]) * dt;
            }
        }
    }
    scenario.tariff.battery_wear_cost * throughput
}

/// Coalition peak savings: original load peak minus optimized import peak,
/// both restricted to coalition members, valued at the demand charge rate.
pub fn eval_peak_savings(
    coalition: Coalition,
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> f64 {
    let n = scenario.participant_count();
    let mut load_peak: f64 = 0.0;
    let mut import_peak: f64 = 0.0;
    for t in 0..scenario.periods() {
        let load: f64 = coalition.members(n).map(|i| scenario.loads[i].demand[t]).sum();
        let import: f64 = coalition.members(n).map(|i| schedule.grid_import[i][t]).sum();
        load_peak = load_peak.max(load);
        import_peak = import_peak.max(import);
    }
    scenario.tariff.peak_charge_rate * (load_peak - import_peak)
}

/// Coalition share of the fixed daily grid cost, proportional to grid energy.
/// With zero total import the cost is split equally (`C_f * |S| / N`).
pub fn eval_grid_cost(
    coalition: Coalition,
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> f64 {
    let n = scenario.participant_count();
    let total: f64 = (0..n)
        .map(|i| schedule.grid_import[i].iter().sum::<f64>())
        .sum();
    if total <= 1e-12 {
        return scenario.tariff.grid_fixed_cost * coalition.size() as f64 / n as f64;
    }
    let coalition_energy: f64 = coalition
        .members(n)
        .map(|i| schedule.grid_import[i].iter().sum::<f64>())
        .sum();
    scenario.tariff.grid_fixed_cost * coalition_energy / total
}

pub fn evaluate_component(
    component: Component,
    coalition: Coalition,
    schedule: &DispatchSchedule,
    scenario: &Scenario,
) -> f64 {
    match component {
        Component::SolarBenefit => eval_solar_benefit(coalition, schedule, scenario),
        Component::BessCost => eval_bess_cost(coalition, schedule, scenario),
        Component::PeakSavings => eval_peak_savings(coalition, schedule, scenario),
        Component::GridCost => eval_grid_cost(coalition, schedule, scenario),
    }
}

#[derive(Debug, Error)]
pub enum AllocationError {
    #[error("participant count {n} exceeds the exact-enumeration cap {cap}; reduce the participant set")]
    TooManyParticipants { n: usize, cap: usize },
    #[error("coalition table has {got} entries, expected {expected}")]
    WrongTableSize { expected: usize, got: usize },
    #[error("missing value for coalition bitmask {mask:#b}")]
    MissingValue { mask: u32 },
    #[error("empty coalition must have zero value for {component}, got {value}")]
    NonzeroEmptyCoalition { component: &'static str, value: f64 },
    #[error("efficiency violated for {component}: allocations sum to {sum}, grand value {grand}")]
    Efficiency {
        component: &'static str,
        sum: f64,
        grand: f64,
    },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Exact Shapley values from a dense coalition-value table (`values[mask]`).
///
/// Weights `|S|! (n-1-|S|)! / n!` are precomputed from exact integer
/// factorials; marginal contributions are summed in ascending mask order.
pub fn shapley(values: &[f64], n: usize) -> Result<Vec<f64>, AllocationError> {
    if n > EXACT_ENUMERATION_CAP {
        return Err(AllocationError::TooManyParticipants {
            n,
            cap: EXACT_ENUMERATION_CAP,
        });
    }
    let expected = 1usize << n;
    if values.len() != expected {
        return Err(AllocationError::WrongTableSize {
            expected,
            got: values.len(),
        });
    }
    if let Some(mask) = values.iter().position(|v| v.is_nan()) {
        return Err(AllocationError::MissingValue { mask: mask as u32 });
    }

    let weights = shapley_weights(n);
    let mut phi = vec![0.0; n];
    for (i, phi_i) in phi.iter_mut().enumerate() {
        let bit = 1u32 << i;
        let mut acc = 0.0;
        for mask in 0..expected as u32 {
            if mask & bit != 0 {
                continue;
            }
            let size = mask.count_ones() as usize;
            acc += weights[size] * (values[(mask | bit) as usize] - values[mask as usize]);
        }
        *phi_i = acc;
    }
    Ok(phi)
}

/// `w[s] = s! (n-1-s)! / n!` for coalition sizes `0..n`.
fn shapley_weights(n: usize) -> Vec<f64> {
    let factorial = |k: usize| -> u64 { (1..=k as u64).product::<u64>().max(1) };
    let n_fact = factorial(n) as f64;
    (0..n)
        .map(|s| (factorial(s) as f64) * (factorial(n - 1 - s) as f64) / n_fact)
        .collect()
}

/// Reference implementation: averages marginal contributions over all `n!`
/// join orders. Exponentially slower than `shapley`; used for cross-checks.
pub fn shapley_by_permutations(values: &[f64], n: usize) -> Vec<f64> {
    use itertools::Itertools;
    let mut phi = vec![0.0; n];
    let mut permutations = 0u64;
    for order in (0..n).permutations(n) {
        permutations += 1;
        let mut mask = 0u32;
        for &player in &order {
            let before = values[mask as usize];
            mask |= 1 << player;
            let after = values[mask as usize];
            phi[player] += after - before;
        }
    }
    for v in &mut phi {
        *v /= permutations as f64;
    }
    phi
}

/// Per-participant Shapley values for the four components, plus the
/// grand-coalition totals they must add up to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationReport {
    pub solar_benefit: Vec<f64>,
    pub bess_cost: Vec<f64>,
    pub peak_savings: Vec<f64>,
    pub grid_cost: Vec<f64>,
    pub component_totals: ComponentTotals,
    /// Coalition evaluations performed per component (2^N).
    pub coalitions_evaluated: usize,
    /// Set when the grid-cost component fell back to an equal split because
    /// total grid import was zero.
    pub grid_cost_equal_split: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentTotals {
    pub solar_benefit: f64,
    pub bess_cost: f64,
    pub peak_savings: f64,
    pub grid_cost: f64,
}

impl AllocationReport {
    pub fn participants(&self) -> usize {
        self.solar_benefit.len()
    }

    pub fn component(&self, component: Component) -> &[f64] {
        match component {
            Component::SolarBenefit => &self.solar_benefit,
            Component::BessCost => &self.bess_cost,
            Component::PeakSavings => &self.peak_savings,
            Component::GridCost => &self.grid_cost,
        }
    }

    pub fn component_total(&self, component: Component) -> f64 {
        match component {
            Component::SolarBenefit => self.component_totals.solar_benefit,
            Component::BessCost => self.component_totals.bess_cost,
            Component::PeakSavings => self.component_totals.peak_savings,
            Component::GridCost => self.component_totals.grid_cost,
        }
    }
}

/// Evaluates all four characteristic functions on every coalition and runs
/// the exact Shapley computation per component.
///
/// `parallelism` is the worker count for coalition evaluation; 0 lets the
/// runtime choose. Results are identical for any value.
pub fn allocate(
    schedule: &DispatchSchedule,
    scenario: &Scenario,
    parallelism: usize,
) -> Result<AllocationReport, AllocationError> {
    let n = scenario.participant_count();
    if n > EXACT_ENUMERATION_CAP {
        return Err(AllocationError::TooManyParticipants {
            n,
            cap: EXACT_ENUMERATION_CAP,
        });
    }
    let size = 1usize << n;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| AllocationError::ThreadPool(e.to_string()))?;

    let mut per_component: Vec<Vec<f64>> = Vec::with_capacity(4);
    for component in Component::ALL {
        let values: Vec<f64> = pool.install(|| {
            (0..size as u32)
                .into_par_iter()
                .map(|mask| evaluate_component(component, Coalition(mask), schedule, scenario))
                .collect()
        });
        if values[0].abs() > 1e-9 {
            return Err(AllocationError::NonzeroEmptyCoalition {
                component: component.label(),
                value: values[0],
            });
        }
        per_component.push(values);
    }

    let mut phis: Vec<Vec<f64>> = Vec::with_capacity(4);
    for (component, values) in Component::ALL.iter().zip(&per_component) {
        let phi = shapley(values, n)?;
        let grand = values[size - 1];
        let sum: f64 = phi.iter().sum();
        if (sum - grand).abs() > 1e-6 * grand.abs().max(1.0) {
            return Err(AllocationError::Efficiency {
                component: component.label(),
                sum,
                grand,
            });
        }
        phis.push(phi);
    }

    let grand = |idx: usize| per_component[idx][size - 1];
    let total_import: f64 = (0..n)
        .map(|i| schedule.grid_import[i].iter().sum::<f64>())
        .sum();

    let mut it = phis.into_iter();
    Ok(AllocationReport {
        solar_benefit: it.next().expect("four components"),
        bess_cost: it.next().expect("four components"),
        peak_savings: it.next().expect("four components"),
        grid_cost: it.next().expect("four components"),
        component_totals: ComponentTotals {
            solar_benefit: grand(0),
            bess_cost: grand(1),
            peak_savings: grand(2),
            grid_cost: grand(3),
        },
        coalitions_evaluated: size,
        grid_cost_equal_split: total_import <= 1e-12,
    })
}

/// How standalone (no-cooperation) costs are computed per participant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandalonePolicy {
    /// Serve the load straight from the grid: energy cost plus an individual
    /// peak charge. The conservative reading of independent operation.
    GridOnly,
    /// Re-optimize each participant alone with load-proportional slices of
    /// every solar and battery unit.
    ProportionalAssets,
}

/// Cost each participant would incur operating independently.
pub fn standalone_costs(
    scenario: &Scenario,
    policy: StandalonePolicy,
    options: &DispatchOptions,
) -> Result<Vec<f64>, DispatchError> {
    let dt = scenario.period_hours();
    match policy {
        StandalonePolicy::GridOnly => Ok(scenario
            .loads
            .iter()
            .map(|load| {
                let energy: f64 = load
                    .demand
                    .iter()
                    .zip(&scenario.tariff.energy_price)
                    .map(|(l, p)| l * p * dt)
                    .sum();
                let peak = load.demand.iter().copied().fold(0.0, f64::max);
                energy + scenario.tariff.peak_charge_rate * peak
            })
            .collect()),
        StandalonePolicy::ProportionalAssets => {
            let total_energy: f64 = scenario
                .loads
                .iter()
                .map(|l| l.demand.iter().sum::<f64>())
                .sum();
            let mut costs = Vec::with_capacity(scenario.participant_count());
            for load in &scenario.loads {
                let own: f64 = load.demand.iter().sum();
                if own <= 0.0 {
                    costs.push(0.0);
                    continue;
                }
                let share = if total_energy > 0.0 { own / total_energy } else { 0.0 };
                let sub = slice_scenario(scenario, load, share);
                let outcome = optimize_dispatch(&sub, options)?;
                costs.push(outcome.costs.total_cost);
            }
            Ok(costs)
        }
    }
}

/// Single-participant scenario holding a proportional slice of each asset.
fn slice_scenario(scenario: &Scenario, load: &crate::model::LoadProfile, share: f64) -> Scenario {
    let solar_units = scenario
        .solar_units
        .iter()
        .filter(|_| share > 0.0)
        .map(|u| crate::model::SolarUnit {
            unit_id: u.unit_id.clone(),
            generation: u.generation.iter().map(|g| g * share).collect(),
            rated_capacity: u.rated_capacity * share,
        })
        .collect();
    let bess_units = scenario
        .bess_units
        .iter()
        .filter(|_| share > 0.0)
        .map(|b| crate::model::BessSpec {
            unit_id: b.unit_id.clone(),
            capacity_mwh: b.capacity_mwh * share,
            power_limit_mw: b.power_limit_mw * share,
            ..b.clone()
        })
        .collect();
    Scenario {
        time_grid: scenario.time_grid.clone(),
        loads: vec![load.clone()],
        solar_units,
        bess_units,
        tariff: scenario.tariff.clone(),
        balance_tolerance: scenario.balance_tolerance,
        ramp_limit_fraction: scenario.ramp_limit_fraction,
    }
}
