//! Deterministic synthetic scenario generation for tests and demos.
//!
//! Profiles shape the diurnal load, price, and solar curves; the same seed
//! always produces the same scenario. Generated loads keep period-to-period
//! steps inside the ramp envelope so the dispatch model stays feasible even
//! with a tight balance band.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{
    BessSpec, LoadProfile, Scenario, SolarUnit, Tariff, TimeGrid, DEFAULT_BALANCE_TOLERANCE,
    DEFAULT_BATTERY_WEAR_COST, DEFAULT_GRID_FIXED_COST, DEFAULT_PEAK_CHARGE_RATE,
    DEFAULT_RAMP_LIMIT_FRACTION, DEFAULT_SOLAR_RATED_MW,
};

/// Counts of each element in a generated scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioShape {
    pub participants: usize,
    pub solar_units: usize,
    pub bess_units: usize,
    pub periods: usize,
}

impl Default for ScenarioShape {
    fn default() -> Self {
        Self {
            participants: 10,
            solar_units: 2,
            bess_units: 2,
            periods: 24,
        }
    }
}

/// Qualitative operating-day profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioProfile {
    PeakDay,
    LowDay,
    HighPrice,
    HighSolar,
    Weekday,
    Weekend,
}

impl ScenarioProfile {
    pub const ALL: [ScenarioProfile; 6] = [
        ScenarioProfile::PeakDay,
        ScenarioProfile::LowDay,
        ScenarioProfile::HighPrice,
        ScenarioProfile::HighSolar,
        ScenarioProfile::Weekday,
        ScenarioProfile::Weekend,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ScenarioProfile::PeakDay => "peak-day",
            ScenarioProfile::LowDay => "low-day",
            ScenarioProfile::HighPrice => "high-price",
            ScenarioProfile::HighSolar => "high-solar",
            ScenarioProfile::Weekday => "weekday",
            ScenarioProfile::Weekend => "weekend",
        }
    }

    /// Price band ($/MWh) the generated series spans, inside the global
    /// tariff range [68.90, 339.91].
    fn price_band(self) -> (f64, f64) {
        match self {
            ScenarioProfile::PeakDay => (90.0, 320.0),
            ScenarioProfile::LowDay => (68.90, 180.0),
            ScenarioProfile::HighPrice => (109.06, 339.91),
            ScenarioProfile::HighSolar => (75.0, 250.0),
            ScenarioProfile::Weekday => (80.0, 280.0),
            ScenarioProfile::Weekend => (70.0, 230.0),
        }
    }

    /// Mean solar capacity factor at noon.
    fn solar_strength(self) -> f64 {
        match self {
            ScenarioProfile::PeakDay => 0.50,
            ScenarioProfile::LowDay => 0.52,
            ScenarioProfile::HighPrice => 0.55,
            ScenarioProfile::HighSolar => 0.88,
            ScenarioProfile::Weekday => 0.75,
            ScenarioProfile::Weekend => 0.70,
        }
    }

    /// Load curve as (center hour, width, weight) bumps over a flat base.
    fn load_bumps(self) -> &'static [(f64, f64, f64)] {
        match self {
            ScenarioProfile::PeakDay => &[(18.5, 3.5, 0.85), (8.0, 3.0, 0.30)],
            ScenarioProfile::LowDay => &[(17.0, 6.0, 0.25)],
            ScenarioProfile::HighPrice => &[(17.5, 4.0, 0.55), (9.0, 3.0, 0.25)],
            ScenarioProfile::HighSolar => &[(16.0, 5.0, 0.45)],
            ScenarioProfile::Weekday => &[(8.5, 2.5, 0.50), (19.0, 3.5, 0.65)],
            ScenarioProfile::Weekend => &[(13.0, 6.0, 0.45)],
        }
    }
}

impl std::str::FromStr for ScenarioProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.label() == s)
            .ok_or_else(|| {
                format!(
                    "unknown profile '{s}'; expected one of: {}",
                    Self::ALL.map(|p| p.label()).join(", ")
                )
            })
    }
}

/// Smooth bump with wrap-around distance on the 24-hour circle.
fn bump(hour: f64, center: f64, width: f64) -> f64 {
    let d = (hour - center).rem_euclid(24.0);
    let d = d.min(24.0 - d);
    (-(d / width) * (d / width)).exp()
}

/// Generates a deterministic pseudo-random scenario. Identical `(seed,
/// shape, profile)` triples produce identical scenarios.
pub fn generate_synthetic(seed: u64, shape: &ScenarioShape, profile: ScenarioProfile) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = shape.periods;
    let hour = |idx: usize| (idx as f64 + 0.5) * 24.0 / t as f64;

    // Loads: shaped diurnal curve, per-load phase and noise, scaled so the
    // peak lands in [0.15, 0.25] MW. Step ratios are clamped to stay within
    // the 20 % ramp envelope around any import tracking the load.
    let mut loads = Vec::with_capacity(shape.participants);
    for i in 0..shape.participants {
        let peak_target = rng.gen_range(0.15..=0.25);
        let phase: f64 = rng.gen_range(-1.5..1.5);
        let mut curve: Vec<f64> = (0..t)
            .map(|idx| {
                let h = hour(idx);
                let mut level = 0.55;
                for &(center, width, weight) in profile.load_bumps() {
                    level += weight * bump(h + phase, center, width);
                }
                level * rng.gen_range(0.97..1.03)
            })
            .collect();
        for idx in 1..t {
            let prev = curve[idx - 1];
            curve[idx] = curve[idx].clamp(prev * 0.875, prev * 1.15);
        }
        let max = curve.iter().copied().fold(f64::MIN, f64::max);
        let scale = peak_target / max;
        loads.push(LoadProfile {
            participant_id: format!("load_{}", i + 1),
            demand: curve.into_iter().map(|v| v * scale).collect(),
        });
    }

    // Solar: bell between sunrise and sunset with per-period jitter.
    let mut solar_units = Vec::with_capacity(shape.solar_units);
    for j in 0..shape.solar_units {
        let strength = profile.solar_strength() * rng.gen_range(0.92..1.08);
        let generation: Vec<f64> = (0..t)
            .map(|idx| {
                let h = hour(idx);
                if !(6.0..18.0).contains(&h) {
                    return 0.0;
                }
                let envelope = ((h - 6.0) / 12.0 * std::f64::consts::PI).sin();
                let value =
                    DEFAULT_SOLAR_RATED_MW * strength * envelope * rng.gen_range(0.92..1.08);
                value.clamp(0.0, DEFAULT_SOLAR_RATED_MW)
            })
            .collect();
        solar_units.push(SolarUnit {
            unit_id: format!("solar_{}", j + 1),
            generation,
            rated_capacity: DEFAULT_SOLAR_RATED_MW,
        });
    }

    let bess_units = (0..shape.bess_units)
        .map(|k| BessSpec::standard(format!("bess_{}", k + 1)))
        .collect();

    // Prices: diurnal shape mapped affinely onto the profile's band.
    let (price_lo, price_hi) = profile.price_band();
    let raw: Vec<f64> = (0..t)
        .map(|idx| {
            let h = hour(idx);
            let shape_value = 1.0 + 0.8 * bump(h, 17.5, 3.5) + 0.3 * bump(h, 9.0, 3.0);
            shape_value * rng.gen_range(0.98..1.02)
        })
        .collect();
    let raw_min = raw.iter().copied().fold(f64::MAX, f64::min);
    let raw_max = raw.iter().copied().fold(f64::MIN, f64::max);
    let span = (raw_max - raw_min).max(1e-9);
    let energy_price = raw
        .into_iter()
        .map(|v| price_lo + (v - raw_min) / span * (price_hi - price_lo))
        .collect();

    Scenario {
        time_grid: TimeGrid {
            period_count: t,
            period_hours: 24.0 / t as f64,
        },
        loads,
        solar_units,
        bess_units,
        tariff: Tariff {
            energy_price,
            peak_charge_rate: DEFAULT_PEAK_CHARGE_RATE,
            battery_wear_cost: DEFAULT_BATTERY_WEAR_COST,
            grid_fixed_cost: DEFAULT_GRID_FIXED_COST,
        },
        balance_tolerance: DEFAULT_BALANCE_TOLERANCE,
        ramp_limit_fraction: DEFAULT_RAMP_LIMIT_FRACTION,
    }
}
