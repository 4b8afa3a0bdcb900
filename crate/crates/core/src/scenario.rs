//! Scenario files: one JSON document describing the building, weather and
//! environment settings, plus the scenarios bundled with the crate.
//!
//! Required fields are `building`, `weather` and `ground_temps`; everything
//! else has a default (see [`ScenarioFile`]). Weather is either a CSV path
//! (relative to the scenario file) with header `t_seconds,outdoor_c,ghi_wm2`,
//! an inline object, or a generator such as `builtin:hot-dry`.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::discretize::discretize;
use crate::dynamics::{assemble_continuous, derive_thermal_parameters, UFactors};
use crate::env::{default_state_bounds, EnvConfig};
use crate::error::{config, Error, Result};
use crate::model::{
    first_day_of_month, month_of_day, Adjacency, BuildingTopology, ContinuousModel,
    OccupantHeatCoefficients, RewardConfig, SolarParameters, SurfaceContact, ThermalParameters,
    WeatherSeries, ZoneSpec,
};
use crate::scalar::Real;

/// Environment variable naming an extra directory searched for `<name>.json`.
pub const SCENARIO_DIR_ENV: &str = "THERMOENV_SCENARIO_DIR";

pub const DEFAULT_TARGET: f64 = 22.0;
pub const DEFAULT_TIME_RESOLUTION: f64 = 3600.0;
pub const DEFAULT_MAX_POWER: f64 = 8000.0;
/// Comfort weight; the energy weight is `1 − β`.
pub const DEFAULT_REWARD_BETA: f64 = 0.999;
pub const DEFAULT_OPERATING_HOURS: [f64; 2] = [8.0, 15.0];
/// Days generated by the `builtin:` weather sources when no count is given.
pub const DEFAULT_BUILTIN_DAYS: usize = 31;

const REQUIRED: &str = "required fields are `building` (zone list), `weather` (weather file) and `ground_temps` (12 monthly values)";

/// A scalar applied to every entry, or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Copy> OneOrMany<T> {
    fn expand(&self, n: usize, what: &str) -> Result<Vec<T>> {
        match self {
            Self::One(v) => Ok(vec![*v; n]),
            Self::Many(v) if v.len() == n => Ok(v.clone()),
            Self::Many(v) => Err(config(format!("{what}: expected {n} entries, got {}", v.len()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ZoneEntry<T> {
    pub id: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub volume: T,
    #[serde(default = "zero")]
    pub window_area: T,
    #[serde(default)]
    pub is_ground_floor: bool,
    #[serde(default)]
    pub is_perimeter: bool,
    #[serde(default = "one")]
    pub hvac_efficiency: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct BuildingSpec<T> {
    pub zones: Vec<ZoneEntry<T>>,
    #[serde(default)]
    pub adjacency: Vec<Adjacency<T>>,
    #[serde(default)]
    pub exterior_walls: Vec<SurfaceContact<T>>,
    #[serde(default)]
    pub ground_contact: Vec<SurfaceContact<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct InlineWeather<T> {
    pub outdoor_c: Vec<T>,
    pub ghi_wm2: Vec<T>,
}

/// `"path/to/weather.csv"`, `"builtin:hot-dry[:days]"`, `"builtin:constant:<°C>[:days]"`,
/// or an inline object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", untagged)]
pub enum WeatherSource<T> {
    Reference(String),
    Inline(InlineWeather<T>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ZoneValue<T> {
    pub zone: usize,
    pub value: T,
}

/// Adjustments applied after the U-factor/volume derivation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ThermalOverrides<T> {
    /// Multiplies every capacitance (furniture, slabs and other thermal mass).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacitance_scale: Option<T>,
    /// Absolute capacitance per zone, J/K; applied after the scale.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub capacitance: Vec<ZoneValue<T>>,
}

/// On-disk scenario document. Omitted optional fields take the defaults above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real", deny_unknown_fields)]
pub struct ScenarioFile<T> {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub building: Option<BuildingSpec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weather: Option<WeatherSource<T>>,
    /// Monthly ground temperatures, °C, January first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_temps: Option<[T; 12]>,
    /// Fallback U-factors for surfaces without their own.
    #[serde(default, skip_serializing_if = "is_default_u")]
    pub u_wall: UFactors<T>,
    /// °C, one value or one per HVAC zone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<OneOrMany<T>>,
    /// Sample time, s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_resolution: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reward_beta: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shgc: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shgc_weight: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_weight: Option<T>,
    /// Persons per zone at full occupancy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_occupancy: Option<OneOrMany<T>>,
    /// Metabolic rate per step, W/person; the last value repeats.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity_schedule: Option<OneOrMany<T>>,
    /// HVAC presence per zone, in zone order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ac_map: Option<Vec<bool>>,
    /// W, one value or one per HVAC zone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_power: Option<OneOrMany<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episode_length: Option<usize>,
    /// One-based month the weather starts in; ignored when `start_day_of_year` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_month: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_day_of_year: Option<u32>,
    /// `[start, end)` hour of day counted by the comfort metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operating_hours: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_temps: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_bounds: Option<Vec<[T; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupant_coefficients: Option<OccupantHeatCoefficients<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal_overrides: Option<ThermalOverrides<T>>,
}

fn zero<T: Real>() -> T {
    T::zero()
}

fn one<T: Real>() -> T {
    T::one()
}

fn is_default_u<T: Real>(u: &UFactors<T>) -> bool {
    u.interior.is_none() && u.exterior.is_none() && u.ground.is_none()
}

/// A scenario compiled down to a ready-to-run environment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub name: String,
    pub source: ScenarioFile<T>,
    pub topology: BuildingTopology<T>,
    pub params: ThermalParameters<T>,
    pub solar: SolarParameters<T>,
    pub continuous: ContinuousModel<T>,
    pub env: EnvConfig<T>,
    pub operating_hours: [f64; 2],
}

impl<T: Real> Scenario<T> {
    /// Whether the step starting at `k` falls inside the operating hours.
    pub fn is_operating(&self, k: usize) -> bool {
        let h = (k as f64 * self.env.dt().to_f64_lossy() / 3600.0).rem_euclid(24.0);
        let [start, end] = self.operating_hours;
        h >= start && h < end
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.source)?)
    }
}

impl<T: Real> ScenarioFile<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config(format!("scenario: {e}")))
    }

    /// Applies defaults and builds the model. Relative weather paths resolve against `base_dir`.
    pub fn compile(&self, base_dir: Option<&Path>) -> Result<Scenario<T>> {
        let missing: Vec<&str> = [
            ("building", self.building.is_none()),
            ("weather", self.weather.is_none()),
            ("ground_temps", self.ground_temps.is_none()),
        ]
        .into_iter()
        .filter_map(|(n, m)| m.then_some(n))
        .collect();
        if !missing.is_empty() {
            return Err(config(format!("missing {}; {REQUIRED}", missing.join(", "))));
        }
        let building = self.building.as_ref().expect("checked");
        let ground_temps = self.ground_temps.expect("checked");
        let m = building.zones.len();
        let constants = PhysicalConstants::<T>::bundled();

        let ac_map = match &self.ac_map {
            Some(a) if a.len() != m => {
                return Err(config(format!("ac_map: expected {m} entries, got {}", a.len())))
            }
            Some(a) => a.clone(),
            None => vec![true; m],
        };
        let occupancy = self
            .full_occupancy
            .as_ref()
            .map_or(Ok(vec![T::zero(); m]), |o| o.expand(m, "full_occupancy"))?;
        let topology = BuildingTopology {
            zones: building
                .zones
                .iter()
                .zip(&ac_map)
                .zip(&occupancy)
                .map(|((z, &hvac), &occ)| ZoneSpec {
                    id: z.id,
                    name: z.name.clone(),
                    volume: z.volume,
                    window_area: z.window_area,
                    is_ground_floor: z.is_ground_floor,
                    is_perimeter: z.is_perimeter,
                    occupancy: occ,
                    hvac_present: hvac,
                    hvac_efficiency: z.hvac_efficiency,
                })
                .collect(),
            adjacency: building.adjacency.clone(),
            exterior_walls: building.exterior_walls.clone(),
            ground_contact: building.ground_contact.clone(),
        };
        topology.validate()?;

        let mut params = derive_thermal_parameters(&topology, &self.u_wall, &constants)?;
        if let Some(o) = &self.thermal_overrides {
            if let Some(s) = o.capacitance_scale {
                if !(s > T::zero()) {
                    return Err(config("thermal_overrides.capacitance_scale must be > 0"));
                }
                params.capacitance.iter_mut().for_each(|c| *c *= s);
            }
            for zv in &o.capacitance {
                params.capacitance[topology.index_of(zv.zone)?] = zv.value;
            }
        }

        let solar = SolarParameters {
            shgc: self.shgc.unwrap_or_else(|| T::lit(0.252)),
            shgc_weight: self.shgc_weight.unwrap_or_else(|| T::lit(0.1)),
            ground_weight: self.ground_weight.unwrap_or_else(|| T::lit(0.5)),
        };
        let coeffs = self.occupant_coefficients.unwrap_or(constants.occupant);
        let continuous = assemble_continuous(&topology, &params, &solar, &coeffs)?;
        let dt = self.time_resolution.unwrap_or_else(|| T::lit(DEFAULT_TIME_RESOLUTION));
        if !(dt > T::zero()) {
            return Err(config("time_resolution must be > 0"));
        }
        let discrete = discretize(&continuous, dt)?;

        let start_day = match (self.start_day_of_year, self.start_month) {
            (Some(d), _) => d,
            (None, Some(mo)) if (1..=12).contains(&mo) => first_day_of_month(mo),
            (None, Some(mo)) => return Err(config(format!("start_month {mo} outside 1..=12"))),
            (None, None) => 0,
        };
        let weather = resolve_weather(self.weather.as_ref().expect("checked"), base_dir, dt, ground_temps, start_day)?;

        let hvac = topology.hvac_count();
        let target = self.target.clone().unwrap_or(OneOrMany::One(T::lit(DEFAULT_TARGET)));
        let max_power = self.max_power.clone().unwrap_or(OneOrMany::One(T::lit(DEFAULT_MAX_POWER)));
        let activity_schedule = match &self.activity_schedule {
            None => vec![coeffs.metabolic_rate],
            Some(OneOrMany::One(v)) => vec![*v],
            Some(OneOrMany::Many(v)) => v.clone(),
        };
        let env = EnvConfig {
            discrete_model: discrete,
            episode_length: self.episode_length.unwrap_or(weather.len()),
            weather,
            reward: RewardConfig {
                beta: self.reward_beta.unwrap_or_else(|| T::lit(DEFAULT_REWARD_BETA)),
                target_temps: target.expand(hvac, "target")?,
            },
            max_power: max_power.expand(hvac, "max_power")?,
            ac_map,
            initial_temps: self.initial_temps.clone(),
            state_bounds: self.state_bounds.clone().unwrap_or_else(|| default_state_bounds(m)),
            activity_schedule,
            occupancy,
        };
        env.validate()?;

        let operating_hours = self.operating_hours.unwrap_or(DEFAULT_OPERATING_HOURS);
        if !(0.0..=24.0).contains(&operating_hours[0])
            || !(0.0..=24.0).contains(&operating_hours[1])
            || operating_hours[0] >= operating_hours[1]
        {
            return Err(config("operating_hours must be [start, end) with 0 <= start < end <= 24"));
        }

        Ok(Scenario {
            name: self.name.clone(),
            source: self.clone(),
            topology,
            params,
            solar,
            continuous,
            env,
            operating_hours,
        })
    }
}

fn resolve_weather<T: Real>(
    source: &WeatherSource<T>,
    base_dir: Option<&Path>,
    dt: T,
    ground: [T; 12],
    start_day: u32,
) -> Result<WeatherSeries<T>> {
    let mut w = match source {
        WeatherSource::Inline(i) => {
            if i.outdoor_c.len() != i.ghi_wm2.len() {
                return Err(config("inline weather: outdoor_c and ghi_wm2 differ in length"));
            }
            WeatherSeries {
                timestamps: (0..i.outdoor_c.len()).map(|k| dt * T::from_usize_lossy(k)).collect(),
                outdoor_temp: i.outdoor_c.clone(),
                ghi: i.ghi_wm2.clone(),
                ground_temp: ground,
                start_day_of_year: start_day,
            }
        }
        WeatherSource::Reference(r) => match r.strip_prefix("builtin:") {
            Some(spec) => builtin_weather(spec, dt, ground, start_day)?,
            None => {
                let p = Path::new(r);
                let path = match base_dir {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.to_path_buf(),
                };
                load_weather(&path, ground)?
            }
        },
    };
    w.start_day_of_year = start_day;
    w.validate(dt)?;
    Ok(w)
}

fn builtin_weather<T: Real>(spec: &str, dt: T, ground: [T; 12], start_day: u32) -> Result<WeatherSeries<T>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| config(format!("builtin weather: bad number {s:?}")));
    let days = |s: Option<&&str>| -> Result<usize> {
        match s {
            None => Ok(DEFAULT_BUILTIN_DAYS),
            Some(s) => s.parse().map_err(|_| config(format!("builtin weather: bad day count {s:?}"))),
        }
    };
    let dt_s = dt.to_f64_lossy();
    let steps = |d: usize| ((d as f64) * 86_400.0 / dt_s).round() as usize;
    match parts.first().copied() {
        Some("hot-dry") if parts.len() <= 2 => {
            let mut w = hot_dry_weather::<T>(start_day, steps(days(parts.get(1))?), dt);
            w.ground_temp = ground;
            Ok(w)
        }
        Some("constant") if (2..=3).contains(&parts.len()) => {
            let t = T::lit(num(parts[1])?);
            let mut w = WeatherSeries::constant(steps(days(parts.get(2))?), dt, t, T::zero(), T::zero());
            w.ground_temp = ground;
            Ok(w)
        }
        _ => Err(config(format!(
            "unknown builtin weather {spec:?}; expected hot-dry[:days] or constant:<celsius>[:days]"
        ))),
    }
}

// Hot-dry desert climate, monthly normals (°C mean, °C half diurnal range,
// W/m² clear-sky noon irradiance, h daylight).
const HOT_DRY_MEAN: [f64; 12] = [11.6, 13.3, 16.2, 20.0, 24.8, 30.0, 31.4, 30.6, 28.4, 22.4, 15.6, 11.2];
const HOT_DRY_SWING: [f64; 12] = [8.0, 8.3, 8.6, 9.0, 9.2, 9.3, 7.2, 6.9, 7.6, 8.6, 8.6, 8.0];
const HOT_DRY_PEAK_GHI: [f64; 12] = [620.0, 720.0, 840.0, 950.0, 1010.0, 1030.0, 960.0, 920.0, 870.0, 780.0, 670.0, 600.0];
const HOT_DRY_DAYLIGHT: [f64; 12] = [10.3, 11.0, 12.0, 12.9, 13.8, 14.2, 14.0, 13.3, 12.4, 11.4, 10.5, 10.1];

/// Ground temperatures matching the built-in hot-dry climate, °C.
pub const HOT_DRY_GROUND: [f64; 12] = [16.9, 15.6, 16.0, 17.5, 21.0, 24.5, 27.5, 29.0, 28.8, 26.7, 23.3, 19.8];

fn monthly(table: &[f64; 12], day: f64) -> f64 {
    // Linear interpolation between mid-month values.
    let d = day.rem_euclid(365.0);
    let m = month_of_day(d as u32);
    let mid = first_day_of_month(m as u32 + 1) as f64 + 15.0;
    let (a, b, frac) = if d >= mid {
        (m, (m + 1) % 12, (d - mid) / 30.4)
    } else {
        ((m + 11) % 12, m, 1.0 - (mid - d) / 30.4)
    };
    table[a] + (table[b] - table[a]) * frac.clamp(0.0, 1.0)
}

/// Deterministic synthetic desert weather starting at midnight of `start_day`.
///
/// Outdoor temperature follows a daily sinusoid peaking at 15:00 with a slow
/// multi-day wobble; irradiance is a clear-sky half-sine over daylight hours.
pub fn hot_dry_weather<T: Real>(start_day: u32, steps: usize, dt: T) -> WeatherSeries<T> {
    let dt_s = dt.to_f64_lossy();
    let mut outdoor = Vec::with_capacity(steps);
    let mut ghi = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 * dt_s;
        let day = start_day as f64 + t / 86_400.0;
        let hour = (t / 3600.0).rem_euclid(24.0);
        let wobble = 1.6 * (2.0 * PI * day / 6.7).sin() + 0.8 * (2.0 * PI * day / 3.1 + 1.0).sin();
        let temp = monthly(&HOT_DRY_MEAN, day)
            + monthly(&HOT_DRY_SWING, day) * (2.0 * PI * (hour - 9.0) / 24.0).sin()
            + wobble;
        let daylight = monthly(&HOT_DRY_DAYLIGHT, day);
        let sunrise = 12.5 - daylight / 2.0;
        let phase = (hour - sunrise) / daylight;
        let sun = if (0.0..=1.0).contains(&phase) { (PI * phase).sin().powf(1.3) } else { 0.0 };
        outdoor.push(T::lit(temp));
        ghi.push(T::lit(monthly(&HOT_DRY_PEAK_GHI, day) * sun));
    }
    WeatherSeries {
        timestamps: (0..steps).map(|k| dt * T::from_usize_lossy(k)).collect(),
        outdoor_temp: outdoor,
        ghi,
        ground_temp: HOT_DRY_GROUND.map(T::lit),
        start_day_of_year: start_day,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WeatherRow {
    t_seconds: f64,
    outdoor_c: f64,
    ghi_wm2: f64,
}

/// Reads `t_seconds,outdoor_c,ghi_wm2`; the first spacing sets the sample time.
pub fn parse_weather_csv<T: Real, R: Read>(input: R, ground: [T; 12]) -> Result<WeatherSeries<T>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != ["t_seconds", "outdoor_c", "ghi_wm2"] {
        return Err(Error::Parse(format!(
            "weather header must be t_seconds,outdoor_c,ghi_wm2, got {}",
            header.join(",")
        )));
    }
    let mut w = WeatherSeries {
        timestamps: Vec::new(),
        outdoor_temp: Vec::new(),
        ghi: Vec::new(),
        ground_temp: ground,
        start_day_of_year: 0,
    };
    for (k, row) in rdr.deserialize::<WeatherRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("weather row {k}: {e}")))?;
        w.timestamps.push(T::lit(row.t_seconds));
        w.outdoor_temp.push(T::lit(row.outdoor_c));
        w.ghi.push(T::lit(row.ghi_wm2));
    }
    if w.is_empty() {
        return Err(config("weather file has no rows"));
    }
    let dt = if w.len() >= 2 { w.timestamps[1] - w.timestamps[0] } else { T::lit(DEFAULT_TIME_RESOLUTION) };
    if !(dt > T::zero()) {
        return Err(config("weather row 1: timestamps must increase"));
    }
    w.validate(dt)?;
    Ok(w)
}

pub fn load_weather<T: Real>(path: &Path, ground: [T; 12]) -> Result<WeatherSeries<T>> {
    let f = std::fs::File::open(path)
        .map_err(|e| config(format!("cannot open weather file {}: {e}", path.display())))?;
    parse_weather_csv(std::io::BufReader::new(f), ground)
}

pub fn write_weather_csv<T: Real, W: Write>(w: &WeatherSeries<T>, out: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    for k in 0..w.len() {
        wr.serialize(WeatherRow {
            t_seconds: w.timestamps[k].to_f64_lossy(),
            outdoor_c: w.outdoor_temp[k].to_f64_lossy(),
            ghi_wm2: w.ghi[k].to_f64_lossy(),
        })?;
    }
    wr.flush()?;
    Ok(())
}

pub fn load_scenario<T: Real>(path: &Path) -> Result<Scenario<T>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config(format!("cannot read scenario {}: {e}", path.display())))?;
    let file = ScenarioFile::<T>::from_json(&text)?;
    let mut s = file.compile(path.parent())?;
    if s.name.is_empty() {
        s.name = path.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(s)
}

const BUNDLED: [(&str, &str); 4] = [
    ("two-zone-fig2", include_str!("../scenarios/two-zone-fig2.json")),
    ("single-zone", include_str!("../scenarios/single-zone.json")),
    ("single-story-5zone", include_str!("../scenarios/single-story-5zone.json")),
    ("medium-office-18zone", include_str!("../scenarios/medium-office-18zone.json")),
];

/// Names of the scenarios shipped with the crate.
pub fn bundled_scenarios() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_scenario_json(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

pub fn bundled_scenario<T: Real>(name: &str) -> Result<Scenario<T>> {
    let json = bundled_scenario_json(name).ok_or_else(|| {
        config(format!("unknown scenario {name:?}; bundled: {}", bundled_scenarios().join(", ")))
    })?;
    let mut s = ScenarioFile::<T>::from_json(json)?.compile(None)?;
    if s.name.is_empty() {
        s.name = name.to_owned();
    }
    Ok(s)
}

/// Finds a scenario by file path, then in `$THERMOENV_SCENARIO_DIR`, then among the bundled ones.
pub fn resolve_scenario<T: Real>(reference: &str) -> Result<Scenario<T>> {
    let direct = Path::new(reference);
    if direct.is_file() {
        return load_scenario(direct);
    }
    if let Some(dir) = std::env::var_os(SCENARIO_DIR_ENV) {
        for candidate in [PathBuf::from(&dir).join(reference), PathBuf::from(&dir).join(format!("{reference}.json"))] {
            if candidate.is_file() {
                return load_scenario(&candidate);
            }
        }
    }
    bundled_scenario(reference)
}
