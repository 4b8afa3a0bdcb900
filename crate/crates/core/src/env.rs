//! Episodic environment: reset/step, action scaling, the L2 reward, and
//! trajectory CSV export.

use std::io::{Read, Write};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dynamics::{nonlinear_residual, sensible_heat_per_person};
use crate::error::{config, contract, Error, Result};
use crate::model::{
    input_width, DiscreteModel, EnvAction, EnvState, RewardConfig, StepRecord, Trajectory,
    TrajectoryMeta, WeatherSeries, INPUT_GROUND, INPUT_HVAC0, INPUT_OUTDOOR,
};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EnvConfig<T> {
    pub discrete_model: DiscreteModel<T>,
    pub weather: WeatherSeries<T>,
    pub reward: RewardConfig<T>,
    /// Peak HVAC power per HVAC zone, W.
    pub max_power: Vec<T>,
    pub ac_map: Vec<bool>,
    pub episode_length: usize,
    /// `None` starts HVAC zones at their targets and the rest at the outdoor temperature.
    #[serde(default)]
    pub initial_temps: Option<Vec<T>>,
    /// `[min, max]` per observation component.
    pub state_bounds: Vec<[T; 2]>,
    /// Metabolic rate per step, W/person. The last value repeats past the end.
    pub activity_schedule: Vec<T>,
    /// Persons per zone (already folded into the model's `D`; kept for reporting).
    pub occupancy: Vec<T>,
}

/// Generous default observation bounds for `zones` zones.
pub fn default_state_bounds<T: Real>(zones: usize) -> Vec<[T; 2]> {
    let mut b = vec![[T::lit(-40.0), T::lit(80.0)]; zones];
    b.push([T::lit(-500.0), T::lit(500.0)]);
    b.push([T::lit(-40.0), T::lit(60.0)]);
    b.push([T::lit(-60.0), T::lit(60.0)]);
    b.push([T::zero(), T::lit(1500.0)]);
    b
}

impl<T: Real> EnvConfig<T> {
    pub fn zone_count(&self) -> usize {
        self.ac_map.len()
    }

    pub fn hvac_count(&self) -> usize {
        self.ac_map.iter().filter(|h| **h).count()
    }

    pub fn hvac_indices(&self) -> Vec<usize> {
        (0..self.ac_map.len()).filter(|&i| self.ac_map[i]).collect()
    }

    pub fn dt(&self) -> T {
        self.discrete_model.dt
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.discrete_model.zone_count();
        if self.ac_map.len() != m {
            return Err(config(format!("ac_map has {} entries for {m} zones", self.ac_map.len())));
        }
        if self.discrete_model.B_d.ncols() != input_width(m) {
            return Err(config("discrete model input width does not match the zone count"));
        }
        if self.weather.is_empty() {
            return Err(config("weather series is empty"));
        }
        self.weather.validate(self.dt())?;
        self.reward.validate(self.hvac_count())?;
        if self.max_power.len() != self.hvac_count() {
            return Err(config("max_power needs one entry per HVAC zone"));
        }
        if self.max_power.iter().any(|p| !(*p > T::zero())) {
            return Err(config("max_power must be > 0"));
        }
        if self.episode_length == 0 || self.episode_length > self.weather.len() {
            return Err(config(format!(
                "episode_length {} must lie in 1..={} (weather length)",
                self.episode_length,
                self.weather.len()
            )));
        }
        if let Some(t) = &self.initial_temps {
            if t.len() != m {
                return Err(config("initial_temps needs one entry per zone"));
            }
        }
        if self.state_bounds.len() != m + 4 {
            return Err(config(format!("state_bounds needs {} entries", m + 4)));
        }
        if let Some(i) = self.state_bounds.iter().position(|[lo, hi]| !(lo < hi)) {
            return Err(config(format!("state_bounds[{i}]: min must be < max")));
        }
        if self.activity_schedule.is_empty() {
            return Err(config("activity_schedule is empty"));
        }
        if self.occupancy.len() != m {
            return Err(config("occupancy needs one entry per zone"));
        }
        Ok(())
    }

    /// Metabolic rate at step `k`.
    pub fn activity_at(&self, k: usize) -> T {
        let s = &self.activity_schedule;
        s[k.min(s.len() - 1)]
    }

    fn weather_index(&self, k: usize) -> usize {
        k.min(self.weather.len() - 1)
    }

    pub fn outdoor_at(&self, k: usize) -> T {
        self.weather.outdoor_temp[self.weather_index(k)]
    }

    pub fn ghi_at(&self, k: usize) -> T {
        self.weather.ghi[self.weather_index(k)]
    }

    pub fn ground_at(&self, k: usize) -> T {
        self.weather.ground_at(k)
    }

    /// Input vector `[T_G, T_E, Q^z_1..Q^z_M, Q_ghi]` at step `k`.
    pub fn input_vector(&self, k: usize, zone_power: &[T]) -> DVector<T> {
        let m = self.zone_count();
        let mut u = DVector::zeros(input_width(m));
        u[INPUT_GROUND] = self.ground_at(k);
        u[INPUT_OUTDOOR] = self.outdoor_at(k);
        for (i, p) in zone_power.iter().enumerate() {
            u[INPUT_HVAC0 + i] = *p;
        }
        u[m + 2] = self.ghi_at(k);
        u
    }
}

/// HVAC command rescaled to watts.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledAction<T> {
    /// Per zone, W; zero where the zone has no HVAC. Positive heats.
    pub zone_power: Vec<T>,
    /// The normalized action after clipping to `[-1, 1]`.
    pub applied: EnvAction<T>,
    pub clipped: bool,
}

pub fn scale_action<T: Real>(action: &EnvAction<T>, cfg: &EnvConfig<T>) -> Result<ScaledAction<T>> {
    let hvac = cfg.hvac_indices();
    if action.values.len() != hvac.len() {
        return Err(contract(format!(
            "action has {} components, environment expects {}",
            action.values.len(),
            hvac.len()
        )));
    }
    if let Some(v) = action.values.iter().find(|v| !v.is_finite_value()) {
        return Err(Error::NonFinite(format!("action component {v}")));
    }
    let mut clipped = false;
    let applied: Vec<T> = action
        .values
        .iter()
        .map(|&v| {
            let c = v.clamp(-T::one(), T::one());
            clipped |= c != v;
            c
        })
        .collect();
    let mut zone_power = vec![T::zero(); cfg.zone_count()];
    for (h, &i) in hvac.iter().enumerate() {
        zone_power[i] = applied[h] * cfg.max_power[h];
    }
    Ok(ScaledAction { zone_power, applied: EnvAction { values: applied }, clipped })
}

/// `−(1−β)‖a‖₂ − β‖T^obj − T_hvac‖₂`, over HVAC zones only.
pub fn reward_l2<T: Real>(zone_temps: &[T], action: &EnvAction<T>, reward: &RewardConfig<T>, ac_map: &[bool]) -> T {
    let dev = comfort_norm(zone_temps, &reward.target_temps, ac_map);
    -(T::one() - reward.beta) * action.norm() - reward.beta * dev
}

fn comfort_norm<T: Real>(zone_temps: &[T], targets: &[T], ac_map: &[bool]) -> T {
    hvac_temps(zone_temps, ac_map)
        .zip(targets)
        .fold(T::zero(), |acc, (t, target)| acc + (*target - t) * (*target - t))
        .sqrt()
}

fn hvac_temps<'a, T: Real>(zone_temps: &'a [T], ac_map: &'a [bool]) -> impl Iterator<Item = T> + 'a {
    zone_temps.iter().zip(ac_map).filter(|(_, h)| **h).map(|(t, _)| *t)
}

/// Mean absolute deviation from target over HVAC zones, °C.
pub fn mean_abs_deviation<T: Real>(zone_temps: &[T], targets: &[T], ac_map: &[bool]) -> T {
    if targets.is_empty() {
        return T::zero();
    }
    let sum = hvac_temps(zone_temps, ac_map)
        .zip(targets)
        .fold(T::zero(), |acc, (t, target)| acc + (t - *target).abs());
    sum / T::from_usize_lossy(targets.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StepInfo<T> {
    /// J
    pub energy: T,
    /// °C, mean |T_i − T^obj_i| over HVAC zones after the step.
    pub comfort_deviation: T,
    pub action_clipped: bool,
    pub observation_clamped: bool,
    /// W per zone actually applied.
    pub zone_power: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<T> {
    pub state: EnvState<T>,
    pub reward: T,
    pub done: bool,
    pub info: StepInfo<T>,
}

/// A single simulated building. Not shared between threads; create one per worker.
#[derive(Debug, Clone)]
pub struct Environment<T: Real> {
    config: EnvConfig<T>,
    x: DVector<T>,
    k: usize,
    seed: u64,
    started: bool,
}

impl<T: Real> Environment<T> {
    pub fn new(config: EnvConfig<T>) -> Result<Self> {
        config.validate()?;
        let m = config.zone_count();
        Ok(Self { config, x: DVector::zeros(m), k: 0, seed: 0, started: false })
    }

    pub fn config(&self) -> &EnvConfig<T> {
        &self.config
    }

    pub fn step_index(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_done(&self) -> bool {
        self.started && self.k >= self.config.episode_length
    }

    /// Unclamped zone temperatures.
    pub fn zone_temps(&self) -> &[T] {
        self.x.as_slice()
    }

    /// The simulation is deterministic; `seed` is recorded for bookkeeping.
    pub fn reset(&mut self, seed: u64) -> Result<EnvState<T>> {
        let cfg = &self.config;
        let temps = match &cfg.initial_temps {
            Some(t) => t.clone(),
            None => {
                let outdoor = cfg.outdoor_at(0);
                let mut targets = cfg.reward.target_temps.iter();
                cfg.ac_map
                    .iter()
                    .map(|&h| if h { *targets.next().expect("validated") } else { outdoor })
                    .collect()
            }
        };
        self.x = DVector::from_vec(temps);
        self.k = 0;
        self.seed = seed;
        self.started = true;
        Ok(self.observe().0)
    }

    /// Observation at the current step, clamped to the configured bounds.
    pub fn observe(&self) -> (EnvState<T>, bool) {
        let cfg = &self.config;
        let zone_temps = self.x.as_slice().to_vec();
        let tbar = crate::model::mean(&zone_temps);
        let raw = EnvState {
            occupant_heat: sensible_heat_per_person(
                &cfg.discrete_model.occupant_coeffs,
                tbar,
                cfg.activity_at(self.k),
            ),
            ground_temp: cfg.ground_at(self.k),
            outdoor_temp: cfg.outdoor_at(self.k),
            ghi: cfg.ghi_at(self.k),
            zone_temps,
            step_index: self.k,
        };
        let mut v = raw.to_vector();
        let mut clamped = false;
        for (x, [lo, hi]) in v.iter_mut().zip(&cfg.state_bounds) {
            let c = x.clamp(*lo, *hi);
            clamped |= c != *x;
            *x = c;
        }
        (EnvState::from_vector(&v, self.k).expect("length checked"), clamped)
    }

    pub fn step(&mut self, action: &EnvAction<T>) -> Result<StepOutcome<T>> {
        if !self.started {
            return Err(contract("step called before reset"));
        }
        if self.is_done() {
            return Err(contract("step called after the episode finished"));
        }
        let cfg = &self.config;
        let scaled = scale_action(action, cfg)?;
        let u = cfg.input_vector(self.k, &scaled.zone_power);
        let tbar = self.x.mean();
        let f = nonlinear_residual(&cfg.discrete_model.occupant_coeffs, tbar, cfg.activity_at(self.k));
        let next = cfg.discrete_model.advance(&self.x, &u, f);
        if next.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite(format!("zone temperature at step {}", self.k + 1)));
        }
        let energy = cfg.dt() * scaled.zone_power.iter().fold(T::zero(), |a, p| a + p.abs());
        let reward = reward_l2(next.as_slice(), &scaled.applied, &cfg.reward, &cfg.ac_map);
        let comfort_deviation = mean_abs_deviation(next.as_slice(), &cfg.reward.target_temps, &cfg.ac_map);

        self.x = next;
        self.k += 1;
        let (state, observation_clamped) = self.observe();
        Ok(StepOutcome {
            state,
            reward,
            done: self.k >= self.config.episode_length,
            info: StepInfo {
                energy,
                comfort_deviation,
                action_clipped: scaled.clipped,
                observation_clamped,
                zone_power: scaled.zone_power,
            },
        })
    }
}

/// Drives an environment from `reset(seed)` to the horizon.
pub fn run_episode<T: Real, F>(env: &mut Environment<T>, seed: u64, meta: TrajectoryMeta, mut policy: F) -> Result<Trajectory<T>>
where
    F: FnMut(&EnvState<T>, &Environment<T>) -> Result<EnvAction<T>>,
{
    let mut state = env.reset(seed)?;
    let mut records = Vec::with_capacity(env.config().episode_length);
    loop {
        let action = policy(&state, env)?;
        let out = env.step(&action)?;
        let applied = scale_action(&action, env.config())?.applied;
        records.push(StepRecord {
            state,
            action: applied,
            reward: out.reward,
            energy: out.info.energy,
            comfort_deviation: out.info.comfort_deviation,
        });
        state = out.state;
        if out.done {
            break;
        }
    }
    Ok(Trajectory { meta, dt: env.config().dt(), records, final_state: Some(state) })
}

/// CSV header for `zones` zones and `hvac` actions.
pub fn trajectory_header(zones: usize, hvac: usize) -> Vec<String> {
    let mut h = vec!["k".to_string(), "t_seconds".to_string()];
    h.extend((1..=zones).map(|i| format!("T_{i}")));
    h.extend(["Qp", "Tg", "Te", "ghi"].map(String::from));
    h.extend((1..=hvac).map(|i| format!("a_{i}")));
    h.extend(["reward", "energy_J"].map(String::from));
    h
}

/// Writes one row per step; values use shortest round-trip formatting.
pub fn write_trajectory_csv<T: Real, W: Write>(traj: &Trajectory<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let zones = traj.records.first().map_or(0, |r| r.state.zone_count());
    let hvac = traj.records.first().map_or(0, |r| r.action.values.len());
    w.write_record(trajectory_header(zones, hvac))?;
    for (k, r) in traj.records.iter().enumerate() {
        let mut row = vec![k.to_string(), (traj.dt * T::from_usize_lossy(k)).to_string()];
        row.extend(r.state.to_vector().iter().map(T::to_string));
        row.extend(r.action.values.iter().map(T::to_string));
        row.push(r.reward.to_string());
        row.push(r.energy.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a trajectory written by [`write_trajectory_csv`]. Comfort deviation
/// is not part of the file and is left at zero.
pub fn read_trajectory_csv<T: Real, R: Read>(input: R) -> Result<Trajectory<T>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    let zones = header.iter().filter(|h| h.starts_with("T_")).count();
    let hvac = header.iter().filter(|h| h.starts_with("a_")).count();
    let expected = trajectory_header(zones, hvac);
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Parse(format!(
            "unexpected trajectory header; expected {}",
            expected.join(",")
        )));
    }
    let parse = |s: &str, row: usize| -> Result<T> {
        s.trim()
            .parse::<f64>()
            .map(T::lit)
            .map_err(|_| Error::Parse(format!("row {row}: bad number {s:?}")))
    };
    let mut records = Vec::new();
    let mut times = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals: Vec<T> = rec.iter().map(|s| parse(s, row + 1)).collect::<Result<_>>()?;
        times.push(vals[1]);
        let state = EnvState::from_vector(&vals[2..2 + zones + 4], row)?;
        let a0 = 2 + zones + 4;
        records.push(StepRecord {
            state,
            action: EnvAction { values: vals[a0..a0 + hvac].to_vec() },
            reward: vals[a0 + hvac],
            energy: vals[a0 + hvac + 1],
            comfort_deviation: T::zero(),
        });
    }
    let dt = if times.len() >= 2 { times[1] - times[0] } else { T::zero() };
    Ok(Trajectory { meta: TrajectoryMeta::default(), dt, records, final_state: None })
}
