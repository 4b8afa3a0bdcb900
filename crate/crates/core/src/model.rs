//! Domain types shared by every other module.
//!
//! Temperatures are °C throughout. Only temperature differences enter the
//! conduction terms, so the Kelvin offset never matters; the occupant heat
//! polynomial is also evaluated in °C.
//!
//! The input vector `u` is always ordered `[T_G, T_E, Q^z_1..Q^z_M, Q_ghi]`.

use std::collections::{BTreeSet, HashMap};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{config, contract, Result};
use crate::scalar::{matrix_rows, vector_serde, Real};

/// Column of the ground temperature in `u`.
pub const INPUT_GROUND: usize = 0;
/// Column of the outdoor temperature in `u`.
pub const INPUT_OUTDOOR: usize = 1;
/// First HVAC power column in `u`.
pub const INPUT_HVAC0: usize = 2;

/// Width of the input vector for `zones` zones.
pub const fn input_width(zones: usize) -> usize {
    zones + 3
}

/// Column of the irradiance input for `zones` zones.
pub const fn input_ghi(zones: usize) -> usize {
    zones + 2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ZoneSpec<T> {
    pub id: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    /// Air volume, m³.
    pub volume: T,
    /// Glazed area, m².
    pub window_area: T,
    pub is_ground_floor: bool,
    pub is_perimeter: bool,
    /// Persons at full occupancy.
    pub occupancy: T,
    pub hvac_present: bool,
    pub hvac_efficiency: T,
}

impl<T: Real> ZoneSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.volume > T::zero()) {
            return Err(config(format!("zone {}: volume must be > 0", self.id)));
        }
        if self.window_area < T::zero() || !self.window_area.is_finite_value() {
            return Err(config(format!("zone {}: window_area must be >= 0", self.id)));
        }
        if self.occupancy < T::zero() || !self.occupancy.is_finite_value() {
            return Err(config(format!("zone {}: occupancy must be >= 0", self.id)));
        }
        if !self.hvac_efficiency.is_finite_value() {
            return Err(config(format!("zone {}: hvac_efficiency not finite", self.id)));
        }
        Ok(())
    }
}

/// One wall (or floor/ceiling) shared by two zones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Adjacency<T> {
    /// Zone ids on either side.
    pub zones: [usize; 2],
    /// m²
    pub area: T,
    /// W/(m²·K); falls back to the interior U-factor when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_factor: Option<T>,
}

/// A surface between one zone and the outdoors or the ground.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SurfaceContact<T> {
    pub zone: usize,
    pub area: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_factor: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BuildingTopology<T> {
    pub zones: Vec<ZoneSpec<T>>,
    /// Undirected zone-to-zone surfaces; several entries for one pair act in parallel.
    #[serde(default)]
    pub adjacency: Vec<Adjacency<T>>,
    #[serde(default)]
    pub exterior_walls: Vec<SurfaceContact<T>>,
    #[serde(default)]
    pub ground_contact: Vec<SurfaceContact<T>>,
}

impl<T: Real> BuildingTopology<T> {
    pub fn zone_count(&self) -> usize {
        self.zones.len()
    }

    /// Map from zone id to its position in `zones`.
    pub fn index_map(&self) -> HashMap<usize, usize> {
        self.zones.iter().enumerate().map(|(i, z)| (z.id, i)).collect()
    }

    pub fn index_of(&self, id: usize) -> Result<usize> {
        self.zones
            .iter()
            .position(|z| z.id == id)
            .ok_or_else(|| config(format!("reference to unknown zone {id}")))
    }

    pub fn ac_map(&self) -> Vec<bool> {
        self.zones.iter().map(|z| z.hvac_present).collect()
    }

    pub fn hvac_count(&self) -> usize {
        self.zones.iter().filter(|z| z.hvac_present).count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.zones.is_empty() {
            return Err(config("building has no zones"));
        }
        let mut seen = BTreeSet::new();
        for z in &self.zones {
            if !seen.insert(z.id) {
                return Err(config(format!("duplicate zone id {}", z.id)));
            }
            z.validate()?;
        }
        for adj in &self.adjacency {
            let [a, b] = adj.zones;
            for id in [a, b] {
                if !seen.contains(&id) {
                    return Err(config(format!(
                        "adjacency {a}-{b} references unknown zone {id}"
                    )));
                }
            }
            if a == b {
                return Err(config(format!("adjacency {a}-{b} connects a zone to itself")));
            }
            check_surface(adj.area, adj.u_factor, || format!("adjacency {a}-{b}"))?;
        }
        for (kind, list) in [("exterior wall", &self.exterior_walls), ("ground contact", &self.ground_contact)] {
            for s in list.iter() {
                if !seen.contains(&s.zone) {
                    return Err(config(format!("{kind} references unknown zone {}", s.zone)));
                }
                check_surface(s.area, s.u_factor, || format!("{kind} of zone {}", s.zone))?;
            }
        }
        let idx = self.index_map();
        for s in &self.exterior_walls {
            if !self.zones[idx[&s.zone]].is_perimeter {
                return Err(config(format!(
                    "zone {} has an exterior wall but is not a perimeter zone",
                    s.zone
                )));
            }
        }
        for s in &self.ground_contact {
            if !self.zones[idx[&s.zone]].is_ground_floor {
                return Err(config(format!(
                    "zone {} touches the ground but is not a ground-floor zone",
                    s.zone
                )));
            }
        }
        Ok(())
    }
}

fn check_surface<T: Real>(area: T, u: Option<T>, what: impl Fn() -> String) -> Result<()> {
    if !(area > T::zero()) || !area.is_finite_value() {
        return Err(config(format!("{}: area must be > 0", what())));
    }
    if let Some(u) = u {
        if !(u > T::zero()) || !u.is_finite_value() {
            return Err(config(format!("{}: U-factor must be > 0", what())));
        }
    }
    Ok(())
}

/// Resistance of the combined surfaces between two zones, K/W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PairResistance<T> {
    /// Zone ids, smaller first.
    pub zones: [usize; 2],
    pub r: T,
}

/// Lumped RC values, indexed by zone position (same order as `BuildingTopology::zones`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ThermalParameters<T> {
    /// J/K
    pub capacitance: Vec<T>,
    pub resistance: Vec<PairResistance<T>>,
    /// `None` when the zone does not touch the ground.
    pub resistance_ground: Vec<Option<T>>,
    /// `None` when the zone has no exterior surface.
    pub resistance_exterior: Vec<Option<T>>,
}

impl<T: Real> ThermalParameters<T> {
    /// Resistance between two zone ids, symmetric in its arguments.
    pub fn between(&self, a: usize, b: usize) -> Option<T> {
        let key = if a <= b { [a, b] } else { [b, a] };
        self.resistance.iter().find(|p| p.zones == key).map(|p| p.r)
    }

    pub fn validate(&self, topology: &BuildingTopology<T>) -> Result<()> {
        let m = topology.zone_count();
        if self.capacitance.len() != m
            || self.resistance_ground.len() != m
            || self.resistance_exterior.len() != m
        {
            return Err(config(format!(
                "thermal parameters sized for a different building (expected {m} zones)"
            )));
        }
        let positive = |v: T| v > T::zero() && v.is_finite_value();
        for (i, z) in topology.zones.iter().enumerate() {
            if !positive(self.capacitance[i]) {
                return Err(config(format!("zone {}: capacitance must be > 0", z.id)));
            }
            for r in [self.resistance_ground[i], self.resistance_exterior[i]].into_iter().flatten() {
                if !positive(r) {
                    return Err(config(format!("zone {}: resistance must be > 0", z.id)));
                }
            }
        }
        let idx = topology.index_map();
        for p in &self.resistance {
            if p.zones[0] > p.zones[1] {
                return Err(config(format!(
                    "resistance pair {:?} must list the smaller id first",
                    p.zones
                )));
            }
            for id in p.zones {
                if !idx.contains_key(&id) {
                    return Err(config(format!("resistance references unknown zone {id}")));
                }
            }
            if !positive(p.r) {
                return Err(config(format!("resistance {:?} must be > 0", p.zones)));
            }
        }
        Ok(())
    }
}

/// Coefficients of the sensible-heat-per-person polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OccupantHeatCoefficients<T> {
    /// `c₁ … c₉`; signs are applied at evaluation time.
    pub c: [T; 9],
    /// W/person.
    pub metabolic_rate: T,
}

impl<T: Real> OccupantHeatCoefficients<T> {
    pub fn zero() -> Self {
        Self { c: [T::zero(); 9], metabolic_rate: T::zero() }
    }

    pub fn c4(&self) -> T {
        self.c[3]
    }
}

/// Exogenous weather inputs on the simulation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WeatherSeries<T> {
    /// Seconds since episode start, uniformly spaced.
    pub timestamps: Vec<T>,
    /// °C
    pub outdoor_temp: Vec<T>,
    /// W/m²
    pub ghi: Vec<T>,
    /// Monthly ground temperatures, January first, °C.
    pub ground_temp: [T; 12],
    /// Day of year (0 = 1 January) at `timestamps[0]`; selects the ground month.
    #[serde(default)]
    pub start_day_of_year: u32,
}

const MONTH_DAYS: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// Zero-based month of a zero-based day of a non-leap year (wraps past day 365).
pub fn month_of_day(day_of_year: u32) -> usize {
    let mut d = day_of_year % 365;
    for (m, len) in MONTH_DAYS.iter().enumerate() {
        if d < *len {
            return m;
        }
        d -= len;
    }
    11
}

/// First day of a one-based month in a non-leap year.
pub fn first_day_of_month(month: u32) -> u32 {
    MONTH_DAYS.iter().take(month.clamp(1, 12) as usize - 1).sum()
}

impl<T: Real> WeatherSeries<T> {
    pub fn len(&self) -> usize {
        self.outdoor_temp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outdoor_temp.is_empty()
    }

    /// Constant weather, handy for equilibrium checks.
    pub fn constant(steps: usize, dt: T, outdoor: T, ghi: T, ground: T) -> Self {
        Self {
            timestamps: (0..steps).map(|k| dt * T::from_usize_lossy(k)).collect(),
            outdoor_temp: vec![outdoor; steps],
            ghi: vec![ghi; steps],
            ground_temp: [ground; 12],
            start_day_of_year: 0,
        }
    }

    /// Ground temperature at step `k`.
    pub fn ground_at(&self, k: usize) -> T {
        let t = self.timestamps.get(k).copied().unwrap_or_else(|| {
            let dt = self.spacing().unwrap_or_else(T::zero);
            dt * T::from_usize_lossy(k)
        });
        let day = (t.to_f64_lossy() / 86_400.0).floor().max(0.0) as u32;
        self.ground_temp[month_of_day(self.start_day_of_year + day)]
    }

    /// Hour of day (0..24) at step `k`, counting from midnight of the start day.
    pub fn hour_of_day(&self, k: usize) -> f64 {
        let t = self.timestamps[k].to_f64_lossy();
        (t / 3600.0).rem_euclid(24.0)
    }

    fn spacing(&self) -> Option<T> {
        (self.timestamps.len() >= 2).then(|| self.timestamps[1] - self.timestamps[0])
    }

    /// Checks lengths, uniform spacing at `dt`, and `ghi >= 0`.
    pub fn validate(&self, dt: T) -> Result<()> {
        let n = self.len();
        if self.timestamps.len() != n || self.ghi.len() != n {
            return Err(config("weather columns have different lengths"));
        }
        let tol = dt * T::lit(1e-9) + T::lit(1e-9);
        for k in 1..n {
            let step = self.timestamps[k] - self.timestamps[k - 1];
            if (step - dt).abs() > tol {
                return Err(config(format!(
                    "weather row {k}: spacing {step} s differs from sample time {dt} s"
                )));
            }
        }
        for (k, g) in self.ghi.iter().enumerate() {
            if *g < T::zero() || !g.is_finite_value() {
                return Err(config(format!("weather row {k}: ghi must be >= 0, got {g}")));
            }
        }
        if self.outdoor_temp.iter().any(|t| !t.is_finite_value()) {
            return Err(config("weather contains non-finite outdoor temperature"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SolarParameters<T> {
    pub shgc: T,
    /// Attenuation of the irradiance input.
    pub shgc_weight: T,
    /// Attenuation of the ground coupling.
    pub ground_weight: T,
}

impl<T: Real> SolarParameters<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(self.shgc) {
            return Err(config("shgc must lie in [0, 1]"));
        }
        if !unit(self.shgc_weight) || !unit(self.ground_weight) {
            return Err(config("shgc_weight and ground_weight must lie in [0, 1]"));
        }
        Ok(())
    }
}

impl Default for SolarParameters<f64> {
    fn default() -> Self {
        Self { shgc: 0.252, shgc_weight: 0.1, ground_weight: 0.5 }
    }
}

/// `ẋ = A x + B u + D f(x, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[allow(non_snake_case)]
pub struct ContinuousModel<T> {
    #[serde(with = "matrix_rows")]
    pub A: DMatrix<T>,
    #[serde(with = "matrix_rows")]
    pub B: DMatrix<T>,
    #[serde(with = "vector_serde")]
    pub D: DVector<T>,
    pub occupant_coeffs: OccupantHeatCoefficients<T>,
    pub zone_count: usize,
}

/// `x[k+1] = A_d x[k] + B_d u[k] + D_d f(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[allow(non_snake_case)]
pub struct DiscreteModel<T> {
    #[serde(with = "matrix_rows")]
    pub A_d: DMatrix<T>,
    #[serde(with = "matrix_rows")]
    pub B_d: DMatrix<T>,
    #[serde(with = "vector_serde")]
    pub D_d: DVector<T>,
    pub dt: T,
    pub occupant_coeffs: OccupantHeatCoefficients<T>,
}

impl<T: Real> DiscreteModel<T> {
    pub fn zone_count(&self) -> usize {
        self.A_d.nrows()
    }

    /// One transition with the nonlinear input held at `f`.
    pub fn advance(&self, x: &DVector<T>, u: &DVector<T>, f: T) -> DVector<T> {
        &self.A_d * x + &self.B_d * u + &self.D_d * f
    }
}

/// Observation `[T_1..T_M, Q_p, T_G, T_E, Q_ghi]` plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EnvState<T> {
    pub zone_temps: Vec<T>,
    pub occupant_heat: T,
    pub ground_temp: T,
    pub outdoor_temp: T,
    pub ghi: T,
    pub step_index: usize,
}

impl<T: Real> EnvState<T> {
    pub fn zone_count(&self) -> usize {
        self.zone_temps.len()
    }

    pub fn to_vector(&self) -> Vec<T> {
        let mut v = self.zone_temps.clone();
        v.extend([self.occupant_heat, self.ground_temp, self.outdoor_temp, self.ghi]);
        v
    }

    pub fn from_vector(v: &[T], step_index: usize) -> Result<Self> {
        if v.len() < 5 {
            return Err(contract(format!("state vector too short ({} < 5)", v.len())));
        }
        let m = v.len() - 4;
        Ok(Self {
            zone_temps: v[..m].to_vec(),
            occupant_heat: v[m],
            ground_temp: v[m + 1],
            outdoor_temp: v[m + 2],
            ghi: v[m + 3],
            step_index,
        })
    }

    pub fn mean_temp(&self) -> T {
        mean(&self.zone_temps)
    }
}

pub(crate) fn mean<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, b| a + *b) / T::from_usize_lossy(v.len().max(1))
}

/// Normalized HVAC commands, one per zone with HVAC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EnvAction<T> {
    pub values: Vec<T>,
}

impl<T: Real> EnvAction<T> {
    pub fn zeros(n: usize) -> Self {
        Self { values: vec![T::zero(); n] }
    }

    pub fn norm(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt()
    }
}

impl<T> From<Vec<T>> for EnvAction<T> {
    fn from(values: Vec<T>) -> Self {
        Self { values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RewardConfig<T> {
    /// Comfort weight in `[0, 1]`; `1 - beta` weighs the action norm.
    pub beta: T,
    /// Setpoints of the HVAC zones, in zone order.
    pub target_temps: Vec<T>,
}

impl<T: Real> RewardConfig<T> {
    pub fn validate(&self, hvac_zones: usize) -> Result<()> {
        if !(self.beta >= T::zero() && self.beta <= T::one()) {
            return Err(config(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if self.target_temps.len() != hvac_zones {
            return Err(config(format!(
                "{} target temperatures for {hvac_zones} HVAC zones",
                self.target_temps.len()
            )));
        }
        Ok(())
    }
}

/// One row of an episode log. `state` is the observation the action was chosen from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StepRecord<T> {
    pub state: EnvState<T>,
    pub action: EnvAction<T>,
    pub reward: T,
    /// `ΔT · Σ|Q^z_i|`, J.
    pub energy: T,
    /// Mean |T_i − T^obj_i| over HVAC zones after the step, °C.
    pub comfort_deviation: T,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub scenario: String,
    pub seed: u64,
    pub controller: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Trajectory<T> {
    pub meta: TrajectoryMeta,
    pub dt: T,
    pub records: Vec<StepRecord<T>>,
    /// Observation after the last step, if the episode was stepped at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_state: Option<EnvState<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_energy(&self) -> T {
        self.records.iter().fold(T::zero(), |a, r| a + r.energy)
    }

    pub fn total_reward(&self) -> T {
        self.records.iter().fold(T::zero(), |a, r| a + r.reward)
    }

    /// Zone temperatures at steps `0..=len`, including the final state when present.
    pub fn zone_temp_series(&self) -> Vec<Vec<T>> {
        let mut out: Vec<Vec<T>> = self.records.iter().map(|r| r.state.zone_temps.clone()).collect();
        if let Some(f) = &self.final_state {
            out.push(f.zone_temps.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zone(id: usize) -> ZoneSpec<f64> {
        ZoneSpec {
            id,
            name: String::new(),
            volume: 100.0,
            window_area: 2.0,
            is_ground_floor: true,
            is_perimeter: id == 2,
            occupancy: 0.0,
            hvac_present: true,
            hvac_efficiency: 1.0,
        }
    }

    #[test]
    fn month_lookup() {
        assert_eq!(month_of_day(0), 0);
        assert_eq!(month_of_day(30), 0);
        assert_eq!(month_of_day(31), 1);
        assert_eq!(month_of_day(364), 11);
        assert_eq!(first_day_of_month(3), 59);
    }

    #[test]
    fn rejects_exterior_wall_on_interior_zone() {
        let t = BuildingTopology {
            zones: vec![zone(1), zone(2)],
            adjacency: vec![Adjacency { zones: [1, 2], area: 10.0, u_factor: Some(1.0) }],
            exterior_walls: vec![SurfaceContact { zone: 1, area: 5.0, u_factor: None }],
            ground_contact: vec![],
        };
        let err = t.validate().unwrap_err().to_string();
        assert!(err.contains("zone 1"), "{err}");
    }

    #[test]
    fn rejects_unknown_zone() {
        let t = BuildingTopology {
            zones: vec![zone(1), zone(2)],
            adjacency: vec![Adjacency { zones: [1, 99], area: 10.0, u_factor: None }],
            exterior_walls: vec![],
            ground_contact: vec![],
        };
        assert!(t.validate().unwrap_err().to_string().contains("99"));
    }

    #[test]
    fn weather_rejects_uneven_spacing() {
        let mut w = WeatherSeries::constant(4, 3600.0, 20.0, 0.0, 15.0);
        w.timestamps[2] = 7000.0;
        let err = w.validate(3600.0).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");
    }

    #[test]
    fn ground_month_follows_start_day() {
        let mut w = WeatherSeries::constant(24 * 40, 3600.0, 20.0, 0.0, 0.0);
        w.ground_temp = std::array::from_fn(|i| i as f64);
        w.start_day_of_year = 25;
        assert_eq!(w.ground_at(0), 0.0);
        assert_eq!(w.ground_at(24 * 6), 1.0);
    }

    #[test]
    fn discrete_model_json_uses_row_major_arrays() {
        let m = DiscreteModel {
            A_d: DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]),
            B_d: DMatrix::from_row_slice(2, 1, &[5.0, 6.0]),
            D_d: DVector::from_vec(vec![7.0, 8.0]),
            dt: 3600.0,
            occupant_coeffs: OccupantHeatCoefficients::zero(),
        };
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains(r#""A_d":[[1.0,2.0],[3.0,4.0]]"#), "{s}");
        let back: DiscreteModel<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn state_vector_round_trip(temps in prop::collection::vec(-50.0f64..60.0, 1..8),
                                   qp in -200.0f64..200.0, tg in -10.0f64..30.0,
                                   te in -30.0f64..50.0, ghi in 0.0f64..1200.0, k in 0usize..1000) {
            let s = EnvState { zone_temps: temps, occupant_heat: qp, ground_temp: tg,
                               outdoor_temp: te, ghi, step_index: k };
            let v = s.to_vector();
            prop_assert_eq!(v.len(), s.zone_count() + 4);
            prop_assert_eq!(EnvState::from_vector(&v, k).unwrap(), s);
        }

        #[test]
        fn types_survive_json(temps in prop::collection::vec(-50.0f64..60.0, 1..6), beta in 0.0f64..1.0) {
            let s = EnvState { zone_temps: temps.clone(), occupant_heat: 1.5, ground_temp: 2.0,
                               outdoor_temp: 3.0, ghi: 4.0, step_index: 7 };
            let back: EnvState<f64> = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            prop_assert_eq!(back, s);
            let r = RewardConfig { beta, target_temps: temps };
            let back: RewardConfig<f64> = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
