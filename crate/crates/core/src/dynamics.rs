//! Continuous-time RC dynamics: lumped parameters, occupant heat, and the
//! `ẋ = A x + B u + D f` assembly.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{config, contract, Result};
use crate::model::{
    input_ghi, input_width, BuildingTopology, ContinuousModel, OccupantHeatCoefficients,
    PairResistance, SolarParameters, ThermalParameters, INPUT_GROUND, INPUT_HVAC0, INPUT_OUTDOOR,
};
use crate::scalar::Real;

/// Fallback U-factors, W/(m²·K), for surfaces that do not carry their own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct UFactors<T> {
    #[serde(default)]
    pub interior: Option<T>,
    #[serde(default)]
    pub exterior: Option<T>,
    #[serde(default)]
    pub ground: Option<T>,
}

impl<T> Default for UFactors<T> {
    fn default() -> Self {
        Self { interior: None, exterior: None, ground: None }
    }
}

/// Lumps the topology into capacitances and resistances.
///
/// Each surface contributes a conductance `U·A`; surfaces joining the same
/// pair of nodes are in parallel, so `R = 1 / Σ U·A`. Capacitance comes from
/// the air volume alone.
pub fn derive_thermal_parameters<T: Real>(
    topology: &BuildingTopology<T>,
    u_factors: &UFactors<T>,
    constants: &PhysicalConstants<T>,
) -> Result<ThermalParameters<T>> {
    topology.validate()?;
    let m = topology.zone_count();
    let idx = topology.index_map();

    let mut pairs: Vec<([usize; 2], T)> = Vec::new();
    for adj in &topology.adjacency {
        let [a, b] = adj.zones;
        let u = adj.u_factor.or(u_factors.interior).ok_or_else(|| {
            config(format!("missing U-factor for adjacency between zones {a} and {b}"))
        })?;
        let key = if a <= b { [a, b] } else { [b, a] };
        let g = u * adj.area;
        match pairs.iter_mut().find(|(k, _)| *k == key) {
            Some((_, acc)) => *acc += g,
            None => pairs.push((key, g)),
        }
    }

    let mut ground = vec![T::zero(); m];
    for s in &topology.ground_contact {
        let u = s.u_factor.or(u_factors.ground).ok_or_else(|| {
            config(format!("missing U-factor for ground contact of zone {}", s.zone))
        })?;
        ground[idx[&s.zone]] += u * s.area;
    }
    let mut exterior = vec![T::zero(); m];
    for s in &topology.exterior_walls {
        let u = s.u_factor.or(u_factors.exterior).ok_or_else(|| {
            config(format!("missing U-factor for exterior wall of zone {}", s.zone))
        })?;
        exterior[idx[&s.zone]] += u * s.area;
    }

    let invert = |g: T| (g > T::zero()).then(|| T::one() / g);
    let rho_c = constants.air_volumetric_capacity();
    let params = ThermalParameters {
        capacitance: topology.zones.iter().map(|z| rho_c * z.volume).collect(),
        resistance: pairs
            .into_iter()
            .map(|(zones, g)| PairResistance { zones, r: T::one() / g })
            .collect(),
        resistance_ground: ground.into_iter().map(invert).collect(),
        resistance_exterior: exterior.into_iter().map(invert).collect(),
    };
    params.validate(topology)?;
    Ok(params)
}

/// Sensible heat released per occupant, W/person:
///
/// `c₁ + c₂m + c₃m² + c₄T̄ − c₅T̄m + c₆T̄m² − c₇T̄² + c₈T̄²m − c₉T̄²m²`
pub fn sensible_heat_per_person<T: Real>(
    coeffs: &OccupantHeatCoefficients<T>,
    mean_temp: T,
    metabolic: T,
) -> T {
    coeffs.c4() * mean_temp + nonlinear_residual(coeffs, mean_temp, metabolic)
}

/// The occupant heat polynomial without its `c₄T̄` term, which lives in `A`.
pub fn nonlinear_residual<T: Real>(coeffs: &OccupantHeatCoefficients<T>, mean_temp: T, metabolic: T) -> T {
    let c = &coeffs.c;
    let (t, r) = (mean_temp, metabolic);
    let (t2, r2) = (t * t, r * r);
    c[0] + c[1] * r + c[2] * r2 - c[4] * t * r + c[5] * t * r2 - c[6] * t2 + c[7] * t2 * r
        - c[8] * t2 * r2
}

/// Builds `A`, `B`, `D` for the building.
///
/// Row `i` of `A` carries `c₄ nᵢ / (M Cᵢ)` in every column, including the
/// diagonal and zones that are not neighbours: the occupant heat depends on
/// the mean temperature of all zones, so each zone temperature feeds every
/// occupied zone's gain through `T̄`.
///
/// The ground conductance is attenuated by `ground_weight` both in the
/// diagonal of `A` and in the `T_G` column of `B`, so a building at the
/// ground and outdoor temperature stays in equilibrium.
pub fn assemble_continuous<T: Real>(
    topology: &BuildingTopology<T>,
    params: &ThermalParameters<T>,
    solar: &SolarParameters<T>,
    coeffs: &OccupantHeatCoefficients<T>,
) -> Result<ContinuousModel<T>> {
    topology.validate()?;
    params.validate(topology)?;
    solar.validate()?;

    let m = topology.zone_count();
    let idx = topology.index_map();
    let mf = T::from_usize_lossy(m);

    let mut coupling = DMatrix::<T>::zeros(m, m);
    for p in &params.resistance {
        let (i, j) = (idx[&p.zones[0]], idx[&p.zones[1]]);
        let g = T::one() / p.r;
        coupling[(i, j)] += g;
        coupling[(j, i)] += g;
    }

    let mut a = DMatrix::<T>::zeros(m, m);
    let mut b = DMatrix::<T>::zeros(m, input_width(m));
    let mut d = DVector::<T>::zeros(m);
    for (i, zone) in topology.zones.iter().enumerate() {
        let cap = params.capacitance[i];
        let g_ground = params.resistance_ground[i].map_or(T::zero(), |r| solar.ground_weight / r);
        let g_ext = params.resistance_exterior[i].map_or(T::zero(), |r| T::one() / r);
        let g_zones = coupling.row(i).sum();
        let has_link = g_zones > T::zero()
            || params.resistance_ground[i].is_some()
            || params.resistance_exterior[i].is_some();
        if !has_link {
            return Err(config(format!("zone {} is isolated: no surfaces connect it", zone.id)));
        }

        let occ = coeffs.c4() * zone.occupancy / (mf * cap);
        for j in 0..m {
            a[(i, j)] = coupling[(i, j)] / cap + occ;
        }
        a[(i, i)] = -(g_zones + g_ground + g_ext) / cap + occ;

        b[(i, INPUT_GROUND)] = g_ground / cap;
        b[(i, INPUT_OUTDOOR)] = g_ext / cap;
        if zone.hvac_present {
            b[(i, INPUT_HVAC0 + i)] = zone.hvac_efficiency / cap;
        }
        b[(i, input_ghi(m))] = solar.shgc_weight * solar.shgc * zone.window_area / cap;
        d[i] = zone.occupancy / cap;
    }

    Ok(ContinuousModel { A: a, B: b, D: d, occupant_coeffs: *coeffs, zone_count: m })
}

/// `ẋ` at state `x` with input `u` and metabolic rate `r`.
pub fn derivative<T: Real>(model: &ContinuousModel<T>, x: &DVector<T>, u: &DVector<T>, r: T) -> Result<DVector<T>> {
    if x.len() != model.zone_count || u.len() != input_width(model.zone_count) {
        return Err(contract("state or input width does not match the model"));
    }
    let tbar = x.mean();
    let f = nonlinear_residual(&model.occupant_coeffs, tbar, r);
    Ok(&model.A * x + &model.B * u + &model.D * f)
}
