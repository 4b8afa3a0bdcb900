//! Physical constants shipped with the crate.
//!
//! The occupant coefficients are the sensible-heat fit from the EnergyPlus
//! Engineering Reference (people gains). They are defaults, not truth: any
//! scenario may override them.

use serde::{Deserialize, Serialize};

use crate::model::OccupantHeatCoefficients;
use crate::scalar::Real;

const BUNDLED: &str = include_str!("../data/constants.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PhysicalConstants<T> {
    /// kg/m³
    pub air_density: T,
    /// J/(kg·K)
    pub air_heat_capacity: T,
    pub occupant: OccupantHeatCoefficients<T>,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED).expect("bundled constants parse")
    }

    /// Volumetric heat capacity of air, J/(m³·K).
    pub fn air_volumetric_capacity(&self) -> T {
        self.air_density * self.air_heat_capacity
    }
}
