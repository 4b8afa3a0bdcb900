use crate::model::{EnvAction, EnvState};
use crate::scalar::Real;

pub const DEFAULT_DEADBAND: f64 = 0.5;

/// Bang-bang thermostat: full heating below `target − deadband`, full cooling
/// above `target + deadband`, off in between. Pure and stateless.
pub fn rule_based<T: Real>(state: &EnvState<T>, targets: &[T], ac_map: &[bool], deadband: T) -> EnvAction<T> {
    let values = state
        .zone_temps
        .iter()
        .zip(ac_map)
        .filter(|(_, h)| **h)
        .zip(targets)
        .map(|((&t, _), &target)| thermostat(t, target, deadband))
        .collect();
    EnvAction { values }
}

fn thermostat<T: Real>(temp: T, target: T, deadband: T) -> T {
    if temp < target - deadband {
        T::one()
    } else if temp > target + deadband {
        -T::one()
    } else {
        T::zero()
    }
}
