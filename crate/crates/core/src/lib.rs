//! Building thermal simulation on lumped RC networks.
//!
//! A building description ([`model::BuildingTopology`]) is lumped into
//! capacitances and resistances, assembled into `ẋ = A x + B u + D f(x, r)`,
//! discretized with a zero-order hold, and exposed as an episodic
//! [`env::Environment`]. Around that sit baseline controllers, linear system
//! identification, scenario files, a benchmark harness and an NDJSON server.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod benchmark;
pub mod constants;
pub mod control;
pub mod discretize;
pub mod dynamics;
pub mod env;
pub mod error;
pub mod model;
pub mod scalar;
pub mod scenario;
pub mod serve;
pub mod sysid;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ContinuousModelF64 = model::ContinuousModel<f64>;
pub type DiscreteModelF64 = model::DiscreteModel<f64>;
pub type EnvConfigF64 = env::EnvConfig<f64>;
pub type EnvironmentF64 = env::Environment<f64>;
pub type ScenarioF64 = scenario::Scenario<f64>;
pub type TrajectoryF64 = model::Trajectory<f64>;

pub type ContinuousModelF32 = model::ContinuousModel<f32>;
pub type DiscreteModelF32 = model::DiscreteModel<f32>;
pub type EnvConfigF32 = env::EnvConfig<f32>;
pub type EnvironmentF32 = env::Environment<f32>;
pub type ScenarioF32 = scenario::Scenario<f32>;
pub type TrajectoryF32 = model::Trajectory<f32>;
