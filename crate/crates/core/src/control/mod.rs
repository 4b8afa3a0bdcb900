//! Baseline controllers: deadband rule, receding-horizon MPC, and uniform random.

pub mod mpc;
pub mod random;
pub mod rule;

use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::Result;
use crate::model::{EnvAction, EnvState, RewardConfig};
use crate::scalar::Real;

pub use mpc::{mpc_plan, Forecast, HvacLayout, MpcOptions, MpcPlan};
pub use random::random_policy;
pub use rule::{rule_based, DEFAULT_DEADBAND};

/// Maps an observation to a normalized action.
pub trait Controller<T: Real> {
    fn name(&self) -> String;
    fn act(&mut self, state: &EnvState<T>, env: &Environment<T>) -> Result<EnvAction<T>>;
}

/// Serializable controller choice, e.g. `{"kind": "mpc", "beta": 0.8}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControllerSpec {
    RuleBased {
        #[serde(default = "default_deadband")]
        deadband: f64,
    },
    Mpc {
        beta: f64,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    Random,
}

fn default_deadband() -> f64 {
    DEFAULT_DEADBAND
}

fn default_horizon() -> usize {
    mpc::DEFAULT_HORIZON
}

impl ControllerSpec {
    /// Short label used in reports, e.g. `mpc(beta=0.8)`.
    pub fn label(&self) -> String {
        match self {
            Self::RuleBased { .. } => "rule-based".into(),
            Self::Mpc { beta, .. } => format!("mpc(beta={beta})"),
            Self::Random => "random".into(),
        }
    }

    pub fn build<T: Real>(&self) -> Box<dyn Controller<T> + Send> {
        match *self {
            Self::RuleBased { deadband } => Box::new(RuleBased { deadband: T::lit(deadband) }),
            Self::Mpc { beta, horizon } => Box::new(Mpc {
                beta: T::lit(beta),
                options: MpcOptions { horizon, ..MpcOptions::default() },
                label: self.label(),
            }),
            Self::Random => Box::new(RandomController),
        }
    }
}

pub struct RuleBased<T> {
    pub deadband: T,
}

impl<T: Real> Controller<T> for RuleBased<T> {
    fn name(&self) -> String {
        "rule-based".into()
    }

    fn act(&mut self, state: &EnvState<T>, env: &Environment<T>) -> Result<EnvAction<T>> {
        let cfg = env.config();
        Ok(rule_based(state, &cfg.reward.target_temps, &cfg.ac_map, self.deadband))
    }
}

/// MPC with perfect weather foresight. `beta` here is the planner's comfort
/// weight and may differ from the environment's reward weight.
pub struct Mpc<T> {
    pub beta: T,
    pub options: MpcOptions,
    label: String,
}

impl<T: Real> Mpc<T> {
    pub fn new(beta: T, options: MpcOptions) -> Self {
        Self { beta, options, label: format!("mpc(beta={beta})") }
    }
}

impl<T: Real> Controller<T> for Mpc<T> {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn act(&mut self, state: &EnvState<T>, env: &Environment<T>) -> Result<EnvAction<T>> {
        let cfg = env.config();
        let reward = RewardConfig { beta: self.beta, target_temps: cfg.reward.target_temps.clone() };
        let layout = HvacLayout { ac_map: cfg.ac_map.clone(), max_power: cfg.max_power.clone() };
        let forecast = Forecast::from_config(cfg, state.step_index, self.options.horizon);
        Ok(mpc_plan(state, &cfg.discrete_model, &forecast, &reward, &layout, &self.options)?.first())
    }
}

/// Uniform actions; the stream is keyed by the episode seed and step index.
pub struct RandomController;

impl<T: Real> Controller<T> for RandomController {
    fn name(&self) -> String {
        "random".into()
    }

    fn act(&mut self, state: &EnvState<T>, env: &Environment<T>) -> Result<EnvAction<T>> {
        Ok(random_policy(env.seed(), state.step_index, env.config().hvac_count()))
    }
}
