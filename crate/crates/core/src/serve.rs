//! Newline-delimited JSON protocol around one [`Environment`].
//!
//! One request per line, one response per line:
//!
//! ```text
//! {"cmd":"spec"}                 -> {"zones":M,"action_dim":n,"obs_dim":M+4,...}
//! {"cmd":"reset","seed":0}       -> {"state":[...],"k":0}
//! {"cmd":"step","action":[...]}  -> {"state":[...],"k":1,"reward":r,"done":false,"info":{...}}
//! {"cmd":"close"}                -> {"ok":true}, then the session ends
//! ```
//!
//! A bad request yields `{"error":"..."}` and the session continues. Floats
//! are written in shortest round-trip form, so decoding reproduces the
//! in-process values exactly.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::env::Environment;
use crate::error::Result;
use crate::model::EnvAction;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "lowercase", deny_unknown_fields)]
#[serde(bound = "T: Real")]
pub enum Request<T> {
    Spec,
    Reset {
        #[serde(default)]
        seed: u64,
    },
    Step {
        action: Vec<T>,
    },
    Close,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpecResponse<T> {
    pub scenario: String,
    pub zones: usize,
    pub action_dim: usize,
    pub obs_dim: usize,
    pub obs_low: Vec<T>,
    pub obs_high: Vec<T>,
    pub action_low: T,
    pub action_high: T,
    pub episode_length: usize,
    pub dt: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ResetResponse<T> {
    pub state: Vec<T>,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StepInfoWire<T> {
    pub energy: T,
    pub comfort_deviation: T,
    pub action_clipped: bool,
    pub observation_clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StepResponse<T> {
    pub state: Vec<T>,
    pub k: usize,
    pub reward: T,
    pub done: bool,
    pub info: StepInfoWire<T>,
}

/// Holds the environment for one client.
pub struct Session<T: Real> {
    env: Environment<T>,
    name: String,
}

impl<T: Real> Session<T> {
    pub fn new(env: Environment<T>, name: impl Into<String>) -> Self {
        Self { env, name: name.into() }
    }

    pub fn environment(&self) -> &Environment<T> {
        &self.env
    }

    /// Answers one request line. Returns the response and whether to keep going.
    pub fn handle_line(&mut self, line: &str) -> (Value, bool) {
        let req: Request<T> = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => return (json!({ "error": format!("bad request: {e}") }), true),
        };
        match self.handle(req) {
            Ok(Some(v)) => (v, true),
            Ok(None) => (json!({ "ok": true }), false),
            Err(e) => (json!({ "error": e.to_string() }), true),
        }
    }

    fn handle(&mut self, req: Request<T>) -> Result<Option<Value>> {
        let to_value = |v: serde_json::Result<Value>| v.map_err(crate::Error::from);
        match req {
            Request::Spec => {
                let cfg = self.env.config();
                let spec = SpecResponse {
                    scenario: self.name.clone(),
                    zones: cfg.zone_count(),
                    action_dim: cfg.hvac_count(),
                    obs_dim: cfg.zone_count() + 4,
                    obs_low: cfg.state_bounds.iter().map(|b| b[0]).collect(),
                    obs_high: cfg.state_bounds.iter().map(|b| b[1]).collect(),
                    action_low: -T::one(),
                    action_high: T::one(),
                    episode_length: cfg.episode_length,
                    dt: cfg.dt(),
                };
                Ok(Some(to_value(serde_json::to_value(spec))?))
            }
            Request::Reset { seed } => {
                let s = self.env.reset(seed)?;
                let r = ResetResponse { state: s.to_vector(), k: s.step_index };
                Ok(Some(to_value(serde_json::to_value(r))?))
            }
            Request::Step { action } => {
                let out = self.env.step(&EnvAction { values: action })?;
                let r = StepResponse {
                    state: out.state.to_vector(),
                    k: out.state.step_index,
                    reward: out.reward,
                    done: out.done,
                    info: StepInfoWire {
                        energy: out.info.energy,
                        comfort_deviation: out.info.comfort_deviation,
                        action_clipped: out.info.action_clipped,
                        observation_clamped: out.info.observation_clamped,
                    },
                };
                Ok(Some(to_value(serde_json::to_value(r))?))
            }
            Request::Close => Ok(None),
        }
    }

    /// Serves until `close` or end of input. Blank lines are ignored.
    pub fn run<R: BufRead, W: Write>(&mut self, input: R, mut output: W) -> Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (resp, more) = self.handle_line(&line);
            serde_json::to_writer(&mut output, &resp)?;
            output.write_all(b"\n")?;
            output.flush()?;
            if !more {
                break;
            }
        }
        Ok(())
    }
}
