//! Controller-versus-scenario matrices with per-cell comfort, energy and
//! control-time metrics.
//!
//! Comfort is the mean absolute deviation from target over HVAC zones,
//! counting only temperatures sampled inside the scenario's operating hours.
//! Energy is `Σ |P| Δt`, reported per simulated day.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::ControllerSpec;
use crate::env::{run_episode, write_trajectory_csv, Environment};
use crate::error::{config, Result};
use crate::model::{Trajectory, TrajectoryMeta};
use crate::scenario::{resolve_scenario, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    /// Scenario references: file paths or bundled names.
    pub scenarios: Vec<String>,
    pub controllers: Vec<ControllerSpec>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Overrides each scenario's episode length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episode_length: Option<usize>,
    #[serde(default = "yes")]
    pub parallel: bool,
    /// Also write every trajectory as CSV next to the report.
    #[serde(default)]
    pub save_trajectories: bool,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn yes() -> bool {
    true
}

impl BenchmarkConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read benchmark config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config(format!("benchmark config: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    /// °C
    pub avg_deviation: f64,
    /// J per simulated day
    pub avg_daily_energy: f64,
    /// s spent inside the controller
    pub control_time: f64,
    pub total_reward: f64,
    pub steps: usize,
    /// Temperature samples that fell inside operating hours.
    pub operating_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub scenario: String,
    pub controller: String,
    pub seed: u64,
    pub metrics: Option<CellMetrics>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub cells: Vec<CellResult>,
}

/// Metrics that depend only on the trajectory (everything but control time).
///
/// Temperatures are sampled from the per-step records, i.e. at `k Δt` for
/// `k = 0..n`, so the metric can be recomputed from an exported CSV.
pub fn trajectory_metrics(traj: &Trajectory<f64>, scenario: &Scenario<f64>) -> CellMetrics {
    let cfg = &scenario.env;
    let n = traj.records.len();
    let mut dev_sum = 0.0;
    let mut samples = 0;
    for (k, r) in traj.records.iter().enumerate() {
        if !scenario.is_operating(k) {
            continue;
        }
        let hvac = r.state.zone_temps.iter().zip(&cfg.ac_map).filter(|(_, h)| **h).map(|(t, _)| *t);
        for (t, target) in hvac.zip(&cfg.reward.target_temps) {
            dev_sum += (t - target).abs();
        }
        samples += 1;
    }
    let zones = cfg.reward.target_temps.len().max(1);
    let days = n as f64 * traj.dt / 86_400.0;
    CellMetrics {
        avg_deviation: if samples == 0 { 0.0 } else { dev_sum / (samples * zones) as f64 },
        avg_daily_energy: if n == 0 { 0.0 } else { traj.total_energy() / days },
        control_time: 0.0,
        total_reward: traj.total_reward(),
        steps: n,
        operating_samples: samples,
    }
}

/// Runs one episode of `spec` on `scenario` and measures it.
pub fn run_cell(scenario: &Scenario<f64>, spec: &ControllerSpec, seed: u64) -> Result<(Trajectory<f64>, CellMetrics)> {
    let mut env = Environment::new(scenario.env.clone())?;
    let mut controller = spec.build::<f64>();
    let meta = TrajectoryMeta { scenario: scenario.name.clone(), seed, controller: spec.label() };
    let mut control_time = 0.0;
    let traj = run_episode(&mut env, seed, meta, |state, env| {
        let start = Instant::now();
        let a = controller.act(state, env);
        control_time += start.elapsed().as_secs_f64();
        a
    })?;
    let mut m = trajectory_metrics(&traj, scenario);
    m.control_time = control_time;
    Ok((traj, m))
}

fn trajectory_file(cell: &CellResult) -> String {
    let clean = |s: &str| s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect::<String>();
    format!("{}__{}__seed{}.csv", clean(&cell.scenario), clean(&cell.controller), cell.seed)
}

/// Runs every scenario × controller × seed cell. Failures are recorded per cell.
///
/// With `out_dir` and `save_trajectories`, each trajectory is written there as CSV.
pub fn run_benchmark(cfg: &BenchmarkConfig, out_dir: Option<&Path>) -> BenchmarkReport {
    let scenarios: Vec<(String, std::result::Result<Scenario<f64>, String>)> = cfg
        .scenarios
        .iter()
        .map(|r| {
            let s = resolve_scenario::<f64>(r).and_then(|mut s| {
                if let Some(len) = cfg.episode_length {
                    s.env.episode_length = len;
                    s.env.validate()?;
                }
                Ok(s)
            });
            (r.clone(), s.map_err(|e| e.to_string()))
        })
        .collect();

    let jobs: Vec<(usize, &ControllerSpec, u64)> = (0..scenarios.len())
        .flat_map(|s| cfg.controllers.iter().flat_map(move |c| cfg.seeds.iter().map(move |&seed| (s, c, seed))))
        .collect();

    let run = |&(s, spec, seed): &(usize, &ControllerSpec, u64)| -> CellResult {
        let (reference, scenario) = &scenarios[s];
        let mut cell = CellResult {
            scenario: scenario.as_ref().map_or_else(|_| reference.clone(), |sc| sc.name.clone()),
            controller: spec.label(),
            seed,
            metrics: None,
            error: None,
        };
        let outcome = match scenario {
            Err(e) => Err(e.clone()),
            Ok(sc) => run_cell(sc, spec, seed).map_err(|e| e.to_string()).and_then(|(traj, m)| {
                if let (true, Some(dir)) = (cfg.save_trajectories, out_dir) {
                    let path = dir.join("trajectories").join(trajectory_file(&cell));
                    std::fs::create_dir_all(dir.join("trajectories"))
                        .and_then(|_| std::fs::File::create(&path))
                        .map_err(|e| e.to_string())
                        .and_then(|f| write_trajectory_csv(&traj, std::io::BufWriter::new(f)).map_err(|e| e.to_string()))?;
                }
                Ok(m)
            }),
        };
        match outcome {
            Ok(m) => cell.metrics = Some(m),
            Err(e) => cell.error = Some(e),
        }
        cell
    };

    let cells = if cfg.parallel { jobs.par_iter().map(run).collect() } else { jobs.iter().map(run).collect() };
    BenchmarkReport { cells }
}

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "controller",
    "seed",
    "avg_deviation_c",
    "avg_daily_energy_j",
    "control_time_s",
    "total_reward",
    "steps",
    "operating_samples",
    "error",
];

impl BenchmarkReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for c in &self.cells {
            let num = |f: fn(&CellMetrics) -> String| c.metrics.as_ref().map(f).unwrap_or_default();
            w.write_record([
                c.scenario.clone(),
                c.controller.clone(),
                c.seed.to_string(),
                num(|m| format!("{:?}", m.avg_deviation)),
                num(|m| format!("{:?}", m.avg_daily_energy)),
                num(|m| format!("{:?}", m.control_time)),
                num(|m| format!("{:?}", m.total_reward)),
                num(|m| m.steps.to_string()),
                num(|m| m.operating_samples.to_string()),
                c.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from(
            "| Scenario | Controller | Seed | Avg. temperature deviation (°C) | Avg. daily energy (J) | Control time (s) |\n\
             |---|---|---:|---:|---:|---:|\n",
        );
        for c in &self.cells {
            match (&c.metrics, &c.error) {
                (Some(m), _) => s += &format!(
                    "| {} | {} | {} | {:.3e} | {:.3e} | {:.3} |\n",
                    c.scenario, c.controller, c.seed, m.avg_deviation, m.avg_daily_energy, m.control_time
                ),
                (None, e) => s += &format!(
                    "| {} | {} | {} | failed: {} | | |\n",
                    c.scenario,
                    c.controller,
                    c.seed,
                    e.as_deref().unwrap_or("unknown error").replace('|', "\\|")
                ),
            }
        }
        s
    }

    /// Writes `benchmark.csv` and `benchmark.md` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_csv(std::fs::File::create(dir.join("benchmark.csv"))?)?;
        std::fs::write(dir.join("benchmark.md"), self.to_markdown())?;
        Ok(())
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }

    pub fn find(&self, scenario: &str, controller: &str, seed: u64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.scenario == scenario && c.controller == controller && c.seed == seed)
    }
}
