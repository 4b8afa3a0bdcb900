//! `thermoenv` command-line entry point.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thermoenv::benchmark::{run_benchmark, BenchmarkConfig};
use thermoenv::control::{ControllerSpec, DEFAULT_DEADBAND};
use thermoenv::env::{read_trajectory_csv, run_episode, write_trajectory_csv, Environment};
use thermoenv::model::TrajectoryMeta;
use thermoenv::scenario::{resolve_scenario, Scenario, SCENARIO_DIR_ENV};
use thermoenv::serve::Session;
use thermoenv::sysid::{collect, evaluate, fit, split_chronological, EvalMetrics, LinearModel, ModelMeta};

#[derive(Parser)]
#[command(name = "thermoenv", version, about = "RC-network building thermal simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ControllerKind {
    RuleBased,
    Mpc,
    Random,
}

#[derive(clap::Args)]
struct ScenarioArgs {
    /// Scenario file or bundled name; also searched in $THERMOENV_SCENARIO_DIR.
    #[arg(long)]
    scenario: String,
    /// Comfort weight β of the reward (and of the MPC objective).
    #[arg(long)]
    beta: Option<f64>,
    /// Episode length in steps.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and write its trajectory as CSV.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "rule-based")]
        controller: ControllerKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// MPC horizon in steps.
        #[arg(long, default_value_t = 12)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_DEADBAND)]
        deadband: f64,
    },
    /// Fit a linear next-state model to a trajectory CSV.
    Fit {
        trajectory: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Scenario that produced the trajectory (for the HVAC map and power ratings).
        #[arg(long)]
        scenario: Option<String>,
        /// Power rating per HVAC zone when no scenario is given, W.
        #[arg(long, default_value_t = 8000.0)]
        max_power: f64,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
        /// Leading share of the steps used for fitting; the rest is held out.
        #[arg(long, default_value_t = 0.8)]
        train_fraction: f64,
        /// Open-loop rollout length for the held-out evaluation.
        #[arg(long, default_value_t = 24)]
        horizon: usize,
    },
    /// Run a scenario × controller × seed matrix.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Serve one environment over newline-delimited JSON.
    Serve {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// `stdio` or `tcp:<addr>` (one connection).
        #[arg(long, default_value = "stdio")]
        transport: String,
    },
}

fn load(args: &ScenarioArgs) -> Result<Scenario<f64>> {
    let mut s = resolve_scenario::<f64>(&args.scenario).with_context(|| {
        format!("loading scenario {:?} (search path: file, ${SCENARIO_DIR_ENV}, bundled)", args.scenario)
    })?;
    if let Some(b) = args.beta {
        s.env.reward.beta = b;
    }
    if let Some(n) = args.steps {
        s.env.episode_length = n;
    }
    s.env.validate()?;
    Ok(s)
}

fn simulate(
    args: &ScenarioArgs,
    kind: ControllerKind,
    out: &PathBuf,
    seed: u64,
    horizon: usize,
    deadband: f64,
) -> Result<()> {
    let s = load(args)?;
    let spec = match kind {
        ControllerKind::RuleBased => ControllerSpec::RuleBased { deadband },
        ControllerKind::Mpc => ControllerSpec::Mpc { beta: s.env.reward.beta, horizon },
        ControllerKind::Random => ControllerSpec::Random,
    };
    let mut controller = spec.build::<f64>();
    let mut env = Environment::new(s.env.clone())?;
    let meta = TrajectoryMeta { scenario: s.name.clone(), seed, controller: spec.label() };
    let traj = run_episode(&mut env, seed, meta, |state, env| controller.act(state, env))?;
    let f = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_trajectory_csv(&traj, BufWriter::new(f))?;
    let steps = traj.len();
    let mean_dev = traj.records.iter().map(|r| r.comfort_deviation).sum::<f64>() / steps as f64;
    println!(
        "scenario={} controller={} seed={seed} steps={steps} total_energy_J={:?} mean_deviation_C={:?} total_reward={:?}",
        s.name,
        spec.label(),
        traj.total_energy(),
        mean_dev,
        traj.total_reward()
    );
    Ok(())
}

#[derive(Serialize)]
struct FittedModel {
    meta: ModelMeta<f64>,
    model: LinearModel<f64>,
    ridge: f64,
    train_steps: usize,
    holdout: Option<EvalMetrics>,
}

#[allow(clippy::too_many_arguments)]
fn fit_cmd(
    path: &PathBuf,
    out: &PathBuf,
    scenario: Option<&str>,
    max_power: f64,
    ridge: f64,
    train_fraction: f64,
    horizon: usize,
) -> Result<()> {
    if !(0.0..=1.0).contains(&train_fraction) {
        bail!("--train-fraction must lie in [0, 1]");
    }
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let traj = read_trajectory_csv::<f64, _>(BufReader::new(f))?;
    let zones = traj.records.first().map_or(0, |r| r.state.zone_count());
    let meta = match scenario {
        Some(name) => {
            let s = resolve_scenario::<f64>(name)?;
            ModelMeta { ac_map: s.env.ac_map, max_power: s.env.max_power, activity_schedule: None }
        }
        None => {
            let hvac = traj.records.first().map_or(0, |r| r.action.values.len());
            if hvac != zones {
                bail!("{hvac} actions for {zones} zones: pass --scenario to give the HVAC map");
            }
            ModelMeta { ac_map: vec![true; zones], max_power: vec![max_power; hvac], activity_schedule: None }
        }
    };
    let (train, test) = split_chronological(&traj, train_fraction);
    let model = fit(&collect(&train, &meta)?, ridge)?;
    let holdout = if test.len() >= 2 {
        Some(evaluate(&model, &test, &meta, horizon.min(test.len() - 1))?)
    } else {
        None
    };
    let doc = FittedModel { meta, model, ridge, train_steps: train.len(), holdout };
    std::fs::write(out, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("writing {}", out.display()))?;
    match holdout {
        Some(m) => println!(
            "train_steps={} holdout_steps={} one_step_rmse_C={:?} rollout_rmse_C={:?} rollout_horizon={}",
            train.len(),
            test.len(),
            m.one_step_rmse,
            m.rollout_rmse,
            m.horizon
        ),
        None => println!("train_steps={} holdout_steps={} (too few held-out steps to evaluate)", train.len(), test.len()),
    }
    Ok(())
}

fn benchmark(config: &Path, out_dir: &Path) -> Result<()> {
    let cfg = BenchmarkConfig::load(config)?;
    std::fs::create_dir_all(out_dir)?;
    let report = run_benchmark(&cfg, Some(out_dir));
    report.write_to(out_dir)?;
    print!("{}", report.to_markdown());
    if report.failures() > 0 {
        eprintln!("{} of {} cells failed; see benchmark.csv", report.failures(), report.cells.len());
    }
    Ok(())
}

fn serve(args: &ScenarioArgs, transport: &str) -> Result<()> {
    let s = load(args)?;
    let mut session = Session::new(Environment::new(s.env)?, s.name);
    match transport.split_once(':') {
        None if transport == "stdio" => {
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            session.run(stdin.lock(), stdout.lock())?;
        }
        Some(("tcp", addr)) => {
            let listener = TcpListener::bind(addr).with_context(|| format!("binding {addr}"))?;
            eprintln!("listening on {}", listener.local_addr()?);
            let (stream, _) = listener.accept()?;
            let reader = BufReader::new(stream.try_clone()?);
            session.run(reader, BufWriter::new(stream))?;
        }
        _ => bail!("unknown transport {transport:?}; use stdio or tcp:<addr>"),
    }
    std::io::stdout().flush()?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate { scenario, controller, out, seed, horizon, deadband } => {
            simulate(scenario, *controller, out, *seed, *horizon, *deadband)
        }
        Command::Fit { trajectory, out, scenario, max_power, ridge, train_fraction, horizon } => fit_cmd(
            trajectory,
            out,
            scenario.as_deref(),
            *max_power,
            *ridge,
            *train_fraction,
            *horizon,
        ),
        Command::Benchmark { config, out_dir } => benchmark(config, out_dir),
        Command::Serve { scenario, transport } => serve(scenario, transport),
    }
}
