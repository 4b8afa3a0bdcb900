//! Acceptance suite: one PASS/FAIL line per criterion, with the measured value
//! next to its tolerance. Runs without the libtest harness so the lines always
//! show up in `cargo test` output.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermoenv::benchmark::{run_benchmark, BenchmarkConfig};
use thermoenv::constants::PhysicalConstants;
use thermoenv::control::mpc::{mpc_plan, Forecast, HvacLayout, MpcOptions};
use thermoenv::control::{random_policy, ControllerSpec};
use thermoenv::discretize::discretize;
use thermoenv::dynamics::{assemble_continuous, derive_thermal_parameters, nonlinear_residual, sensible_heat_per_person, UFactors};
use thermoenv::env::{reward_l2, run_episode, Environment};
use thermoenv::model::{
    Adjacency, BuildingTopology, DiscreteModel, EnvAction, EnvState, OccupantHeatCoefficients,
    RewardConfig, SolarParameters, SurfaceContact, ThermalParameters, TrajectoryMeta, ZoneSpec,
};
use thermoenv::scenario::{bundled_scenario_json, ScenarioFile};
use thermoenv::serve::{ResetResponse, Session, StepResponse};
use thermoenv::sysid::{collect, evaluate, fit, split_chronological, ModelMeta};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn zone(id: usize, volume: f64, window: f64, ground: bool, perimeter: bool, occupancy: f64) -> ZoneSpec<f64> {
    ZoneSpec {
        id,
        name: String::new(),
        volume,
        window_area: window,
        is_ground_floor: ground,
        is_perimeter: perimeter,
        occupancy,
        hvac_present: true,
        hvac_efficiency: 1.0,
    }
}

/// Random connected building with at least one outdoor or ground contact.
fn random_building(rng: &mut ChaCha8Rng) -> BuildingTopology<f64> {
    let m = rng.random_range(1..=6);
    let mut zones = Vec::new();
    let mut exterior = Vec::new();
    let mut ground = Vec::new();
    for id in 1..=m {
        let perim = id == 1 || rng.random_bool(0.6);
        let on_ground = rng.random_bool(0.5);
        let mut z = zone(id, rng.random_range(40.0..600.0), 0.0, on_ground, perim, 0.0);
        z.hvac_efficiency = rng.random_range(0.5..1.0);
        if perim {
            z.window_area = rng.random_range(0.0..20.0);
            exterior.push(SurfaceContact { zone: id, area: rng.random_range(10.0..120.0), u_factor: Some(rng.random_range(0.2..3.0)) });
        }
        if on_ground {
            ground.push(SurfaceContact { zone: id, area: rng.random_range(10.0..150.0), u_factor: Some(rng.random_range(0.1..1.0)) });
        }
        zones.push(z);
    }
    let mut adjacency = Vec::new();
    for id in 2..=m {
        let other = rng.random_range(1..id);
        adjacency.push(Adjacency { zones: [other, id], area: rng.random_range(5.0..60.0), u_factor: Some(rng.random_range(0.5..3.0)) });
        if id > 2 && rng.random_bool(0.4) {
            let extra = rng.random_range(1..id);
            adjacency.push(Adjacency { zones: [id, extra], area: rng.random_range(5.0..60.0), u_factor: Some(rng.random_range(0.5..3.0)) });
        }
    }
    BuildingTopology { zones, adjacency, exterior_walls: exterior, ground_contact: ground }
}

/// Zone heat balance written per zone from the lumped parameters.
fn heat_balance(
    top: &BuildingTopology<f64>,
    p: &ThermalParameters<f64>,
    solar: &SolarParameters<f64>,
    x: &[f64],
    u: &[f64],
) -> Vec<f64> {
    let m = x.len();
    let (tg, te, ghi) = (u[0], u[1], u[m + 2]);
    (0..m)
        .map(|i| {
            let mut q = 0.0;
            for r in &p.resistance {
                let [a, b] = r.zones;
                let (ia, ib) = (top.index_of(a).unwrap(), top.index_of(b).unwrap());
                if ia == i {
                    q += (x[ib] - x[i]) / r.r;
                } else if ib == i {
                    q += (x[ia] - x[i]) / r.r;
                }
            }
            if let Some(rg) = p.resistance_ground[i] {
                q += solar.ground_weight * (tg - x[i]) / rg;
            }
            if let Some(re) = p.resistance_exterior[i] {
                q += (te - x[i]) / re;
            }
            q += top.zones[i].hvac_efficiency * u[2 + i];
            q += solar.shgc_weight * solar.shgc * top.zones[i].window_area * ghi;
            q / p.capacitance[i]
        })
        .collect()
}

fn rk4(f: impl Fn(&[f64]) -> Vec<f64>, x0: &[f64], h: f64, steps: usize) -> Vec<f64> {
    let mut x = x0.to_vec();
    let axpy = |x: &[f64], k: &[f64], s: f64| x.iter().zip(k).map(|(a, b)| a + s * b).collect::<Vec<_>>();
    for _ in 0..steps {
        let k1 = f(&x);
        let k2 = f(&axpy(&x, &k1, h / 2.0));
        let k3 = f(&axpy(&x, &k2, h / 2.0));
        let k4 = f(&axpy(&x, &k3, h));
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

fn discretization_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let constants = PhysicalConstants::<f64>::bundled();
    let solar = SolarParameters::default();
    let coeffs = OccupantHeatCoefficients::zero();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let top = random_building(&mut rng);
        let m = top.zone_count();
        let p = derive_thermal_parameters(&top, &UFactors::default(), &constants).unwrap();
        let cont = assemble_continuous(&top, &p, &solar, &coeffs).unwrap();
        let disc = discretize(&cont, 3600.0).unwrap();
        let x0: Vec<f64> = (0..m).map(|_| rng.random_range(10.0..30.0)).collect();
        let mut u = vec![rng.random_range(5.0..20.0), rng.random_range(-5.0..40.0)];
        u.extend((0..m).map(|_| rng.random_range(-3000.0..3000.0)));
        u.push(rng.random_range(0.0..900.0));
        let engine = disc.advance(&DVector::from_vec(x0.clone()), &DVector::from_vec(u.clone()), 0.0);
        let oracle = rk4(|x| heat_balance(&top, &p, &solar, x, &u), &x0, 1.0, 3600);
        for i in 0..m {
            worst = worst.max((engine[i] - oracle[i]).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-3 && secs < 10.0, format!("max |engine − RK4| = {worst:.2e} °C (tol 1e-3), {secs:.2} s (limit 10 s)"))
}

fn analytic_decay() -> Outcome {
    let constants = PhysicalConstants::<f64>::bundled();
    let mut z = zone(1, 150.0, 0.0, false, true, 0.0);
    z.hvac_present = false;
    let top = BuildingTopology {
        zones: vec![z],
        adjacency: vec![],
        exterior_walls: vec![SurfaceContact { zone: 1, area: 30.0, u_factor: Some(0.8) }],
        ground_contact: vec![],
    };
    let p = derive_thermal_parameters(&top, &UFactors::default(), &constants).unwrap();
    let cont = assemble_continuous(&top, &p, &SolarParameters::default(), &OccupantHeatCoefficients::zero()).unwrap();
    let dt = 600.0;
    let disc = discretize(&cont, dt).unwrap();
    let (t0, te) = (30.0, 10.0);
    let rc = p.resistance_exterior[0].unwrap() * p.capacitance[0];
    let u = DVector::from_vec(vec![0.0, te, 0.0, 0.0]);
    let mut x = DVector::from_element(1, t0);
    let mut worst: f64 = 0.0;
    for k in 1..=48 {
        x = disc.advance(&x, &u, 0.0);
        let exact = te + (t0 - te) * (-(k as f64) * dt / rc).exp();
        worst = worst.max((x[0] - exact).abs());
    }
    check(worst < 1e-9, format!("max per-step error {worst:.2e} °C over 48 steps (tol 1e-9)"))
}

fn office_file() -> ScenarioFile<f64> {
    ScenarioFile::from_json(bundled_scenario_json("medium-office-18zone").unwrap()).unwrap()
}

fn equilibrium() -> Outcome {
    let mut f = office_file();
    let t = 18.0;
    f.full_occupancy = None;
    f.weather = Some(thermoenv::scenario::WeatherSource::Reference(format!("builtin:constant:{t}:42")));
    f.ground_temps = Some([t; 12]);
    f.episode_length = Some(1000);
    f.initial_temps = Some(vec![t; 18]);
    let s = f.compile(None).unwrap();
    let mut env = Environment::new(s.env).unwrap();
    env.reset(0).unwrap();
    let zero = EnvAction::zeros(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let out = env.step(&zero).unwrap();
        worst = out.state.zone_temps.iter().fold(worst, |w, x| w.max((x - t).abs()));
    }
    check(worst < 1e-9, format!("max drift {worst:.2e} °C over 1000 steps, 18 zones (tol 1e-9)"))
}

fn polynomial_identity() -> Outcome {
    let c = PhysicalConstants::<f64>::bundled().occupant;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.random_range(-10.0..45.0);
        let m = rng.random_range(60.0..300.0);
        let k = c.c;
        // Full nine-term polynomial, written out independently of the library.
        let full = k[0] + k[1] * m + k[2] * m * m + k[3] * t - k[4] * t * m + k[5] * t * m * m - k[6] * t * t
            + k[7] * t * t * m
            - k[8] * t * t * m * m;
        let gap = sensible_heat_per_person(&c, t, m) - nonlinear_residual(&c, t, m);
        worst = worst.max((gap - k[3] * t).abs()).max((sensible_heat_per_person(&c, t, m) - full).abs() / full.abs().max(1.0));
    }
    check(worst < 1e-12, format!("max |Q_p − f − c₄T̄| = {worst:.2e} W (tol 1e-12)"))
}

fn sysid_recovery() -> Outcome {
    let mut f: ScenarioFile<f64> = ScenarioFile::from_json(bundled_scenario_json("two-zone-fig2").unwrap()).unwrap();
    f.full_occupancy = None;
    // Start ten days before a month boundary so the ground temperature changes.
    f.start_day_of_year = Some(171);
    f.episode_length = Some(500);
    let s = f.compile(None).unwrap();
    let n = s.env.hvac_count();
    let mut env = Environment::new(s.env.clone()).unwrap();
    let traj = run_episode(&mut env, 7, TrajectoryMeta::default(), |st, e| Ok(random_policy(e.seed(), st.step_index, n))).unwrap();
    let meta = ModelMeta { ac_map: s.env.ac_map.clone(), max_power: s.env.max_power.clone(), activity_schedule: None };
    let (train, test) = split_chronological(&traj, 0.8);
    let model = fit(&collect(&train, &meta).unwrap(), 0.0).unwrap();
    let d: &DiscreteModel<f64> = &s.env.discrete_model;
    let m = d.zone_count();
    let mut truth = DMatrix::zeros(m, model.W.ncols());
    truth.view_mut((0, 0), (m, m)).copy_from(&d.A_d);
    truth.view_mut((0, m), (m, m + 3)).copy_from(&d.B_d);
    let coef_err = (&model.W - &truth).amax().max(model.b.amax());
    let rmse = evaluate(&model, &test, &meta, 1).unwrap().one_step_rmse;
    check(
        coef_err < 1e-6 && rmse < 1e-6,
        format!("max |W − [A_d B_d 0]| = {coef_err:.2e} (tol 1e-6), held-out one-step RMSE {rmse:.2e} °C (tol 1e-6)"),
    )
}

/// Scalar plant x⁺ = 0.9x + 0.1·T_E + 0.5·a, simulated directly with exact norms.
fn scalar_cost(a: [f64; 3], x0: f64, te: f64, target: f64, beta: f64) -> f64 {
    let mut x = x0;
    let mut j = 0.0;
    for ak in a {
        x = 0.9 * x + 0.1 * te + 0.5 * ak;
        j += (1.0 - beta) * ak.abs() + beta * (target - x).abs();
    }
    j
}

fn grid_search(x0: f64, te: f64, target: f64, beta: f64) -> f64 {
    let mut center = [0.0; 3];
    let mut half = 1.0;
    let mut best = f64::INFINITY;
    // 201³ over the box, then two 201³ refinements around the incumbent.
    for _ in 0..3 {
        let step = 2.0 * half / 200.0;
        let axis = |c: f64| (0..=200).map(move |i| (c - half + i as f64 * step).clamp(-1.0, 1.0));
        let mut arg = center;
        for a0 in axis(center[0]) {
            for a1 in axis(center[1]) {
                for a2 in axis(center[2]) {
                    let j = scalar_cost([a0, a1, a2], x0, te, target, beta);
                    if j < best {
                        best = j;
                        arg = [a0, a1, a2];
                    }
                }
            }
        }
        center = arg;
        half = 2.0 * step;
    }
    best
}

fn mpc_small_instance() -> Outcome {
    let model = DiscreteModel {
        A_d: DMatrix::from_element(1, 1, 0.9),
        B_d: DMatrix::from_row_slice(1, 4, &[0.0, 0.1, 0.5, 0.0]),
        D_d: DVector::zeros(1),
        dt: 3600.0,
        occupant_coeffs: OccupantHeatCoefficients::zero(),
    };
    let layout = HvacLayout { ac_map: vec![true], max_power: vec![1.0] };
    let opts = MpcOptions { horizon: 3, ..MpcOptions::default() };
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = vec![(19.0, 15.0, 0.7), (23.5, 30.0, 0.5), (21.0, 12.0, 0.9)];
    cases.extend((0..5).map(|_| (rng.random_range(15.0..30.0), rng.random_range(0.0..40.0), rng.random_range(0.1..0.95))));
    for (x0, te, beta) in cases {
        let state = EnvState { zone_temps: vec![x0], occupant_heat: 0.0, ground_temp: 0.0, outdoor_temp: te, ghi: 0.0, step_index: 0 };
        let forecast = Forecast { ground: vec![0.0; 3], outdoor: vec![te; 3], ghi: vec![0.0; 3], activity: 0.0 };
        let reward = RewardConfig { beta, target_temps: vec![22.0] };
        let plan = mpc_plan(&state, &model, &forecast, &reward, &layout, &opts).unwrap();
        let a: Vec<f64> = plan.actions.iter().map(|a| a.values[0]).collect();
        let j = scalar_cost([a[0], a[1], a[2]], x0, te, 22.0, beta);
        let oracle = grid_search(x0, te, 22.0, beta);
        worst = worst.max((j - oracle).abs());
        detail.push(format!("{j:.6}/{oracle:.6}"));
    }
    check(worst < 1e-3, format!("max |J_mpc − J_grid| = {worst:.2e} (tol 1e-3); J pairs {}", detail.join(", ")))
}

fn office_ordering() -> Outcome {
    let start = Instant::now();
    let cfg = BenchmarkConfig {
        scenarios: vec!["medium-office-18zone".into()],
        controllers: vec![
            ControllerSpec::RuleBased { deadband: 0.5 },
            ControllerSpec::Mpc { beta: 0.8, horizon: 12 },
            ControllerSpec::Mpc { beta: 0.45, horizon: 12 },
        ],
        seeds: vec![0],
        episode_length: Some(30 * 24),
        parallel: true,
        save_trajectories: false,
    };
    let report = run_benchmark(&cfg, None);
    let secs = start.elapsed().as_secs_f64();
    let get = |c: &str| report.find("medium-office-18zone", c, 0).and_then(|c| c.metrics);
    let (Some(rule), Some(hi), Some(lo)) = (get("rule-based"), get("mpc(beta=0.8)"), get("mpc(beta=0.45)")) else {
        return check(false, format!("benchmark cells failed: {:?}", report.cells));
    };
    let ok = hi.avg_deviation < lo.avg_deviation
        && rule.avg_daily_energy > hi.avg_daily_energy
        && hi.avg_daily_energy > lo.avg_daily_energy
        && secs < 300.0;
    check(
        ok,
        format!(
            "deviation β=0.8 {:.3} < β=0.45 {:.3} °C (rule {:.3}); daily energy rule {:.3e} > β=0.8 {:.3e} > β=0.45 {:.3e} J; {secs:.1} s (limit 300 s)",
            hi.avg_deviation, lo.avg_deviation, rule.avg_deviation, rule.avg_daily_energy, hi.avg_daily_energy, lo.avg_daily_energy
        ),
    )
}

fn reward_spot_checks() -> Outcome {
    let map = [true, true];
    let r0: f64 = reward_l2(&[22.0, 22.0], &EnvAction::zeros(2), &RewardConfig { beta: 0.5, target_temps: vec![22.0, 22.0] }, &map);
    let r1: f64 = reward_l2(&[25.0, 26.0], &EnvAction { values: vec![0.3, -0.9] }, &RewardConfig { beta: 1.0, target_temps: vec![22.0, 22.0] }, &map);
    let r2: f64 = reward_l2(&[22.0, 22.0], &EnvAction { values: vec![0.6, 0.8] }, &RewardConfig { beta: 0.8, target_temps: vec![22.0, 22.0] }, &map);
    let errs = [r0.abs(), (r1 + 5.0).abs(), (r2 + 0.2).abs()];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    check(worst < 1e-12, format!("R = {r0}, {r1}, {r2} vs 0, −5, −0.2; max error {worst:.2e} (tol 1e-12)"))
}

fn serve_parity() -> Outcome {
    let f: ScenarioFile<f64> = ScenarioFile::from_json(bundled_scenario_json("single-story-5zone").unwrap()).unwrap();
    let s = f.compile(None).unwrap();
    let n = s.env.hvac_count();
    let mut local = Environment::new(s.env.clone()).unwrap();
    let mut session = Session::new(Environment::new(s.env).unwrap(), "single-story-5zone");

    let seed = 11;
    let mut requests = format!("{{\"cmd\":\"reset\",\"seed\":{seed}}}\n");
    let actions: Vec<EnvAction<f64>> = (0..100).map(|k| random_policy(seed, k, n)).collect();
    for a in &actions {
        requests += &format!("{{\"cmd\":\"step\",\"action\":{}}}\n", serde_json::to_string(&a.values).unwrap());
    }
    let mut wire = Vec::new();
    session.run(requests.as_bytes(), &mut wire).unwrap();
    let lines: Vec<&str> = std::str::from_utf8(&wire).unwrap().lines().collect();

    let reset: ResetResponse<f64> = serde_json::from_str(lines[0]).unwrap();
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let mut mismatches = usize::from(bits(&reset.state) != bits(&local.reset(seed).unwrap().to_vector()));
    for (k, a) in actions.iter().enumerate() {
        let remote: StepResponse<f64> = serde_json::from_str(lines[k + 1]).unwrap();
        let out = local.step(a).unwrap();
        let same = bits(&remote.state) == bits(&out.state.to_vector())
            && remote.reward.to_bits() == out.reward.to_bits()
            && remote.info.energy.to_bits() == out.info.energy.to_bits()
            && remote.done == out.done
            && remote.k == out.state.step_index;
        mismatches += usize::from(!same);
    }
    check(mismatches == 0, format!("{mismatches} of 101 responses differ bitwise from in-process results"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("discretization matches RK4 on 20 random networks", discretization_oracle),
        ("single-zone decay matches the analytic solution", analytic_decay),
        ("equilibrium holds for 1000 steps", equilibrium),
        ("sensible heat minus residual equals c4·T", polynomial_identity),
        ("system identification recovers [A_d B_d]", sysid_recovery),
        ("MPC H=3 scalar problem matches grid search", mpc_small_instance),
        ("medium office 30-day controller ordering", office_ordering),
        ("reward spot checks", reward_spot_checks),
        ("serve-mode parity over a 100-step random episode", serve_parity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let out = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            check(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        println!("{} {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        failed += usize::from(!out.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
