//! Receding-horizon MPC on the discrete model, solved by projected gradient.
//!
//! Over a horizon of `H` steps the planner minimizes
//!
//! ```text
//! Σ_k (1−β)‖a[k]‖₂ + β‖T^obj − T_hvac[k+1]‖₂,   a[k] ∈ [−1, 1]^n
//! ```
//!
//! with the occupant nonlinearity frozen at its value for the current state.
//! Norms are smoothed as `√(‖v‖² + ε²) − ε`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::nonlinear_residual;
use crate::env::EnvConfig;
use crate::error::{contract, Error, Result};
use crate::model::{input_width, DiscreteModel, EnvAction, EnvState, RewardConfig, INPUT_HVAC0};
use crate::scalar::Real;

pub const DEFAULT_HORIZON: usize = 12;

/// Iteration cap for each coarse smoothing stage.
const STAGE_ITERATIONS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpcOptions {
    pub horizon: usize,
    pub max_iterations: usize,
    /// Stop once `‖a − Π(a − ∇J)‖ <` this.
    pub tolerance: f64,
    /// Norm smoothing `ε`.
    pub smoothing: f64,
}

impl Default for MpcOptions {
    fn default() -> Self {
        Self { horizon: DEFAULT_HORIZON, max_iterations: 500, tolerance: 1e-6, smoothing: 1e-9 }
    }
}

/// Exogenous inputs over the horizon, index 0 being the current step.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast<T> {
    pub ground: Vec<T>,
    pub outdoor: Vec<T>,
    pub ghi: Vec<T>,
    /// Metabolic rate at the current step.
    pub activity: T,
}

impl<T: Real> Forecast<T> {
    /// Ground-truth forecast taken from the environment's weather.
    pub fn from_config(cfg: &EnvConfig<T>, k: usize, horizon: usize) -> Self {
        Self {
            ground: (k..k + horizon).map(|j| cfg.ground_at(j)).collect(),
            outdoor: (k..k + horizon).map(|j| cfg.outdoor_at(j)).collect(),
            ghi: (k..k + horizon).map(|j| cfg.ghi_at(j)).collect(),
            activity: cfg.activity_at(k),
        }
    }

    fn len(&self) -> usize {
        self.ground.len().min(self.outdoor.len()).min(self.ghi.len())
    }
}

/// Which zones are actuated and how hard.
#[derive(Debug, Clone, PartialEq)]
pub struct HvacLayout<T> {
    pub ac_map: Vec<bool>,
    /// W per HVAC zone.
    pub max_power: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpcPlan<T> {
    pub actions: Vec<EnvAction<T>>,
    pub objective: T,
    pub iterations: usize,
    /// Objective after each accepted iterate, starting with the initial guess.
    pub objective_trace: Vec<T>,
}

impl<T: Real> MpcPlan<T> {
    pub fn first(&self) -> EnvAction<T> {
        self.actions[0].clone()
    }
}

/// Condensed horizon problem: HVAC-zone temperatures are affine in the stacked actions.
struct Condensed<T: Real> {
    horizon: usize,
    n: usize,
    /// `free[k]`: HVAC-zone deviation `T^obj − T_hvac[k+1]` with all actions zero.
    free_dev: Vec<DVector<T>>,
    /// `markov[m] = rows_hvac(A_dᵐ · G)`, with `G` the HVAC columns of `B_d` times max power.
    markov: Vec<DMatrix<T>>,
    beta: T,
    eps: T,
}

impl<T: Real> Condensed<T> {
    fn build(
        state: &EnvState<T>,
        model: &DiscreteModel<T>,
        forecast: &Forecast<T>,
        reward: &RewardConfig<T>,
        layout: &HvacLayout<T>,
        opts: &MpcOptions,
    ) -> Result<Self> {
        let m = model.zone_count();
        let horizon = opts.horizon;
        if horizon == 0 {
            return Err(contract("MPC horizon must be >= 1"));
        }
        if forecast.len() < horizon {
            return Err(contract(format!(
                "forecast covers {} steps, horizon is {horizon}",
                forecast.len()
            )));
        }
        if state.zone_count() != m || layout.ac_map.len() != m {
            return Err(contract("state, layout and model disagree on the zone count"));
        }
        let hvac: Vec<usize> = (0..m).filter(|&i| layout.ac_map[i]).collect();
        let n = hvac.len();
        if layout.max_power.len() != n || reward.target_temps.len() != n {
            return Err(contract("max_power and targets need one entry per HVAC zone"));
        }

        let x0 = DVector::from_column_slice(&state.zone_temps);
        let f = nonlinear_residual(&model.occupant_coeffs, x0.mean(), forecast.activity);
        let mut free_dev = Vec::with_capacity(horizon);
        let mut x = x0;
        for k in 0..horizon {
            let mut u = DVector::zeros(input_width(m));
            u[0] = forecast.ground[k];
            u[1] = forecast.outdoor[k];
            u[m + 2] = forecast.ghi[k];
            x = model.advance(&x, &u, f);
            free_dev.push(DVector::from_fn(n, |h, _| reward.target_temps[h] - x[hvac[h]]));
        }

        let mut g = DMatrix::zeros(m, n);
        for (h, &i) in hvac.iter().enumerate() {
            g.set_column(h, &(model.B_d.column(INPUT_HVAC0 + i) * layout.max_power[h]));
        }
        let mut markov = Vec::with_capacity(horizon);
        let mut power = g;
        for _ in 0..horizon {
            markov.push(DMatrix::from_fn(n, n, |r, c| power[(hvac[r], c)]));
            power = &model.A_d * power;
        }
        Ok(Self { horizon, n, free_dev, markov, beta: reward.beta, eps: T::lit(opts.smoothing) })
    }

    fn deviations(&self, a: &[DVector<T>]) -> Vec<DVector<T>> {
        (0..self.horizon)
            .map(|k| {
                let mut d = self.free_dev[k].clone();
                for (i, ai) in a.iter().enumerate().take(k + 1) {
                    d -= &self.markov[k - i] * ai;
                }
                d
            })
            .collect()
    }

    fn objective(&self, a: &[DVector<T>]) -> T {
        self.smoothed_objective(a, self.eps)
    }

    fn smoothed_objective(&self, a: &[DVector<T>], eps: T) -> T {
        let w = T::one() - self.beta;
        let norm = |v: &DVector<T>| (v.norm_squared() + eps * eps).sqrt() - eps;
        let energy = a.iter().fold(T::zero(), |acc, ai| acc + norm(ai));
        let comfort = self.deviations(a).iter().fold(T::zero(), |acc, d| acc + norm(d));
        w * energy + self.beta * comfort
    }

    fn gradient(&self, a: &[DVector<T>], eps: T) -> Vec<DVector<T>> {
        let w = T::one() - self.beta;
        let unit = |v: &DVector<T>| v / (v.norm_squared() + eps * eps).sqrt();
        let dev_dir: Vec<DVector<T>> = self.deviations(a).iter().map(unit).collect();
        (0..self.horizon)
            .map(|i| {
                let mut g = unit(&a[i]) * w;
                for (k, dir) in dev_dir.iter().enumerate().skip(i) {
                    g -= self.markov[k - i].tr_mul(dir) * self.beta;
                }
                g
            })
            .collect()
    }

    /// Actions that cancel the deviation step by step, clipped to the box.
    fn tracking_guess(&self) -> Option<Vec<DVector<T>>> {
        let lu = self.markov[0].clone().lu();
        let mut a: Vec<DVector<T>> = Vec::with_capacity(self.horizon);
        for k in 0..self.horizon {
            let mut need = self.free_dev[k].clone();
            for (i, ai) in a.iter().enumerate() {
                need -= &self.markov[k - i] * ai;
            }
            let step = lu.solve(&need)?;
            a.push(project(step));
        }
        Some(a)
    }
}

fn project<T: Real>(mut v: DVector<T>) -> DVector<T> {
    v.apply(|x| *x = x.clamp(-T::one(), T::one()));
    v
}

fn finite<T: Real>(v: T) -> bool {
    v.is_finite_value()
}

/// Plans `H` actions and reports the whole plan; apply `plan.first()`.
pub fn mpc_plan<T: Real>(
    state: &EnvState<T>,
    model: &DiscreteModel<T>,
    forecast: &Forecast<T>,
    reward: &RewardConfig<T>,
    layout: &HvacLayout<T>,
    opts: &MpcOptions,
) -> Result<MpcPlan<T>> {
    let p = Condensed::build(state, model, forecast, reward, layout, opts)?;
    let zeros = vec![DVector::zeros(p.n); p.horizon];
    let mut a = zeros.clone();
    let mut obj = p.objective(&a);
    if let Some(guess) = p.tracking_guess() {
        let j = p.objective(&guess);
        if finite(j) && j < obj {
            a = guess;
            obj = j;
        }
    }
    if !finite(obj) {
        return Err(Error::NonFinite(format!("MPC objective {obj} at the initial iterate")));
    }

    // Continuation: with a tiny ε the iterate sticks at kinks (e.g. a = 0), so
    // solve a sequence of coarser smoothings first and keep the result if it wins.
    let mut warm = a.clone();
    let mut eps = T::one();
    let mut iterations = 0;
    while eps > p.eps * T::lit(10.0) {
        let stage = descend(&p, warm, eps, STAGE_ITERATIONS, opts.tolerance)?;
        warm = stage.0;
        iterations += stage.1;
        eps *= T::lit(0.1);
    }
    let j = p.objective(&warm);
    if finite(j) && j < obj {
        a = warm;
        obj = j;
    }

    let (a, obj, n, trace) = descend_traced(&p, a, obj, p.eps, opts.max_iterations, opts.tolerance)?;
    iterations += n;

    Ok(MpcPlan {
        actions: a.into_iter().map(|v| EnvAction { values: v.as_slice().to_vec() }).collect(),
        objective: obj,
        iterations,
        objective_trace: trace,
    })
}

/// Accelerated projected gradient with backtracking and restart on increase;
/// used for the coarse smoothing stages, where monotonicity is not needed.
fn descend<T: Real>(p: &Condensed<T>, mut a: Vec<DVector<T>>, eps: T, max_iter: usize, tol: f64) -> Result<(Vec<DVector<T>>, usize)> {
    let tol = T::lit(tol);
    let two = T::lit(2.0);
    let mut obj = p.smoothed_objective(&a, eps);
    let mut y = a.clone();
    let mut t = T::one();
    let mut step = T::one();
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let fy = p.smoothed_objective(&y, eps);
        let grad = p.gradient(&y, eps);
        step *= two;
        let mut next = None;
        for _ in 0..60 {
            let cand: Vec<DVector<T>> = y.iter().zip(&grad).map(|(yi, gi)| project(yi - gi * step)).collect();
            let (lin, sq) = cand.iter().zip(&y).zip(&grad).fold((T::zero(), T::zero()), |(lin, sq), ((c, yi), gi)| {
                let d = c - yi;
                (lin + gi.dot(&d), sq + d.norm_squared())
            });
            let j = p.smoothed_objective(&cand, eps);
            if !finite(j) {
                return Err(Error::NonFinite(format!("MPC objective at smoothing {eps:?}")));
            }
            if j <= fy + lin + sq / (two * step) {
                next = Some((cand, j, sq.sqrt() / step));
                break;
            }
            step *= T::lit(0.5);
        }
        let Some((cand, j, pg)) = next else { break };
        if j > obj {
            // Momentum overshot: restart from the last iterate.
            y = a.clone();
            t = T::one();
            continue;
        }
        let t_next = (T::one() + (T::one() + T::lit(4.0) * t * t).sqrt()) / two;
        let mom = (t - T::one()) / t_next;
        y = cand.iter().zip(&a).map(|(c, ai)| c + (c - ai) * mom).map(project).collect();
        a = cand;
        obj = j;
        t = t_next;
        if pg < tol {
            break;
        }
    }
    Ok((a, iterations))
}

/// Projected gradient on the `eps`-smoothed objective, starting from `a` with value `obj`.
#[allow(clippy::type_complexity)]
fn descend_traced<T: Real>(
    p: &Condensed<T>,
    mut a: Vec<DVector<T>>,
    mut obj: T,
    eps: T,
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<DVector<T>>, T, usize, Vec<T>)> {
    let tol = T::lit(tol);
    let mut step = T::one();
    let mut trace = vec![obj];
    let mut iterations = 0;
    while iterations < max_iter {
        let grad = p.gradient(&a, eps);
        let pg: T = a
            .iter()
            .zip(&grad)
            .map(|(ai, gi)| (ai - project(ai - gi)).norm_squared())
            .fold(T::zero(), |s, v| s + v)
            .sqrt();
        if pg < tol {
            break;
        }
        iterations += 1;

        // Backtracking on the quadratic upper bound keeps the objective monotone.
        step *= T::lit(2.0);
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<DVector<T>> = a.iter().zip(&grad).map(|(ai, gi)| project(ai - gi * step)).collect();
            let (lin, sq) = cand.iter().zip(&a).zip(&grad).fold((T::zero(), T::zero()), |(lin, sq), ((c, ai), gi)| {
                let d = c - ai;
                (lin + gi.dot(&d), sq + d.norm_squared())
            });
            let j = p.smoothed_objective(&cand, eps);
            if !finite(j) {
                return Err(Error::NonFinite(format!(
                    "MPC objective at iteration {iterations}: {:?}",
                    cand.iter().map(|c| c.as_slice().to_vec()).collect::<Vec<_>>()
                )));
            }
            if j <= obj + lin + sq / (T::lit(2.0) * step) && j <= obj {
                accepted = Some((cand, j));
                break;
            }
            step *= T::lit(0.5);
        }
        match accepted {
            Some((cand, j)) => {
                let stalled = j == obj;
                a = cand;
                obj = j;
                trace.push(obj);
                if stalled {
                    break;
                }
            }
            None => break,
        }
    }
    Ok((a, obj, iterations, trace))
}

/// Objective of an explicit action sequence, for checking plans against other solvers.
pub fn plan_objective<T: Real>(
    state: &EnvState<T>,
    model: &DiscreteModel<T>,
    forecast: &Forecast<T>,
    reward: &RewardConfig<T>,
    layout: &HvacLayout<T>,
    opts: &MpcOptions,
    actions: &[EnvAction<T>],
) -> Result<T> {
    let p = Condensed::build(state, model, forecast, reward, layout, opts)?;
    if actions.len() != p.horizon || actions.iter().any(|a| a.values.len() != p.n) {
        return Err(contract("action sequence does not match the horizon layout"));
    }
    let a: Vec<DVector<T>> = actions.iter().map(|a| DVector::from_column_slice(&a.values)).collect();
    Ok(p.objective(&a))
}
