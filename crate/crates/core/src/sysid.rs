//! Data-driven next-state regression `x[k+1] ≈ W·[x[k], u[k], T̄²] + b`.

use std::io::Read;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::env::read_trajectory_csv;
use crate::error::{contract, Error, Result};
use crate::model::{input_width, mean, Trajectory, INPUT_GROUND, INPUT_HVAC0, INPUT_OUTDOOR};
use crate::scalar::{matrix_rows, vector_serde, Real};

/// How to rebuild the physical input vector from a logged trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ModelMeta<T> {
    pub ac_map: Vec<bool>,
    /// W, one entry per HVAC zone.
    pub max_power: Vec<T>,
    /// When set, the metabolic rate `r[k]` is appended as a last feature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity_schedule: Option<Vec<T>>,
}

impl<T: Real> ModelMeta<T> {
    pub fn zone_count(&self) -> usize {
        self.ac_map.len()
    }

    pub fn feature_width(&self) -> usize {
        let m = self.zone_count();
        m + input_width(m) + 1 + usize::from(self.activity_schedule.is_some())
    }

    fn activity(&self, k: usize) -> Option<T> {
        self.activity_schedule.as_ref().map(|s| s[k.min(s.len().saturating_sub(1))])
    }

    /// Input vector of step `k` of a trajectory.
    pub fn input_of(&self, traj: &Trajectory<T>, k: usize) -> Result<DVector<T>> {
        let rec = &traj.records[k];
        let m = self.zone_count();
        let mut u = DVector::zeros(input_width(m));
        u[INPUT_GROUND] = rec.state.ground_temp;
        u[INPUT_OUTDOOR] = rec.state.outdoor_temp;
        let hvac: Vec<usize> = (0..m).filter(|&i| self.ac_map[i]).collect();
        if rec.action.values.len() != hvac.len() || self.max_power.len() != hvac.len() {
            return Err(contract(format!(
                "step {k}: {} actions, {} HVAC zones, {} power ratings",
                rec.action.values.len(),
                hvac.len(),
                self.max_power.len()
            )));
        }
        for (h, &i) in hvac.iter().enumerate() {
            u[INPUT_HVAC0 + i] = rec.action.values[h] * self.max_power[h];
        }
        u[m + 2] = rec.state.ghi;
        Ok(u)
    }
}

/// Feature row `[x, u, T̄², (r)]`.
pub fn feature_row<T: Real>(x: &[T], u: &DVector<T>, activity: Option<T>) -> Vec<T> {
    let tbar = mean(x);
    let mut row = x.to_vec();
    row.extend(u.iter().copied());
    row.push(tbar * tbar);
    row.extend(activity);
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RegressionDataset<T> {
    #[serde(with = "matrix_rows")]
    pub features: DMatrix<T>,
    #[serde(with = "matrix_rows")]
    pub targets: DMatrix<T>,
}

impl<T: Real> RegressionDataset<T> {
    pub fn rows(&self) -> usize {
        self.features.nrows()
    }

    /// The same data stacked `times` times.
    pub fn repeated(&self, times: usize) -> Self {
        let n = self.rows();
        Self {
            features: DMatrix::from_fn(n * times, self.features.ncols(), |i, j| self.features[(i % n, j)]),
            targets: DMatrix::from_fn(n * times, self.targets.ncols(), |i, j| self.targets[(i % n, j)]),
        }
    }
}

/// One row per consecutive pair of logged steps.
pub fn collect<T: Real>(traj: &Trajectory<T>, meta: &ModelMeta<T>) -> Result<RegressionDataset<T>> {
    if traj.len() < 2 {
        return Err(Error::EmptyDataset(format!(
            "need at least 2 steps to form a transition, got {}",
            traj.len()
        )));
    }
    let m = meta.zone_count();
    if traj.records[0].state.zone_count() != m {
        return Err(contract("trajectory zone count differs from the model metadata"));
    }
    let n = traj.len() - 1;
    let width = meta.feature_width();
    let mut features = DMatrix::zeros(n, width);
    let mut targets = DMatrix::zeros(n, m);
    for k in 0..n {
        let u = meta.input_of(traj, k)?;
        let row = feature_row(&traj.records[k].state.zone_temps, &u, meta.activity(k));
        for (j, v) in row.into_iter().enumerate() {
            features[(k, j)] = v;
        }
        for (i, v) in traj.records[k + 1].state.zone_temps.iter().enumerate() {
            targets[(k, i)] = *v;
        }
    }
    Ok(RegressionDataset { features, targets })
}

/// Reads a trajectory CSV and builds the regression dataset from it.
pub fn collect_csv<T: Real, R: Read>(input: R, meta: &ModelMeta<T>) -> Result<RegressionDataset<T>> {
    let traj = read_trajectory_csv(input)?;
    collect(&traj, meta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[allow(non_snake_case)]
pub struct LinearModel<T> {
    /// `M × feature width`.
    #[serde(with = "matrix_rows")]
    pub W: DMatrix<T>,
    #[serde(with = "vector_serde")]
    pub b: DVector<T>,
    #[serde(default)]
    pub uses_activity: bool,
}

impl<T: Real> LinearModel<T> {
    pub fn zone_count(&self) -> usize {
        self.W.nrows()
    }

    pub fn feature_width(&self) -> usize {
        self.W.ncols()
    }
}

/// Least squares with optional ridge penalty on `W` (the intercept is never penalized).
///
/// Features are centred, which absorbs the intercept, and scaled to unit norm
/// before a Householder QR of `[X; √ridge·S⁻¹]`. Columns that are exactly
/// constant over the dataset carry no information beyond the intercept; their
/// coefficients are fixed at zero.
#[allow(non_snake_case)]
pub fn fit<T: Real>(dataset: &RegressionDataset<T>, ridge: T) -> Result<LinearModel<T>> {
    let (n, p) = dataset.features.shape();
    let m = dataset.targets.ncols();
    if n == 0 {
        return Err(Error::EmptyDataset("no rows".into()));
    }
    if dataset.targets.nrows() != n {
        return Err(contract("feature and target row counts differ"));
    }
    if ridge < T::zero() || !ridge.is_finite_value() {
        return Err(contract("ridge must be a finite value >= 0"));
    }
    if dataset.features.iter().chain(dataset.targets.iter()).any(|v| !v.is_finite_value()) {
        return Err(Error::NonFinite("dataset entry".into()));
    }

    let nf = T::from_usize_lossy(n);
    let x_mean: Vec<T> = (0..p).map(|j| dataset.features.column(j).sum() / nf).collect();
    let y_mean: Vec<T> = (0..m).map(|j| dataset.targets.column(j).sum() / nf).collect();

    let active: Vec<usize> = (0..p)
        .filter(|&j| {
            let c = dataset.features.column(j);
            c.max() != c.min()
        })
        .collect();
    let q = active.len();
    let ridge_rows = if ridge > T::zero() { q } else { 0 };
    if ridge_rows == 0 && n < q + 1 {
        return Err(Error::RankDeficient(format!(
            "{n} rows for {q} varying features plus intercept"
        )));
    }

    let mut scale = vec![T::one(); q];
    let mut X = DMatrix::<T>::zeros(n + ridge_rows, q);
    for (a, &j) in active.iter().enumerate() {
        for i in 0..n {
            X[(i, a)] = dataset.features[(i, j)] - x_mean[j];
        }
        let s = X.view((0, a), (n, 1)).norm();
        scale[a] = s;
        for i in 0..n {
            X[(i, a)] /= s;
        }
        if ridge_rows > 0 {
            X[(n + a, a)] = ridge.sqrt() / s;
        }
    }
    let mut Y = DMatrix::<T>::zeros(n + ridge_rows, m);
    for i in 0..n {
        for j in 0..m {
            Y[(i, j)] = dataset.targets[(i, j)] - y_mean[j];
        }
    }

    let mut W = DMatrix::<T>::zeros(m, p);
    if q > 0 {
        let qr = X.qr();
        let r = qr.r();
        let tol = T::lit(1e-10);
        if ridge_rows == 0 {
            if let Some(a) = (0..q).find(|&a| r[(a, a)].abs() <= tol) {
                return Err(Error::RankDeficient(format!(
                    "feature column {} is a linear combination of the others",
                    active[a]
                )));
            }
        }
        qr.q_tr_mul(&mut Y);
        let rhs = Y.rows(0, q).into_owned();
        let z = r
            .solve_upper_triangular(&rhs)
            .ok_or_else(|| Error::RankDeficient("singular triangular factor".into()))?;
        for (a, &j) in active.iter().enumerate() {
            for i in 0..m {
                W[(i, j)] = z[(a, i)] / scale[a];
            }
        }
    }
    let x_mean_v = DVector::from_vec(x_mean);
    let b = DVector::from_vec(y_mean) - &W * x_mean_v;
    Ok(LinearModel { W, b, uses_activity: false })
}

/// `W·[x, u, T̄²] + b`.
pub fn predict<T: Real>(model: &LinearModel<T>, x: &[T], u: &DVector<T>) -> Result<DVector<T>> {
    predict_with_activity(model, x, u, None)
}

pub fn predict_with_activity<T: Real>(
    model: &LinearModel<T>,
    x: &[T],
    u: &DVector<T>,
    activity: Option<T>,
) -> Result<DVector<T>> {
    let row = feature_row(x, u, activity);
    if row.len() != model.feature_width() || x.len() != model.zone_count() {
        return Err(contract(format!(
            "feature width {} does not match model width {}",
            row.len(),
            model.feature_width()
        )));
    }
    Ok(&model.W * DVector::from_vec(row) + &model.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    /// °C
    pub one_step_rmse: f64,
    /// °C, over every predicted point of every `horizon`-step open-loop rollout.
    pub rollout_rmse: f64,
    pub horizon: usize,
}

pub fn evaluate<T: Real>(model: &LinearModel<T>, traj: &Trajectory<T>, meta: &ModelMeta<T>, horizon: usize) -> Result<EvalMetrics> {
    let n = traj.len();
    if horizon == 0 || n <= horizon {
        return Err(Error::EmptyDataset(format!(
            "trajectory of {n} steps is too short for a {horizon}-step rollout"
        )));
    }
    let inputs: Vec<DVector<T>> = (0..n).map(|k| meta.input_of(traj, k)).collect::<Result<_>>()?;
    let temps = |k: usize| &traj.records[k].state.zone_temps;

    let mut sq = 0.0;
    let mut count = 0usize;
    for k in 0..n - 1 {
        let pred = predict_with_activity(model, temps(k), &inputs[k], meta.activity(k))?;
        for (p, t) in pred.iter().zip(temps(k + 1)) {
            sq += (*p - *t).to_f64_lossy().powi(2);
            count += 1;
        }
    }
    let one_step = (sq / count as f64).sqrt();

    let mut sq = 0.0;
    let mut count = 0usize;
    for start in 0..n - horizon {
        let mut x: Vec<T> = temps(start).clone();
        for j in 0..horizon {
            let k = start + j;
            let next = predict_with_activity(model, &x, &inputs[k], meta.activity(k))?;
            x = next.iter().copied().collect();
            for (p, t) in x.iter().zip(temps(k + 1)) {
                sq += (*p - *t).to_f64_lossy().powi(2);
                count += 1;
            }
        }
    }
    Ok(EvalMetrics { one_step_rmse: one_step, rollout_rmse: (sq / count as f64).sqrt(), horizon })
}

/// Chronological split: the first `train_fraction` of steps for fitting, the rest held out.
pub fn split_chronological<T: Real>(traj: &Trajectory<T>, train_fraction: f64) -> (Trajectory<T>, Trajectory<T>) {
    let cut = ((traj.len() as f64) * train_fraction).round() as usize;
    let cut = cut.min(traj.len());
    let mut train = traj.clone();
    let mut test = traj.clone();
    train.records.truncate(cut);
    train.final_state = None;
    test.records.drain(..cut);
    (train, test)
}

/// Activity-feature variant of [`fit`]; the meta must carry the schedule.
pub fn fit_with_meta<T: Real>(dataset: &RegressionDataset<T>, meta: &ModelMeta<T>, ridge: T) -> Result<LinearModel<T>> {
    let mut model = fit(dataset, ridge)?;
    model.uses_activity = meta.activity_schedule.is_some();
    Ok(model)
}
