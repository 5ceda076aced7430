//! Hand-designed baseline optimizers, including metric-aware natural
//! gradient descent.
//!
//! All six share one config/state pair so benchmark sweeps can treat them
//! uniformly. Defaults follow common practice: lr 0.01 everywhere, heavy-ball
//! momentum 0.9, Adam (0.9, 0.999, 1e-8) with bias correction, RMSprop decay
//! 0.9, and natural gradient damped by λ = 0.01 before the solve.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bench::{final_metrics, RunRecord};
use crate::circuits::Task;
use crate::error::{Error, Result};
use crate::geom::{param_shift_grad, task_metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Gd,
    Momentum,
    Adam,
    Adagrad,
    Rmsprop,
    Qngd,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 6] = [
        BaselineKind::Gd,
        BaselineKind::Momentum,
        BaselineKind::Adam,
        BaselineKind::Adagrad,
        BaselineKind::Rmsprop,
        BaselineKind::Qngd,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BaselineKind::Gd => "gd",
            BaselineKind::Momentum => "momentum",
            BaselineKind::Adam => "adam",
            BaselineKind::Adagrad => "adagrad",
            BaselineKind::Rmsprop => "rmsprop",
            BaselineKind::Qngd => "qngd",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown optimizer `{id}`")))
    }

    /// Whether updates precondition with the Fubini-Study metric.
    pub fn needs_metric(&self) -> bool {
        matches!(self, BaselineKind::Qngd)
    }
}

/// Hyperparameters for one baseline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub kind: BaselineKind,
    pub lr: f64,
    /// Heavy-ball coefficient (momentum only).
    pub momentum: f64,
    /// First/second moment decays (Adam only).
    pub beta1: f64,
    pub beta2: f64,
    /// Denominator guard (Adam, Adagrad, RMSprop).
    pub epsilon: f64,
    /// Squared-gradient decay (RMSprop only).
    pub rho: f64,
    /// Metric damping λ in (g + λI)⁻¹ (natural gradient only).
    pub damping: f64,
}

impl BaselineConfig {
    pub fn new(kind: BaselineKind) -> Self {
        BaselineConfig {
            kind,
            lr: 0.01,
            momentum: 0.9,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            rho: 0.9,
            damping: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.lr > 0.0, "lr must be positive"),
            ((0.0..1.0).contains(&self.momentum), "momentum in [0, 1)"),
            ((0.0..1.0).contains(&self.beta1), "beta1 in [0, 1)"),
            ((0.0..1.0).contains(&self.beta2), "beta2 in [0, 1)"),
            (self.epsilon > 0.0, "epsilon must be positive"),
            ((0.0..1.0).contains(&self.rho), "rho in [0, 1)"),
            (self.damping >= 0.0, "damping must be non-negative"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::InvalidConfig(msg.into()));
            }
        }
        Ok(())
    }
}

/// Per-run accumulators: `m` holds momentum/first moments, `v` second
/// moments or squared-gradient sums, depending on the kind.
#[derive(Debug, Clone)]
pub struct OptState {
    pub step: usize,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl OptState {
    pub fn new(n_params: usize) -> Self {
        OptState {
            step: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }
}

/// One in-place update of θ.
///
/// `metric` is required exactly when the kind preconditions with it; the
/// natural-gradient direction solves (g + λI)·d = ∇C.
pub fn baseline_step(
    config: &BaselineConfig,
    state: &mut OptState,
    theta: &mut [f64],
    grad: &[f64],
    metric: Option<&DMatrix<f64>>,
) -> Result<()> {
    let n = theta.len();
    if grad.len() != n {
        return Err(Error::ParamLengthMismatch {
            expected: n,
            got: grad.len(),
        });
    }
    if state.m.len() != n {
        return Err(Error::ParamLengthMismatch {
            expected: n,
            got: state.m.len(),
        });
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("gradient".into()));
    }
    state.step += 1;
    match config.kind {
        BaselineKind::Gd => {
            for (t, g) in theta.iter_mut().zip(grad) {
                *t -= config.lr * g;
            }
        }
        BaselineKind::Momentum => {
            for ((t, v), g) in theta.iter_mut().zip(&mut state.m).zip(grad) {
                *v = config.momentum * *v + g;
                *t -= config.lr * *v;
            }
        }
        BaselineKind::Adam => {
            let bc1 = 1.0 - config.beta1.powi(state.step as i32);
            let bc2 = 1.0 - config.beta2.powi(state.step as i32);
            for k in 0..n {
                state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * grad[k];
                state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
                let m_hat = state.m[k] / bc1;
                let v_hat = state.v[k] / bc2;
                theta[k] -= config.lr * m_hat / (v_hat.sqrt() + config.epsilon);
            }
        }
        BaselineKind::Adagrad => {
            for k in 0..n {
                state.v[k] += grad[k] * grad[k];
                theta[k] -= config.lr * grad[k] / (state.v[k].sqrt() + config.epsilon);
            }
        }
        BaselineKind::Rmsprop => {
            for k in 0..n {
                state.v[k] = config.rho * state.v[k] + (1.0 - config.rho) * grad[k] * grad[k];
                theta[k] -= config.lr * grad[k] / (state.v[k].sqrt() + config.epsilon);
            }
        }
        BaselineKind::Qngd => {
            let g = metric.ok_or_else(|| {
                Error::InvalidConfig("natural gradient descent needs a metric tensor".into())
            })?;
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::DimensionMismatch {
                    left: g.nrows(),
                    right: n,
                });
            }
            let damped = g + DMatrix::<f64>::identity(n, n) * config.damping;
            let rhs = DVector::from_column_slice(grad);
            let direction = damped
                .clone()
                .cholesky()
                .map(|c| c.solve(&rhs))
                .or_else(|| damped.lu().solve(&rhs))
                .ok_or_else(|| Error::InvalidConfig("singular damped metric".into()))?;
            for (t, d) in theta.iter_mut().zip(direction.iter()) {
                *t -= config.lr * d;
            }
        }
    }
    Ok(())
}

/// Full trajectory of one baseline on one task from θ₀.
///
/// Records the initial loss plus one loss per step. A non-finite loss or
/// parameter vector ends the run early with the `diverged` flag set.
pub fn run_baseline(
    task: &Task,
    config: &BaselineConfig,
    theta0: &[f64],
    steps: usize,
) -> Result<RunRecord> {
    if steps == 0 {
        return Err(Error::InvalidConfig("steps must be at least 1".into()));
    }
    config.validate()?;
    let n = task.n_params();
    if theta0.len() != n {
        return Err(Error::ParamLengthMismatch {
            expected: n,
            got: theta0.len(),
        });
    }

    let mut theta = theta0.to_vec();
    let mut state = OptState::new(n);
    let mut record = RunRecord {
        task_id: task.id.clone(),
        optimizer_id: config.kind.id().to_string(),
        seed: 0,
        losses: Vec::with_capacity(steps + 1),
        wall_ms: Vec::with_capacity(steps),
        final_metrics: BTreeMap::new(),
        diverged: false,
    };

    let initial = task.loss(&theta)?;
    if !initial.is_finite() {
        record.diverged = true;
        return Ok(record);
    }
    record.losses.push(initial);

    for _ in 0..steps {
        let started = Instant::now();
        let grad = param_shift_grad(task, &theta)?;
        if grad.iter().any(|g| !g.is_finite()) {
            record.diverged = true;
            break;
        }
        let metric = if config.kind.needs_metric() {
            Some(task_metric(task, &theta)?)
        } else {
            None
        };
        baseline_step(config, &mut state, &mut theta, &grad, metric.as_ref())?;
        if theta.iter().any(|t| !t.is_finite()) {
            record.diverged = true;
            break;
        }
        let loss = task.loss(&theta)?;
        record.wall_ms.push(started.elapsed().as_secs_f64() * 1e3);
        if !loss.is_finite() {
            record.diverged = true;
            break;
        }
        record.losses.push(loss);
    }

    if !record.diverged {
        record.final_metrics = final_metrics(task, &theta);
    }
    Ok(record)
}
