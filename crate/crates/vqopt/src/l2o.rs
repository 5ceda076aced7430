//! Learned optimizer: a coordinate-wise two-layer LSTM whose heads emit a
//! per-coordinate step scale (α), direction (β), and metric blend (γ).
//!
//! One set of weights is shared across all parameter coordinates, so the
//! optimizer transfers between circuits of different sizes. Updates follow
//! θ' = θ − exp(λ_b·α) ∘ B·(λ_a·β) with B the γ-blend of the metric
//! pseudo-inverse and the identity; an identity-preconditioner mode skips
//! the metric entirely for ablations.
//!
//! Meta-training differentiates the unrolled trajectory with a hand-rolled
//! reverse-mode tape. Inner-loop gradients ∇C(θ_t), the preconditioner, and
//! the preprocessed features are treated as constants of θ (detached), so
//! meta-gradients flow only through the cell, heads, and update arithmetic.
//! A frozen-replay surrogate exposes the exact function the tape
//! differentiates, which is what finite-difference oracles must probe.

use std::path::Path;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuits::{random_theta, Task};
use crate::error::{Error, Result};
use crate::geom::{param_shift_grad, pinv_psd, task_metric, PINV_CUTOFF};
use crate::opt::{baseline_step, BaselineConfig, BaselineKind, OptState};
use crate::seeds;

/// Scale of the direction head: v = λ_a·β.
pub const LAMBDA_A: f64 = 0.01;
/// Scale of the log-step head: η = exp(λ_b·α).
pub const LAMBDA_B: f64 = 0.01;
/// Gradient preprocessing clamp exponent.
pub const CLAMP_P: f64 = 10.0;
/// Current checkpoint format version.
pub const CHECKPOINT_VERSION: u32 = 1;

/// Whether updates are preconditioned by the blended metric pseudo-inverse
/// or by the identity (the ablation configuration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecondMode {
    Full,
    IdentityPrecond,
}

/// All trainable meta-parameters: two stacked LSTM layers (input width 2,
/// hidden width `hidden`) plus three affine heads hidden→1.
///
/// Gate blocks inside the 4H-row matrices are ordered input, forget,
/// candidate, output.
#[derive(Debug, Clone, PartialEq)]
pub struct L2OWeights {
    pub hidden: usize,
    pub wx1: DMatrix<f64>,
    pub wh1: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub wx2: DMatrix<f64>,
    pub wh2: DMatrix<f64>,
    pub b2: DVector<f64>,
    pub w_alpha: DVector<f64>,
    pub b_alpha: f64,
    pub w_beta: DVector<f64>,
    pub b_beta: f64,
    pub w_gamma: DVector<f64>,
    pub b_gamma: f64,
}

impl L2OWeights {
    /// Training initialization: cell weights uniform in ±0.1, heads zero so
    /// the first updates have near-zero scale and γ starts at 1/2.
    pub fn init(hidden: usize, seed: u64) -> Self {
        let mut rng = seeds::rng(seed, &["l2o", "init"], &[]);
        let mut uniform =
            |r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| rng.gen_range(-0.1..0.1));
        let wx1 = uniform(4 * hidden, 2);
        let wh1 = uniform(4 * hidden, hidden);
        let b1 = uniform(4 * hidden, 1).column(0).into_owned();
        let wx2 = uniform(4 * hidden, hidden);
        let wh2 = uniform(4 * hidden, hidden);
        let b2 = uniform(4 * hidden, 1).column(0).into_owned();
        L2OWeights {
            hidden,
            wx1,
            wh1,
            b1,
            wx2,
            wh2,
            b2,
            w_alpha: DVector::zeros(hidden),
            b_alpha: 0.0,
            w_beta: DVector::zeros(hidden),
            b_beta: 0.0,
            w_gamma: DVector::zeros(hidden),
            b_gamma: 0.0,
        }
    }

    pub fn zeros(hidden: usize) -> Self {
        L2OWeights {
            hidden,
            wx1: DMatrix::zeros(4 * hidden, 2),
            wh1: DMatrix::zeros(4 * hidden, hidden),
            b1: DVector::zeros(4 * hidden),
            wx2: DMatrix::zeros(4 * hidden, hidden),
            wh2: DMatrix::zeros(4 * hidden, hidden),
            b2: DVector::zeros(4 * hidden),
            w_alpha: DVector::zeros(hidden),
            b_alpha: 0.0,
            w_beta: DVector::zeros(hidden),
            b_beta: 0.0,
            w_gamma: DVector::zeros(hidden),
            b_gamma: 0.0,
        }
    }

    /// Number of scalars in the flattened representation.
    pub fn n_flat(hidden: usize) -> usize {
        let h4 = 4 * hidden;
        h4 * 2 + h4 * hidden + h4 + h4 * hidden + h4 * hidden + h4 + 3 * (hidden + 1)
    }

    /// Column-major concatenation of every weight array, fixed field order.
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(Self::n_flat(self.hidden));
        flat.extend_from_slice(self.wx1.as_slice());
        flat.extend_from_slice(self.wh1.as_slice());
        flat.extend_from_slice(self.b1.as_slice());
        flat.extend_from_slice(self.wx2.as_slice());
        flat.extend_from_slice(self.wh2.as_slice());
        flat.extend_from_slice(self.b2.as_slice());
        flat.extend_from_slice(self.w_alpha.as_slice());
        flat.push(self.b_alpha);
        flat.extend_from_slice(self.w_beta.as_slice());
        flat.push(self.b_beta);
        flat.extend_from_slice(self.w_gamma.as_slice());
        flat.push(self.b_gamma);
        flat
    }

    /// Inverse of [`Self::flatten`].
    pub fn from_flat(hidden: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != Self::n_flat(hidden) {
            return Err(Error::ParamLengthMismatch {
                expected: Self::n_flat(hidden),
                got: flat.len(),
            });
        }
        let h4 = 4 * hidden;
        let mut at = 0usize;
        let mut take = |len: usize| {
            let s = &flat[at..at + len];
            at += len;
            s
        };
        let wx1 = DMatrix::from_column_slice(h4, 2, take(h4 * 2));
        let wh1 = DMatrix::from_column_slice(h4, hidden, take(h4 * hidden));
        let b1 = DVector::from_column_slice(take(h4));
        let wx2 = DMatrix::from_column_slice(h4, hidden, take(h4 * hidden));
        let wh2 = DMatrix::from_column_slice(h4, hidden, take(h4 * hidden));
        let b2 = DVector::from_column_slice(take(h4));
        let w_alpha = DVector::from_column_slice(take(hidden));
        let b_alpha = take(1)[0];
        let w_beta = DVector::from_column_slice(take(hidden));
        let b_beta = take(1)[0];
        let w_gamma = DVector::from_column_slice(take(hidden));
        let b_gamma = take(1)[0];
        Ok(L2OWeights {
            hidden,
            wx1,
            wh1,
            b1,
            wx2,
            wh2,
            b2,
            w_alpha,
            b_alpha,
            w_beta,
            b_beta,
            w_gamma,
            b_gamma,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hidden;
        if h == 0 {
            return Err(Error::InvalidConfig("hidden width must be positive".into()));
        }
        let shapes_ok = self.wx1.shape() == (4 * h, 2)
            && self.wh1.shape() == (4 * h, h)
            && self.b1.len() == 4 * h
            && self.wx2.shape() == (4 * h, h)
            && self.wh2.shape() == (4 * h, h)
            && self.b2.len() == 4 * h
            && self.w_alpha.len() == h
            && self.w_beta.len() == h
            && self.w_gamma.len() == h;
        if !shapes_ok {
            return Err(Error::InvalidConfig(
                "weight array shapes inconsistent with hidden width".into(),
            ));
        }
        if !self.flatten().iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("optimizer weights"));
        }
        Ok(())
    }
}

/// Per-coordinate recurrent state, batched as hidden×P matrices.
#[derive(Debug, Clone)]
pub struct CoordState {
    pub h1: DMatrix<f64>,
    pub c1: DMatrix<f64>,
    pub h2: DMatrix<f64>,
    pub c2: DMatrix<f64>,
}

impl CoordState {
    pub fn zeros(hidden: usize, n_coords: usize) -> Self {
        CoordState {
            h1: DMatrix::zeros(hidden, n_coords),
            c1: DMatrix::zeros(hidden, n_coords),
            h2: DMatrix::zeros(hidden, n_coords),
            c2: DMatrix::zeros(hidden, n_coords),
        }
    }

    pub fn n_coords(&self) -> usize {
        self.h1.ncols()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Two features per coordinate (rows: scaled log-magnitude, sign), with the
/// small-gradient branch rescaled so both channels stay O(1).
pub fn preprocess_grad(grad: &[f64]) -> Result<DMatrix<f64>> {
    if grad.iter().any(|g| g.is_nan()) {
        return Err(Error::NonFinite("gradient features"));
    }
    let threshold = (-CLAMP_P).exp();
    let mut z = DMatrix::zeros(2, grad.len());
    for (k, &g) in grad.iter().enumerate() {
        if g.abs() >= threshold {
            z[(0, k)] = g.abs().ln() / CLAMP_P;
            z[(1, k)] = g.signum();
        } else {
            z[(0, k)] = -1.0;
            z[(1, k)] = CLAMP_P.exp() * g;
        }
    }
    Ok(z)
}

/// Saved activations of one LSTM layer at one step (needed for BPTT).
struct LayerCache {
    x: DMatrix<f64>,
    h_prev: DMatrix<f64>,
    c_prev: DMatrix<f64>,
    i: DMatrix<f64>,
    f: DMatrix<f64>,
    g: DMatrix<f64>,
    o: DMatrix<f64>,
    tanh_c: DMatrix<f64>,
    c: DMatrix<f64>,
    h: DMatrix<f64>,
}

fn layer_forward(
    wx: &DMatrix<f64>,
    wh: &DMatrix<f64>,
    b: &DVector<f64>,
    x: &DMatrix<f64>,
    h_prev: &DMatrix<f64>,
    c_prev: &DMatrix<f64>,
) -> LayerCache {
    let h = h_prev.nrows();
    let mut s = wx * x + wh * h_prev;
    for mut col in s.column_iter_mut() {
        col += b;
    }
    let i = s.rows(0, h).map(sigmoid);
    let f = s.rows(h, h).map(sigmoid);
    let g = s.rows(2 * h, h).map(f64::tanh);
    let o = s.rows(3 * h, h).map(sigmoid);
    let c = f.component_mul(c_prev) + i.component_mul(&g);
    let tanh_c = c.map(f64::tanh);
    let h_out = o.component_mul(&tanh_c);
    LayerCache {
        x: x.clone(),
        h_prev: h_prev.clone(),
        c_prev: c_prev.clone(),
        i,
        f,
        g,
        o,
        tanh_c,
        c,
        h: h_out,
    }
}

/// Reverse pass of one layer; accumulates weight gradients and returns
/// (dx, dh_prev, dc_prev).
#[allow(clippy::too_many_arguments)]
fn layer_backward(
    wx: &DMatrix<f64>,
    wh: &DMatrix<f64>,
    cache: &LayerCache,
    dh: &DMatrix<f64>,
    dc_carry: &DMatrix<f64>,
    gwx: &mut DMatrix<f64>,
    gwh: &mut DMatrix<f64>,
    gb: &mut DVector<f64>,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let h = cache.h_prev.nrows();
    let p = dh.ncols();
    let so = dh
        .component_mul(&cache.tanh_c)
        .zip_map(&cache.o, |d, o| d * o * (1.0 - o));
    let dc = dh
        .component_mul(&cache.o)
        .zip_map(&cache.tanh_c, |d, t| d * (1.0 - t * t))
        + dc_carry;
    let si = dc
        .component_mul(&cache.g)
        .zip_map(&cache.i, |d, i| d * i * (1.0 - i));
    let sg = dc
        .component_mul(&cache.i)
        .zip_map(&cache.g, |d, g| d * (1.0 - g * g));
    let sf = dc
        .component_mul(&cache.c_prev)
        .zip_map(&cache.f, |d, f| d * f * (1.0 - f));
    let dc_prev = dc.component_mul(&cache.f);

    let mut stack = DMatrix::zeros(4 * h, p);
    stack.view_mut((0, 0), (h, p)).copy_from(&si);
    stack.view_mut((h, 0), (h, p)).copy_from(&sf);
    stack.view_mut((2 * h, 0), (h, p)).copy_from(&sg);
    stack.view_mut((3 * h, 0), (h, p)).copy_from(&so);

    *gwx += &stack * cache.x.transpose();
    *gwh += &stack * cache.h_prev.transpose();
    *gb += stack.column_sum();
    let dx = wx.transpose() * &stack;
    let dh_prev = wh.transpose() * &stack;
    (dx, dh_prev, dc_prev)
}

/// Head outputs for every coordinate plus the advanced recurrent state.
#[derive(Debug, Clone)]
pub struct CellOutput {
    pub alpha: DVector<f64>,
    pub beta: DVector<f64>,
    /// Blend coefficients, strictly inside (0, 1) by construction.
    pub gamma: DVector<f64>,
    pub state: CoordState,
}

struct CellCaches {
    l1: LayerCache,
    l2: LayerCache,
}

fn head(w: &DVector<f64>, b: f64, h: &DMatrix<f64>) -> DVector<f64> {
    (h.transpose() * w).add_scalar(b)
}

fn cell_forward(
    weights: &L2OWeights,
    z: &DMatrix<f64>,
    state: &CoordState,
) -> Result<(CellOutput, CellCaches)> {
    weights.validate()?;
    let h = weights.hidden;
    let p = z.ncols();
    if z.nrows() != 2 {
        return Err(Error::DimensionMismatch {
            left: z.nrows(),
            right: 2,
        });
    }
    if state.h1.shape() != (h, p) {
        return Err(Error::DimensionMismatch {
            left: state.h1.ncols(),
            right: p,
        });
    }
    let l1 = layer_forward(&weights.wx1, &weights.wh1, &weights.b1, z, &state.h1, &state.c1);
    let l2 = layer_forward(
        &weights.wx2,
        &weights.wh2,
        &weights.b2,
        &l1.h,
        &state.h2,
        &state.c2,
    );
    let alpha = head(&weights.w_alpha, weights.b_alpha, &l2.h);
    let beta = head(&weights.w_beta, weights.b_beta, &l2.h);
    let gamma = head(&weights.w_gamma, weights.b_gamma, &l2.h).map(sigmoid);
    let out = CellOutput {
        alpha,
        beta,
        gamma,
        state: CoordState {
            h1: l1.h.clone(),
            c1: l1.c.clone(),
            h2: l2.h.clone(),
            c2: l2.c.clone(),
        },
    };
    Ok((out, CellCaches { l1, l2 }))
}

/// One coordinate-wise recurrent step: identical weights applied to every
/// coordinate independently.
pub fn l2o_cell(
    weights: &L2OWeights,
    z: &DMatrix<f64>,
    state: &CoordState,
) -> Result<CellOutput> {
    cell_forward(weights, z, state).map(|(out, _)| out)
}

/// Pieces of one update, kept for the reverse pass.
struct UpdateParts {
    eta: DVector<f64>,
    v: DVector<f64>,
    gv: DVector<f64>,
    bv: DVector<f64>,
}

fn update_parts(
    alpha: &DVector<f64>,
    beta: &DVector<f64>,
    gamma: &DVector<f64>,
    g_pinv: Option<&DMatrix<f64>>,
) -> UpdateParts {
    let v = beta * LAMBDA_A;
    let gv = match g_pinv {
        Some(g) => g * &v,
        None => v.clone(),
    };
    let bv = gv.zip_zip_map(&v, gamma, |gv, v, g| (1.0 - g) * gv + g * v);
    let eta = alpha.map(|a| (LAMBDA_B * a).exp());
    UpdateParts { eta, v, gv, bv }
}

/// Blended preconditioned update θ' = θ − exp(λ_b·α) ∘ B·(λ_a·β), with
/// `g_pinv = None` meaning the identity preconditioner.
///
/// Errors with a non-finite report if the update leaves the finite range,
/// which unrolling treats as trajectory divergence.
pub fn l2o_update(
    theta: &[f64],
    alpha: &DVector<f64>,
    beta: &DVector<f64>,
    gamma: &DVector<f64>,
    g_pinv: Option<&DMatrix<f64>>,
) -> Result<Vec<f64>> {
    let p = theta.len();
    if alpha.len() != p || beta.len() != p || gamma.len() != p {
        return Err(Error::ParamLengthMismatch {
            expected: p,
            got: alpha.len(),
        });
    }
    if let Some(g) = g_pinv {
        if g.nrows() != p || g.ncols() != p {
            return Err(Error::DimensionMismatch {
                left: g.nrows(),
                right: p,
            });
        }
    }
    let parts = update_parts(alpha, beta, gamma, g_pinv);
    let next: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(k, t)| t - parts.eta[k] * parts.bv[k])
        .collect();
    if next.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("parameter update"));
    }
    Ok(next)
}

/// One unrolled optimization run of the learned optimizer.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// θ_0..θ_T (shorter if the run diverged).
    pub thetas: Vec<Vec<f64>>,
    /// C(θ_t) for every retained θ_t.
    pub losses: Vec<f64>,
    /// Σ_t w_t·C(θ_t) over t = 1..T, +∞ when diverged.
    pub outer_loss: f64,
    pub wall_ms: Vec<f64>,
    pub diverged: bool,
    /// How many times the metric tensor was evaluated.
    pub metric_calls: usize,
}

/// Everything the reverse pass needs from one step.
struct StepCache {
    l1: LayerCache,
    l2: LayerCache,
    gamma: DVector<f64>,
    eta: DVector<f64>,
    v: DVector<f64>,
    gv: DVector<f64>,
    bv: DVector<f64>,
    g_pinv: Option<DMatrix<f64>>,
}

struct TapeForward {
    trajectory: Trajectory,
    steps: Vec<StepCache>,
    /// ∇C(θ_t) for t = 0..=T (only 0..T-1 when diverged early).
    cost_grads: Vec<Vec<f64>>,
    /// Recurrent state after the last completed step, for window chaining.
    final_state: CoordState,
}

fn unroll_weight(w_t: Option<&[f64]>, t: usize) -> f64 {
    w_t.map(|w| w[t]).unwrap_or(1.0)
}

fn forward_pass(
    task: &Task,
    theta0: &[f64],
    t_steps: usize,
    weights: &L2OWeights,
    mode: PrecondMode,
    w_t: Option<&[f64]>,
    init_state: Option<&CoordState>,
    keep_tape: bool,
) -> Result<TapeForward> {
    if t_steps == 0 {
        return Err(Error::InvalidConfig("unroll length must be at least 1".into()));
    }
    if let Some(w) = w_t {
        if w.len() < t_steps {
            return Err(Error::InvalidConfig(format!(
                "unroll weights cover {} steps, need {t_steps}",
                w.len()
            )));
        }
    }
    weights.validate()?;
    let p = task.n_params();
    if theta0.len() != p {
        return Err(Error::ParamLengthMismatch {
            expected: p,
            got: theta0.len(),
        });
    }

    let mut trajectory = Trajectory {
        thetas: vec![theta0.to_vec()],
        losses: Vec::with_capacity(t_steps + 1),
        outer_loss: 0.0,
        wall_ms: Vec::with_capacity(t_steps),
        diverged: false,
        metric_calls: 0,
    };
    let mut steps = Vec::new();
    let mut cost_grads = Vec::new();

    let mut state = match init_state {
        Some(s) => {
            if s.n_coords() != p || s.h1.nrows() != weights.hidden {
                return Err(Error::InvalidConfig(
                    "carried recurrent state does not match the task or hidden width".into(),
                ));
            }
            s.clone()
        }
        None => CoordState::zeros(weights.hidden, p),
    };

    let initial = task.loss(theta0)?;
    if !initial.is_finite() {
        trajectory.diverged = true;
        trajectory.outer_loss = f64::INFINITY;
        return Ok(TapeForward {
            trajectory,
            steps,
            cost_grads,
            final_state: state,
        });
    }
    trajectory.losses.push(initial);

    let mut theta = theta0.to_vec();

    for t in 0..t_steps {
        let started = Instant::now();
        let grad = param_shift_grad(task, &theta)?;
        if grad.iter().any(|g| !g.is_finite()) {
            trajectory.diverged = true;
            break;
        }
        if keep_tape {
            cost_grads.push(grad.clone());
        }
        let z = preprocess_grad(&grad)?;
        let (out, caches) = cell_forward(weights, &z, &state)?;
        let finite_cell = out.alpha.iter().all(|v| v.is_finite())
            && out.beta.iter().all(|v| v.is_finite())
            && out.gamma.iter().all(|v| v.is_finite());
        if !finite_cell {
            trajectory.diverged = true;
            break;
        }
        let g_pinv = match mode {
            PrecondMode::Full => {
                trajectory.metric_calls += 1;
                let g = task_metric(task, &theta)?;
                Some(pinv_psd(&g, PINV_CUTOFF)?)
            }
            PrecondMode::IdentityPrecond => None,
        };
        let parts = update_parts(&out.alpha, &out.beta, &out.gamma, g_pinv.as_ref());
        let next: Vec<f64> = theta
            .iter()
            .enumerate()
            .map(|(k, v)| v - parts.eta[k] * parts.bv[k])
            .collect();
        state = out.state;
        if keep_tape {
            steps.push(StepCache {
                l1: caches.l1,
                l2: caches.l2,
                gamma: out.gamma,
                eta: parts.eta,
                v: parts.v,
                gv: parts.gv,
                bv: parts.bv,
                g_pinv,
            });
        }
        if next.iter().any(|v| !v.is_finite()) {
            trajectory.diverged = true;
            break;
        }
        theta = next;
        let loss = task.loss(&theta)?;
        trajectory.wall_ms.push(started.elapsed().as_secs_f64() * 1e3);
        if !loss.is_finite() {
            trajectory.diverged = true;
            break;
        }
        trajectory.thetas.push(theta.clone());
        trajectory.losses.push(loss);
        trajectory.outer_loss += unroll_weight(w_t, t) * loss;
    }

    if trajectory.diverged {
        trajectory.outer_loss = f64::INFINITY;
    } else if keep_tape {
        // Direct outer-loss terms also need ∇C at the final iterate.
        let grad = param_shift_grad(task, &theta)?;
        if grad.iter().all(|g| g.is_finite()) {
            cost_grads.push(grad);
        } else {
            trajectory.diverged = true;
            trajectory.outer_loss = f64::INFINITY;
        }
    }
    Ok(TapeForward {
        trajectory,
        steps,
        cost_grads,
        final_state: state,
    })
}

/// Run the learned optimizer for `t_steps` updates.
///
/// `w_t` weights the outer loss Σ w_t·C(θ_t) (ones when omitted). Identity
/// mode never touches the metric; the trajectory counts metric calls so
/// that contract is checkable.
pub fn unroll(
    task: &Task,
    theta0: &[f64],
    t_steps: usize,
    weights: &L2OWeights,
    mode: PrecondMode,
    w_t: Option<&[f64]>,
) -> Result<Trajectory> {
    forward_pass(task, theta0, t_steps, weights, mode, w_t, None, false).map(|f| f.trajectory)
}

/// Meta-gradient of the outer loss with respect to every weight.
#[derive(Debug)]
pub struct MetaGradResult {
    pub trajectory: Trajectory,
    /// `None` when the trajectory diverged (no usable gradient).
    pub grad: Option<L2OWeights>,
    /// Recurrent state after the window, for truncated-BPTT chaining.
    /// `None` when the trajectory diverged.
    pub final_state: Option<CoordState>,
}

/// Reverse-mode tape through the unrolled update arithmetic, cell, and
/// heads, with ∇C(θ_t) and the preconditioner held constant.
///
/// `init_state` carries the recurrent state across truncation windows; the
/// tape treats it as a constant, so no gradient flows across the boundary.
pub fn meta_grad(
    task: &Task,
    theta0: &[f64],
    t_steps: usize,
    weights: &L2OWeights,
    mode: PrecondMode,
    w_t: Option<&[f64]>,
    init_state: Option<&CoordState>,
) -> Result<MetaGradResult> {
    let fwd = forward_pass(task, theta0, t_steps, weights, mode, w_t, init_state, true)?;
    if fwd.trajectory.diverged {
        return Ok(MetaGradResult {
            trajectory: fwd.trajectory,
            grad: None,
            final_state: None,
        });
    }
    let h = weights.hidden;
    let p = task.n_params();
    let t_n = fwd.steps.len();
    let mut gw = L2OWeights::zeros(h);

    // θ̄_T = w_T·∇C(θ_T); earlier direct terms join as the loop walks back.
    let mut theta_bar =
        DVector::from_column_slice(&fwd.cost_grads[t_n]) * unroll_weight(w_t, t_n - 1);
    let mut dh1 = DMatrix::zeros(h, p);
    let mut dc1 = DMatrix::zeros(h, p);
    let mut dh2 = DMatrix::zeros(h, p);
    let mut dc2 = DMatrix::zeros(h, p);

    for t in (0..t_n).rev() {
        let sc = &fwd.steps[t];
        // θ_{t+1} = θ_t − η ∘ Bv.
        let eta_bar = -theta_bar.component_mul(&sc.bv);
        let bv_bar = -theta_bar.component_mul(&sc.eta);
        let alpha_bar = eta_bar.component_mul(&sc.eta) * LAMBDA_B;
        let gamma_bar = bv_bar.component_mul(&(&sc.v - &sc.gv));
        let v_bar = match &sc.g_pinv {
            Some(g) => {
                let through_metric = bv_bar.zip_map(&sc.gamma, |b, g_| b * (1.0 - g_));
                g.transpose() * through_metric + bv_bar.component_mul(&sc.gamma)
            }
            None => bv_bar.clone(),
        };
        let beta_bar = v_bar * LAMBDA_A;

        let s_alpha = alpha_bar;
        let s_beta = beta_bar;
        let s_gamma = gamma_bar.zip_map(&sc.gamma, |d, g| d * g * (1.0 - g));

        gw.w_alpha += &sc.l2.h * &s_alpha;
        gw.b_alpha += s_alpha.sum();
        gw.w_beta += &sc.l2.h * &s_beta;
        gw.b_beta += s_beta.sum();
        gw.w_gamma += &sc.l2.h * &s_gamma;
        gw.b_gamma += s_gamma.sum();

        let dh2_total = &weights.w_alpha * s_alpha.transpose()
            + &weights.w_beta * s_beta.transpose()
            + &weights.w_gamma * s_gamma.transpose()
            + &dh2;
        let (dx2, dh2_prev, dc2_prev) = layer_backward(
            &weights.wx2,
            &weights.wh2,
            &sc.l2,
            &dh2_total,
            &dc2,
            &mut gw.wx2,
            &mut gw.wh2,
            &mut gw.b2,
        );
        let dh1_total = dx2 + &dh1;
        let (_dz, dh1_prev, dc1_prev) = layer_backward(
            &weights.wx1,
            &weights.wh1,
            &sc.l1,
            &dh1_total,
            &dc1,
            &mut gw.wx1,
            &mut gw.wh1,
            &mut gw.b1,
        );
        dh2 = dh2_prev;
        dc2 = dc2_prev;
        dh1 = dh1_prev;
        dc1 = dc1_prev;

        if t > 0 {
            theta_bar +=
                DVector::from_column_slice(&fwd.cost_grads[t]) * unroll_weight(w_t, t - 1);
        }
    }

    Ok(MetaGradResult {
        trajectory: fwd.trajectory,
        grad: Some(gw),
        final_state: Some(fwd.final_state),
    })
}

/// The detached computation recorded from a base unroll: features, frozen
/// preconditioners, and the cost-gradient linearization vectors.
///
/// [`FrozenTape::surrogate_loss`] replays the unroll with arbitrary weights
/// against these frozen inputs; its exact derivative at the recording
/// weights equals [`meta_grad`], making it the right target for
/// finite-difference validation of the tape.
pub struct FrozenTape {
    hidden: usize,
    theta0: Vec<f64>,
    init_state: CoordState,
    w: Vec<f64>,
    z: Vec<DMatrix<f64>>,
    g: Vec<Option<DMatrix<f64>>>,
    c: Vec<Vec<f64>>,
}

/// Record the frozen inputs of one unroll (errors if it diverges).
pub fn record_tape(
    task: &Task,
    theta0: &[f64],
    t_steps: usize,
    weights: &L2OWeights,
    mode: PrecondMode,
    w_t: Option<&[f64]>,
    init_state: Option<&CoordState>,
) -> Result<FrozenTape> {
    let fwd = forward_pass(task, theta0, t_steps, weights, mode, w_t, init_state, true)?;
    if fwd.trajectory.diverged {
        return Err(Error::MetaTraining(
            "cannot freeze a diverged trajectory".into(),
        ));
    }
    Ok(FrozenTape {
        hidden: weights.hidden,
        theta0: theta0.to_vec(),
        init_state: init_state
            .cloned()
            .unwrap_or_else(|| CoordState::zeros(weights.hidden, theta0.len())),
        w: (0..t_steps).map(|t| unroll_weight(w_t, t)).collect(),
        z: fwd.steps.iter().map(|s| s.l1.x.clone()).collect(),
        g: fwd.steps.iter().map(|s| s.g_pinv.clone()).collect(),
        c: fwd.cost_grads[1..].to_vec(),
    })
}

impl FrozenTape {
    /// Σ_t w_t·⟨∇C(θ_t^base), θ_t(weights)⟩ with all θ-dependent inputs
    /// frozen at the recording run.
    pub fn surrogate_loss(&self, weights: &L2OWeights) -> Result<f64> {
        if weights.hidden != self.hidden {
            return Err(Error::InvalidConfig(
                "weights hidden width differs from the recorded tape".into(),
            ));
        }
        let mut state = self.init_state.clone();
        let mut theta = self.theta0.clone();
        let mut total = 0.0;
        for t in 0..self.z.len() {
            let out = l2o_cell(weights, &self.z[t], &state)?;
            state = out.state.clone();
            theta = l2o_update(&theta, &out.alpha, &out.beta, &out.gamma, self.g[t].as_ref())?;
            total += self.w[t]
                * self.c[t]
                    .iter()
                    .zip(&theta)
                    .map(|(c, th)| c * th)
                    .sum::<f64>();
        }
        Ok(total)
    }
}

/// Curriculum meta-training settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetaConfig {
    /// Strictly increasing unroll lengths, one stage each.
    pub schedule: Vec<usize>,
    pub trajectories_per_stage: usize,
    /// Optimizee steps per training trajectory. Each trajectory is split
    /// into truncation windows of the stage's unroll length; the backward
    /// pass and meta-update fire after every window, with θ and the
    /// recurrent state carried (detached) across the boundary.
    pub trajectory_len: usize,
    pub meta_lr: f64,
    pub hidden: usize,
    /// Held-out θ₀ streams for validation (namespaced apart from training).
    pub validation_seeds: Vec<u64>,
    /// Outer-loss weights w_t; `None` means all ones.
    pub unroll_weights: Option<Vec<f64>>,
    /// Global-norm clip applied to the meta-gradient before each Adam step.
    /// Long unrolls produce heavy-tailed gradient norms that would otherwise
    /// poison the second-moment estimate; `None` disables clipping.
    pub grad_clip: Option<f64>,
    pub mode: PrecondMode,
    /// Treat ∇C(θ_t) as constant w.r.t. the weights. Only `true` is
    /// implemented; the flag is recorded so the alternative stays testable.
    pub detach_cost_grad: bool,
    /// Same, for the metric pseudo-inverse.
    pub detach_metric: bool,
}

impl Default for MetaConfig {
    fn default() -> Self {
        MetaConfig {
            schedule: vec![10, 20, 40, 60, 80],
            trajectories_per_stage: 20,
            trajectory_len: 200,
            meta_lr: 1e-3,
            hidden: 20,
            validation_seeds: vec![1, 2, 3, 4, 5],
            unroll_weights: None,
            grad_clip: Some(1.0),
            mode: PrecondMode::Full,
            detach_cost_grad: true,
            detach_metric: true,
        }
    }
}

impl MetaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(Error::InvalidConfig("empty unroll schedule".into()));
        }
        if self.schedule[0] == 0 || self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "unroll schedule must be positive and strictly increasing".into(),
            ));
        }
        if self.trajectories_per_stage == 0 {
            return Err(Error::InvalidConfig(
                "need at least one trajectory per stage".into(),
            ));
        }
        if self.trajectory_len == 0 {
            return Err(Error::InvalidConfig(
                "trajectories need at least one step".into(),
            ));
        }
        if !(self.meta_lr > 0.0) {
            return Err(Error::InvalidConfig("meta learning rate must be positive".into()));
        }
        if self.hidden == 0 {
            return Err(Error::InvalidConfig("hidden width must be positive".into()));
        }
        if self.validation_seeds.is_empty() {
            return Err(Error::InvalidConfig("need at least one validation seed".into()));
        }
        if let Some(clip) = self.grad_clip {
            if !(clip > 0.0) {
                return Err(Error::InvalidConfig(
                    "gradient clip must be positive when set".into(),
                ));
            }
        }
        let max_t = *self.schedule.last().expect("nonempty");
        if let Some(w) = &self.unroll_weights {
            if w.len() < max_t {
                return Err(Error::InvalidConfig(format!(
                    "unroll weights cover {} steps, schedule needs {max_t}",
                    w.len()
                )));
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("unroll weights"));
            }
        }
        if !self.detach_cost_grad || !self.detach_metric {
            return Err(Error::InvalidConfig(
                "only the fully detached meta-gradient policy is implemented".into(),
            ));
        }
        Ok(())
    }

    /// Stable hash of the serialized config, stored in checkpoints.
    pub fn hash(&self) -> u64 {
        let text = serde_json::to_string(self).expect("config serializes");
        seeds::fnv1a(text.as_bytes())
    }
}

/// Per-stage training record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageLog {
    pub unroll_len: usize,
    /// Outer loss of every trajectory in order (+∞ where skipped).
    pub outer_losses: Vec<f64>,
    pub skipped: usize,
    /// Unroll length used for the validation pass after this stage.
    pub validation_len: usize,
    /// Per-validation-seed outer losses of the stage-end weights.
    pub validation: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainLog {
    pub stages: Vec<StageLog>,
    pub stopped_early: bool,
    /// Stage whose weights were returned.
    pub best_stage: usize,
}

/// Held-out validation outer losses of a checkpoint, one per validation
/// seed, exactly as the stage-end evaluation inside [`meta_train`] computes
/// them: θ₀ drawn per seed, one `len`-step unroll, outer loss recorded.
pub fn validation_losses(
    task: &Task,
    weights: &L2OWeights,
    len: usize,
    cfg: &MetaConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    let p = task.n_params();
    cfg.validation_seeds
        .iter()
        .map(|&s| {
            let mut rng = seeds::rng(seed, &["meta", "val"], &[s]);
            let theta0 = random_theta(p, &mut rng);
            let traj = unroll(
                task,
                &theta0,
                len,
                weights,
                cfg.mode,
                cfg.unroll_weights.as_deref(),
            )?;
            Ok(traj.outer_loss)
        })
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Curriculum meta-training with validation-based early stopping.
///
/// Every stage runs `trajectories_per_stage` optimizee trajectories (fresh
/// seeded θ₀ each, `trajectory_len` steps) as truncated backprop through
/// time: the trajectory splits into windows of the stage's unroll length and
/// each window ends with one Adam step on the flattened weights, carrying θ
/// and the recurrent state (detached) across the boundary. After a stage the
/// held-out validation outer losses are measured at the next stage's unroll
/// length. Training stops once no validation seed improves on the previous
/// stage's weights, comparing both at the same length; the best snapshot by
/// matched-length mean validation loss is returned.
pub fn meta_train(task: &Task, cfg: &MetaConfig, seed: u64) -> Result<(L2OWeights, TrainLog)> {
    cfg.validate()?;
    let p = task.n_params();
    let mut weights = L2OWeights::init(cfg.hidden, seed);
    let mut adam = BaselineConfig::new(BaselineKind::Adam);
    adam.lr = cfg.meta_lr;
    let mut adam_state = OptState::new(L2OWeights::n_flat(cfg.hidden));

    let last_len = *cfg.schedule.last().expect("nonempty schedule");
    let mut stages: Vec<StageLog> = Vec::new();
    let mut best: Option<L2OWeights> = None;
    let mut best_stage = 0usize;
    let mut prev_weights: Option<L2OWeights> = None;
    let mut stopped_early = false;

    for (stage, &t_len) in cfg.schedule.iter().enumerate() {
        let mut outer_losses = Vec::with_capacity(cfg.trajectories_per_stage);
        let mut skipped = 0usize;
        for traj_idx in 0..cfg.trajectories_per_stage {
            let mut rng = seeds::rng(seed, &["meta", "traj"], &[stage as u64, traj_idx as u64]);
            let mut theta = random_theta(p, &mut rng);
            let mut state: Option<CoordState> = None;
            let mut traj_outer = 0.0;
            let mut remaining = cfg.trajectory_len;
            // Truncated BPTT: unroll one window, update φ, then continue
            // the same optimizee run with the carried (detached) state.
            while remaining > 0 {
                let window = t_len.min(remaining);
                let result = meta_grad(
                    task,
                    &theta,
                    window,
                    &weights,
                    cfg.mode,
                    cfg.unroll_weights.as_deref(),
                    state.as_ref(),
                )?;
                match result.grad {
                    Some(grad) => {
                        let mut flat_grad = grad.flatten();
                        if let Some(clip) = cfg.grad_clip {
                            let norm = flat_grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                            if norm > clip {
                                let scale = clip / norm;
                                for g in &mut flat_grad {
                                    *g *= scale;
                                }
                            }
                        }
                        let mut flat = weights.flatten();
                        baseline_step(&adam, &mut adam_state, &mut flat, &flat_grad, None)?;
                        weights = L2OWeights::from_flat(cfg.hidden, &flat)?;
                        traj_outer += result.trajectory.outer_loss;
                        theta = result
                            .trajectory
                            .thetas
                            .last()
                            .expect("non-diverged window has iterates")
                            .clone();
                        state = result.final_state;
                        remaining -= window;
                    }
                    None => {
                        traj_outer = f64::INFINITY;
                        skipped += 1;
                        break;
                    }
                }
            }
            outer_losses.push(traj_outer);
        }
        if skipped == cfg.trajectories_per_stage {
            return Err(Error::MetaTraining(format!(
                "all {skipped} trajectories diverged in stage {stage} (unroll length {t_len})"
            )));
        }

        let val_len = cfg.schedule.get(stage + 1).copied().unwrap_or(last_len);
        let current_val = validation_losses(task, &weights, val_len, cfg, seed)?;

        match &best {
            None => {
                best = Some(weights.clone());
                best_stage = stage;
            }
            Some(b) => {
                let best_val = validation_losses(task, b, val_len, cfg, seed)?;
                if mean(&current_val) < mean(&best_val) {
                    best = Some(weights.clone());
                    best_stage = stage;
                }
            }
        }

        let mut stop = false;
        if let Some(prev) = &prev_weights {
            let prev_val = validation_losses(task, prev, val_len, cfg, seed)?;
            stop = !current_val
                .iter()
                .zip(&prev_val)
                .any(|(cur, prev)| cur < prev);
        }

        stages.push(StageLog {
            unroll_len: t_len,
            outer_losses,
            skipped,
            validation_len: val_len,
            validation: current_val,
        });

        if stop {
            stopped_early = true;
            break;
        }
        prev_weights = Some(weights.clone());
    }

    let final_weights = best.expect("at least one stage ran");
    Ok((
        final_weights,
        TrainLog {
            stages,
            stopped_early,
            best_stage,
        },
    ))
}

/// On-disk checkpoint layout (version 1). Matrices are stored column-major.
#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    version: u32,
    hidden: usize,
    lstm_layers: usize,
    lambda_a: f64,
    lambda_b: f64,
    clamp_p: f64,
    detach_cost_grad: bool,
    detach_metric: bool,
    config_hash: u64,
    wx1: Vec<f64>,
    wh1: Vec<f64>,
    b1: Vec<f64>,
    wx2: Vec<f64>,
    wh2: Vec<f64>,
    b2: Vec<f64>,
    w_alpha: Vec<f64>,
    b_alpha: f64,
    w_beta: Vec<f64>,
    b_beta: f64,
    w_gamma: Vec<f64>,
    b_gamma: f64,
}

/// Write a versioned checkpoint; round trips are bit-exact.
pub fn save_checkpoint(weights: &L2OWeights, path: &Path, config_hash: u64) -> Result<()> {
    weights.validate()?;
    let file = CheckpointFile {
        version: CHECKPOINT_VERSION,
        hidden: weights.hidden,
        lstm_layers: 2,
        lambda_a: LAMBDA_A,
        lambda_b: LAMBDA_B,
        clamp_p: CLAMP_P,
        detach_cost_grad: true,
        detach_metric: true,
        config_hash,
        wx1: weights.wx1.as_slice().to_vec(),
        wh1: weights.wh1.as_slice().to_vec(),
        b1: weights.b1.as_slice().to_vec(),
        wx2: weights.wx2.as_slice().to_vec(),
        wh2: weights.wh2.as_slice().to_vec(),
        b2: weights.b2.as_slice().to_vec(),
        w_alpha: weights.w_alpha.as_slice().to_vec(),
        b_alpha: weights.b_alpha,
        w_beta: weights.w_beta.as_slice().to_vec(),
        b_beta: weights.b_beta,
        w_gamma: weights.w_gamma.as_slice().to_vec(),
        b_gamma: weights.b_gamma,
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::json(path.display().to_string(), e))?;
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load a checkpoint, distinguishing missing files, parse failures, and
/// version mismatches.
pub fn load_checkpoint(path: &Path) -> Result<L2OWeights> {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::CheckpointMissing(path.display().to_string()))
        }
        Err(e) => return Err(Error::io(path.display().to_string(), e)),
    };
    let file: CheckpointFile =
        serde_json::from_str(&text).map_err(|e| Error::CheckpointCorrupt {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
    if file.version != CHECKPOINT_VERSION {
        return Err(Error::CheckpointVersion {
            expected: CHECKPOINT_VERSION,
            found: file.version,
        });
    }
    let corrupt = |msg: &str| Error::CheckpointCorrupt {
        path: path.display().to_string(),
        msg: msg.to_string(),
    };
    if file.lstm_layers != 2 {
        return Err(corrupt("unsupported layer count"));
    }
    let h = file.hidden;
    let h4 = 4 * h;
    let shapes_ok = h > 0
        && file.wx1.len() == h4 * 2
        && file.wh1.len() == h4 * h
        && file.b1.len() == h4
        && file.wx2.len() == h4 * h
        && file.wh2.len() == h4 * h
        && file.b2.len() == h4
        && file.w_alpha.len() == h
        && file.w_beta.len() == h
        && file.w_gamma.len() == h;
    if !shapes_ok {
        return Err(corrupt("weight array lengths inconsistent with hidden width"));
    }
    let weights = L2OWeights {
        hidden: h,
        wx1: DMatrix::from_column_slice(h4, 2, &file.wx1),
        wh1: DMatrix::from_column_slice(h4, h, &file.wh1),
        b1: DVector::from_column_slice(&file.b1),
        wx2: DMatrix::from_column_slice(h4, h, &file.wx2),
        wh2: DMatrix::from_column_slice(h4, h, &file.wh2),
        b2: DVector::from_column_slice(&file.b2),
        w_alpha: DVector::from_column_slice(&file.w_alpha),
        b_alpha: file.b_alpha,
        w_beta: DVector::from_column_slice(&file.w_beta),
        b_beta: file.b_beta,
        w_gamma: DVector::from_column_slice(&file.w_gamma),
        b_gamma: file.b_gamma,
    };
    weights
        .validate()
        .map_err(|_| corrupt("non-finite or misshapen weights"))?;
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::build_random_pqc;
    use proptest::prelude::*;
    use rand::Rng;

    /// Init plus randomized heads so updates actually move.
    fn test_weights(hidden: usize, seed: u64) -> L2OWeights {
        let mut w = L2OWeights::init(hidden, seed);
        let mut rng = seeds::rng(seed, &["l2o", "test_heads"], &[]);
        for v in w
            .w_alpha
            .iter_mut()
            .chain(w.w_beta.iter_mut())
            .chain(w.w_gamma.iter_mut())
        {
            *v = rng.gen_range(-0.3..0.3);
        }
        w.b_alpha = rng.gen_range(-0.3..0.3);
        w.b_beta = rng.gen_range(-0.3..0.3);
        w.b_gamma = rng.gen_range(-0.3..0.3);
        w
    }

    #[test]
    fn preprocessing_matches_branch_definitions() {
        let z = preprocess_grad(&[1.0, 0.0, -(10.0f64).exp()]).unwrap();
        assert!((z[(0, 0)] - 0.0).abs() < 1e-15 && (z[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((z[(0, 1)] + 1.0).abs() < 1e-15 && z[(1, 1)].abs() < 1e-15);
        assert!((z[(0, 2)] - 1.0).abs() < 1e-12 && (z[(1, 2)] + 1.0).abs() < 1e-15);

        // Exactly at the threshold the log branch applies.
        let at = (-10.0f64).exp();
        let z = preprocess_grad(&[at, at * 0.99]).unwrap();
        assert!((z[(0, 0)] + 1.0).abs() < 1e-12);
        assert!((z[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((z[(0, 1)] + 1.0).abs() < 1e-15);
        assert!((z[(1, 1)] - 0.99).abs() < 1e-12);

        assert!(preprocess_grad(&[f64::NAN]).is_err());
    }

    #[test]
    fn zero_weights_give_neutral_cell_outputs() {
        let w = L2OWeights::zeros(4);
        let state = CoordState::zeros(4, 3);
        let z = DMatrix::zeros(2, 3);
        let out = l2o_cell(&w, &z, &state).unwrap();
        assert!(out.alpha.iter().all(|&v| v == 0.0));
        assert!(out.beta.iter().all(|&v| v == 0.0));
        assert!(out.gamma.iter().all(|&g| (g - 0.5).abs() < 1e-15));
        assert!(out.state.h1.iter().all(|&v| v == 0.0));
        assert!(out.state.c2.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cell_and_update_are_coordinate_equivariant() {
        let w = test_weights(5, 3);
        let p = 4;
        let mut rng = seeds::rng(3, &["equivariance"], &[]);
        let z = DMatrix::from_fn(2, p, |_, _| rng.gen_range(-1.0..1.0));
        let raw = DMatrix::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
        let g_pinv = &raw * raw.transpose();
        let theta: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let perm = [2usize, 0, 3, 1];

        // Two cell steps so the recurrent state participates.
        let state0 = CoordState::zeros(5, p);
        let step1 = l2o_cell(&w, &z, &state0).unwrap();
        let out = l2o_cell(&w, &z, &step1.state).unwrap();
        let next = l2o_update(&theta, &out.alpha, &out.beta, &out.gamma, Some(&g_pinv)).unwrap();

        let z_p = DMatrix::from_fn(2, p, |r, c| z[(r, perm[c])]);
        let g_p = DMatrix::from_fn(p, p, |r, c| g_pinv[(perm[r], perm[c])]);
        let theta_p: Vec<f64> = perm.iter().map(|&k| theta[k]).collect();
        let step1_p = l2o_cell(&w, &z_p, &state0).unwrap();
        let out_p = l2o_cell(&w, &z_p, &step1_p.state).unwrap();
        let next_p =
            l2o_update(&theta_p, &out_p.alpha, &out_p.beta, &out_p.gamma, Some(&g_p)).unwrap();

        for (c, &k) in perm.iter().enumerate() {
            assert!((next_p[c] - next[k]).abs() < 1e-12);
            assert!((out_p.gamma[c] - out.gamma[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn update_scalar_example() {
        let theta = [0.0];
        let alpha = DVector::from_vec(vec![0.0]);
        let beta = DVector::from_vec(vec![1.0]);
        let gamma = DVector::from_vec(vec![0.5]);
        let g = DMatrix::from_element(1, 1, 4.0);
        let next = l2o_update(&theta, &alpha, &beta, &gamma, Some(&g)).unwrap();
        assert!((next[0] + 0.025).abs() < 1e-15, "{}", next[0]);
    }

    #[test]
    fn gamma_saturation_matches_identity_mode() {
        let task = build_random_pqc(2, 1, 4).unwrap();
        let mut w = test_weights(4, 9);
        w.w_gamma.fill(0.0);
        w.b_gamma = 50.0; // γ = σ(50) ≈ 1
        let mut rng = seeds::rng(9, &["limit"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let full = unroll(&task, &theta0, 3, &w, PrecondMode::Full, None).unwrap();
        let ident = unroll(&task, &theta0, 3, &w, PrecondMode::IdentityPrecond, None).unwrap();
        for (a, b) in full.thetas.last().unwrap().iter().zip(ident.thetas.last().unwrap()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn unroll_contracts() {
        let task = build_random_pqc(2, 1, 5).unwrap();
        let w = test_weights(4, 5);
        let mut rng = seeds::rng(5, &["unroll"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);

        let t1 = unroll(&task, &theta0, 1, &w, PrecondMode::Full, None).unwrap();
        assert!((t1.outer_loss - t1.losses[1]).abs() < 1e-15);

        let t4 = unroll(&task, &theta0, 4, &w, PrecondMode::Full, None).unwrap();
        assert_eq!(t4.thetas.len(), 5);
        assert_eq!(t4.losses.len(), 5);
        assert_eq!(t4.metric_calls, 4);
        assert!(!t4.diverged);

        let ident = unroll(&task, &theta0, 4, &w, PrecondMode::IdentityPrecond, None).unwrap();
        assert_eq!(ident.metric_calls, 0);

        assert!(unroll(&task, &theta0, 0, &w, PrecondMode::Full, None).is_err());

        // Same inputs reproduce the same trajectory bit for bit.
        let again = unroll(&task, &theta0, 4, &w, PrecondMode::Full, None).unwrap();
        assert_eq!(t4.losses, again.losses);
    }

    #[test]
    fn exploding_step_scale_marks_divergence() {
        let task = build_random_pqc(2, 1, 6).unwrap();
        let mut w = test_weights(4, 6);
        w.b_alpha = 1e6; // η = exp(1e4) overflows
        w.b_beta = 1.0;
        let mut rng = seeds::rng(6, &["diverge"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let traj = unroll(&task, &theta0, 3, &w, PrecondMode::IdentityPrecond, None).unwrap();
        assert!(traj.diverged);
        assert!(traj.outer_loss.is_infinite());

        let mg = meta_grad(&task, &theta0, 3, &w, PrecondMode::IdentityPrecond, None, None).unwrap();
        assert!(mg.trajectory.diverged);
        assert!(mg.grad.is_none());
        assert!(mg.final_state.is_none());
    }

    #[test]
    fn meta_gradient_matches_frozen_replay_finite_differences() {
        let task = build_random_pqc(3, 2, 21).unwrap();
        for (seed, mode) in [
            (0u64, PrecondMode::Full),
            (1, PrecondMode::Full),
            (2, PrecondMode::IdentityPrecond),
        ] {
            let w = test_weights(4, 100 + seed);
            let mut rng = seeds::rng(seed, &["meta_fd"], &[]);
            let theta0 = random_theta(task.n_params(), &mut rng);
            // A warm recurrent state (from a short prior window) must pass
            // the same oracle: the boundary is a constant to the tape.
            let warm = meta_grad(&task, &theta0, 2, &w, mode, None, None)
                .unwrap()
                .final_state
                .unwrap();
            for init in [None, Some(&warm)] {
                let tape = record_tape(&task, &theta0, 3, &w, mode, None, init).unwrap();
                let grad = meta_grad(&task, &theta0, 3, &w, mode, None, init)
                    .unwrap()
                    .grad
                    .unwrap()
                    .flatten();

                let base = w.flatten();
                let h = 1e-5;
                let mut fd = vec![0.0; base.len()];
                for k in 0..base.len() {
                    let mut plus = base.clone();
                    plus[k] += h;
                    let mut minus = base.clone();
                    minus[k] -= h;
                    let lp = tape
                        .surrogate_loss(&L2OWeights::from_flat(4, &plus).unwrap())
                        .unwrap();
                    let lm = tape
                        .surrogate_loss(&L2OWeights::from_flat(4, &minus).unwrap())
                        .unwrap();
                    fd[k] = (lp - lm) / (2.0 * h);
                }
                let diff: f64 = grad
                    .iter()
                    .zip(&fd)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let scale: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(
                    diff / scale.max(1e-12) < 1e-4,
                    "seed {seed} warm {}: relative error {}",
                    init.is_some(),
                    diff / scale.max(1e-12)
                );
            }
        }
    }

    #[test]
    fn chained_windows_reproduce_one_long_unroll() {
        let task = build_random_pqc(3, 2, 33).unwrap();
        let w = test_weights(4, 33);
        let mut rng = seeds::rng(33, &["chain"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);

        let whole = unroll(&task, &theta0, 6, &w, PrecondMode::Full, None).unwrap();
        assert!(!whole.diverged);

        let first = meta_grad(&task, &theta0, 3, &w, PrecondMode::Full, None, None).unwrap();
        let mid_theta = first.trajectory.thetas.last().unwrap().clone();
        let second = meta_grad(
            &task,
            &mid_theta,
            3,
            &w,
            PrecondMode::Full,
            None,
            first.final_state.as_ref(),
        )
        .unwrap();

        let mut chained = first.trajectory.losses.clone();
        chained.extend_from_slice(&second.trajectory.losses[1..]);
        assert_eq!(chained.len(), whole.losses.len());
        for (a, b) in chained.iter().zip(&whole.losses) {
            assert!((a - b).abs() < 1e-12, "chained {a} vs whole {b}");
        }
        assert!(
            (first.trajectory.outer_loss + second.trajectory.outer_loss - whole.outer_loss).abs()
                < 1e-12
        );
    }

    #[test]
    fn zero_outer_weights_give_zero_meta_gradient() {
        let task = build_random_pqc(2, 1, 7).unwrap();
        let w = test_weights(4, 7);
        let mut rng = seeds::rng(7, &["zero_w"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let grad = meta_grad(
            &task,
            &theta0,
            3,
            &w,
            PrecondMode::Full,
            Some(&[0.0, 0.0, 0.0]),
            None,
        )
        .unwrap()
        .grad
        .unwrap();
        assert!(grad.flatten().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn flatten_round_trips() {
        let w = test_weights(6, 8);
        let flat = w.flatten();
        assert_eq!(flat.len(), L2OWeights::n_flat(6));
        let back = L2OWeights::from_flat(6, &flat).unwrap();
        assert_eq!(w, back);
        assert!(L2OWeights::from_flat(5, &flat).is_err());
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("weights.ckpt");
        let w = test_weights(5, 11);
        save_checkpoint(&w, &path, 0xfeed).unwrap();
        let first = std::fs::read(&path).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(w, loaded);
        save_checkpoint(&loaded, &path, 0xfeed).unwrap();
        let second = std::fs::read(&path).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn checkpoint_error_kinds_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.ckpt");
        assert!(matches!(
            load_checkpoint(&missing),
            Err(Error::CheckpointMissing(_))
        ));

        let corrupt = dir.path().join("bad.ckpt");
        std::fs::write(&corrupt, "not json").unwrap();
        assert!(matches!(
            load_checkpoint(&corrupt),
            Err(Error::CheckpointCorrupt { .. })
        ));

        let versioned = dir.path().join("new.ckpt");
        let w = test_weights(4, 12);
        save_checkpoint(&w, &versioned, 0).unwrap();
        let text = std::fs::read_to_string(&versioned)
            .unwrap()
            .replace("\"version\": 1", "\"version\": 2");
        std::fs::write(&versioned, text).unwrap();
        assert!(matches!(
            load_checkpoint(&versioned),
            Err(Error::CheckpointVersion {
                expected: 1,
                found: 2
            })
        ));
    }

    #[test]
    fn meta_train_is_deterministic_and_logs_stages() {
        let task = build_random_pqc(2, 1, 13).unwrap();
        let cfg = MetaConfig {
            schedule: vec![2, 3],
            trajectories_per_stage: 2,
            trajectory_len: 8,
            hidden: 4,
            validation_seeds: vec![1, 2],
            ..MetaConfig::default()
        };
        let (w1, log1) = meta_train(&task, &cfg, 42).unwrap();
        let (w2, log2) = meta_train(&task, &cfg, 42).unwrap();
        assert_eq!(w1.flatten(), w2.flatten());
        assert_eq!(log1.stages.len(), log2.stages.len());
        assert!(!log1.stages.is_empty());
        assert_eq!(log1.stages[0].unroll_len, 2);
        assert_eq!(log1.stages[0].outer_losses.len(), 2);
        assert_eq!(log1.stages[0].validation_len, 3);
        assert_eq!(log1.stages[0].validation.len(), 2);

        let (w3, _) = meta_train(&task, &cfg, 43).unwrap();
        assert_ne!(w1.flatten(), w3.flatten());
    }

    #[test]
    fn meta_config_validation_rejects_bad_schedules() {
        let ok = MetaConfig::default();
        assert!(ok.validate().is_ok());

        let mut bad = MetaConfig::default();
        bad.schedule = vec![];
        assert!(bad.validate().is_err());

        bad = MetaConfig::default();
        bad.schedule = vec![10, 10];
        assert!(bad.validate().is_err());

        bad = MetaConfig::default();
        bad.unroll_weights = Some(vec![1.0; 10]);
        assert!(bad.validate().is_err());

        bad = MetaConfig::default();
        bad.detach_cost_grad = false;
        assert!(bad.validate().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn update_displacement_is_bounded(seed in 0u64..300) {
            let mut rng = seeds::rng(seed, &["bound"], &[]);
            let p = 4usize;
            let alpha = DVector::from_fn(p, |_, _| rng.gen_range(-2.0..2.0));
            let beta = DVector::from_fn(p, |_, _| rng.gen_range(-2.0..2.0));
            let gamma = DVector::from_fn(p, |_, _| rng.gen_range(0.01..0.99));
            let raw = DMatrix::<f64>::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
            let g_pinv = &raw * raw.transpose();
            let theta = vec![0.0; p];
            let next = l2o_update(&theta, &alpha, &beta, &gamma, Some(&g_pinv)).unwrap();

            let b = crate::geom::blend_preconditioner(&g_pinv, gamma.as_slice()).unwrap();
            let b_inf = (0..p)
                .map(|i| (0..p).map(|j| b[(i, j)].abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            let eta_max = (LAMBDA_B * alpha.amax()).exp();
            let beta_max = beta.amax();
            let bound = eta_max * b_inf * LAMBDA_A * beta_max + 1e-12;
            for (n, t) in next.iter().zip(&theta) {
                prop_assert!((n - t).abs() <= bound);
            }
        }
    }
}
