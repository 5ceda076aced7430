//! Quantum geometry: exact gradients and the Fubini-Study metric.
//!
//! Gradients use the two-point parameter-shift rule applied *per gate
//! occurrence*: each rotation is shifted ±π/2 in its own local angle and
//! the results are chain-ruled into the slots its angle depends on. That
//! keeps the rule exact when one slot drives many gates (QAOA layers) or
//! enters through scaled coefficients (edge weights, data re-uploads).
//!
//! The metric is the full (not block-diagonal) matrix
//! `g_ij = Re(⟨∂_iψ|∂_jψ⟩ − ⟨∂_iψ|ψ⟩⟨ψ|∂_jψ⟩)`, with derivative states
//! built by inserting the scaled generator `(-i/2)P` after each occurrence
//! and summing occurrences per slot (product rule).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuits::{CircuitTemplate, CostModel, ReuploadModel, Task};
use crate::error::{Error, Result};
use crate::sim::{PauliSum, PauliTerm, StateVector};

/// Eigenvalue cutoff below which the pseudo-inverse truncates to zero.
pub const PINV_CUTOFF: f64 = 1e-6;

const SHIFT: f64 = std::f64::consts::FRAC_PI_2;

/// Resolved per-gate angles (`None` for angle-free gates).
fn resolve_angles(circuit: &CircuitTemplate, theta: &[f64]) -> Result<Vec<Option<f64>>> {
    if theta.len() != circuit.n_params {
        return Err(Error::ParamLengthMismatch {
            expected: circuit.n_params,
            got: theta.len(),
        });
    }
    circuit
        .gates
        .iter()
        .map(|g| g.angle.as_ref().map(|expr| expr.resolve(theta)).transpose())
        .collect()
}

fn apply_gate_resolved(
    state: &mut StateVector,
    circuit: &CircuitTemplate,
    gate_idx: usize,
    angle: Option<f64>,
) -> Result<()> {
    let gate = &circuit.gates[gate_idx];
    match angle {
        Some(a) => state.apply_resolved(gate, a),
        None => state.apply(gate, &[]),
    }
}

/// Gradient of ⟨ψ(θ)|H|ψ(θ)⟩ by per-occurrence parameter shifts.
pub fn expectation_grad(
    circuit: &CircuitTemplate,
    observable: &PauliSum,
    theta: &[f64],
) -> Result<Vec<f64>> {
    let angles = resolve_angles(circuit, theta)?;
    let mut grad = vec![0.0; circuit.n_params];
    let mut prefix = StateVector::zero(circuit.n_qubits)?;
    for (gi, gate) in circuit.gates.iter().enumerate() {
        if gate.is_parameterized() {
            let base = angles[gi].expect("parameterized gate has an angle");
            let mut shifted_value = [0.0; 2];
            for (side, delta) in [SHIFT, -SHIFT].into_iter().enumerate() {
                let mut state = prefix.clone();
                state.apply_resolved(gate, base + delta)?;
                for gj in gi + 1..circuit.gates.len() {
                    apply_gate_resolved(&mut state, circuit, gj, angles[gj])?;
                }
                shifted_value[side] = state.expectation(observable)?;
            }
            let local = 0.5 * (shifted_value[0] - shifted_value[1]);
            for &(slot, coeff) in &gate.angle.as_ref().expect("checked").terms {
                grad[slot] += coeff * local;
            }
        }
        apply_gate_resolved(&mut prefix, circuit, gi, angles[gi])?;
    }
    Ok(grad)
}

/// Gradient of a task cost.
///
/// Expectation tasks shift the circuit directly. The re-upload classifier
/// chains analytic fidelity-head partials with per-point ⟨Z⟩ shifts for
/// the circuit slots and closed-form derivatives for the classical α head,
/// averaged over the training set.
pub fn param_shift_grad(task: &Task, theta: &[f64]) -> Result<Vec<f64>> {
    match &task.cost {
        CostModel::Expectation {
            circuit,
            observable,
        } => expectation_grad(circuit, observable, theta),
        CostModel::Reupload(model) => reupload_grad(model, theta),
    }
}

fn z_observable() -> PauliSum {
    PauliSum::new(vec![PauliTerm::new(1.0, vec![(0, crate::sim::Pauli::Z)])
        .expect("static term is valid")])
}

fn reupload_grad(model: &ReuploadModel, theta: &[f64]) -> Result<Vec<f64>> {
    let n_params = model.n_params();
    if theta.len() != n_params {
        return Err(Error::ParamLengthMismatch {
            expected: n_params,
            got: theta.len(),
        });
    }
    if model.train.is_empty() {
        return Err(Error::InvalidTask("empty training set".into()));
    }
    let (a0, a1) = model.alpha_slots();
    let z_obs = z_observable();
    let mut grad = vec![0.0; n_params];
    let inv_n = 1.0 / model.train.len() as f64;
    for (point, &label) in model.train.points.iter().zip(&model.train.labels) {
        let circuit = model.point_circuit(*point);
        let state = circuit.run(theta)?;
        let z = state.expectation(&z_obs)?;
        let f0 = 0.5 * (1.0 + z);
        let f1 = 1.0 - f0;
        let y = label as f64;
        let e0 = theta[a0] * f0 - (1.0 - y);
        let e1 = theta[a1] * f1 - y;
        // dC/dz through F₀ = (1+z)/2 and F₁ = (1-z)/2.
        let dc_dz = theta[a0] * e0 - theta[a1] * e1;
        let dz = expectation_grad(&circuit, &z_obs, theta)?;
        for (g, dz_k) in grad.iter_mut().zip(&dz) {
            *g += inv_n * dc_dz * dz_k;
        }
        grad[a0] += inv_n * 2.0 * e0 * f0;
        grad[a1] += inv_n * 2.0 * e1 * f1;
    }
    Ok(grad)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Full Fubini-Study metric of a circuit state at θ.
pub fn metric_tensor(circuit: &CircuitTemplate, theta: &[f64]) -> Result<DMatrix<f64>> {
    let angles = resolve_angles(circuit, theta)?;
    let n = circuit.n_params;
    let dim = 1usize << circuit.n_qubits;
    let zero = Complex64::new(0.0, 0.0);
    let mut slot_states: Vec<Vec<Complex64>> = vec![vec![zero; dim]; n];

    let mut prefix = StateVector::zero(circuit.n_qubits)?;
    for (gi, gate) in circuit.gates.iter().enumerate() {
        // Insertion happens after the gate acts, so advance the prefix first.
        apply_gate_resolved(&mut prefix, circuit, gi, angles[gi])?;
        if gate.is_parameterized() {
            let mut state = prefix.clone();
            state.apply_pauli_generator(gate)?;
            for gj in gi + 1..circuit.gates.len() {
                apply_gate_resolved(&mut state, circuit, gj, angles[gj])?;
            }
            for &(slot, coeff) in &gate.angle.as_ref().expect("checked").terms {
                for (acc, amp) in slot_states[slot].iter_mut().zip(state.amplitudes()) {
                    *acc += coeff * amp;
                }
            }
        }
    }

    let psi = prefix.amplitudes();
    let overlaps: Vec<Complex64> = slot_states.iter().map(|d| inner(psi, d)).collect();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let raw = inner(&slot_states[i], &slot_states[j]) - overlaps[i].conj() * overlaps[j];
            g[(i, j)] = raw.re;
            g[(j, i)] = raw.re;
        }
    }
    Ok(g)
}

/// Metric of a task's trainable vector.
///
/// Expectation tasks use the circuit metric directly. The re-upload
/// classifier averages the per-point circuit metrics over the training set
/// and assigns identity-metric coordinates to the classical α head.
pub fn task_metric(task: &Task, theta: &[f64]) -> Result<DMatrix<f64>> {
    match &task.cost {
        CostModel::Expectation { circuit, .. } => metric_tensor(circuit, theta),
        CostModel::Reupload(model) => {
            if model.train.is_empty() {
                return Err(Error::InvalidTask("empty training set".into()));
            }
            let n = model.n_params();
            let mut g = DMatrix::<f64>::zeros(n, n);
            for point in &model.train.points {
                g += metric_tensor(&model.point_circuit(*point), theta)?;
            }
            g /= model.train.len() as f64;
            let (a0, a1) = model.alpha_slots();
            g[(a0, a0)] = 1.0;
            g[(a1, a1)] = 1.0;
            Ok(g)
        }
    }
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix by
/// eigendecomposition; eigenvalues below `cutoff` invert to zero.
pub fn pinv_psd(g: &DMatrix<f64>, cutoff: f64) -> Result<DMatrix<f64>> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch {
            left: g.nrows(),
            right: g.ncols(),
        });
    }
    let mut asym = 0.0f64;
    for i in 0..g.nrows() {
        for j in (i + 1)..g.ncols() {
            asym = asym.max((g[(i, j)] - g[(j, i)]).abs());
        }
    }
    if asym > 1e-8 {
        return Err(Error::NotSymmetric(asym));
    }
    let eigen = SymmetricEigen::new(g.clone());
    let inverted: Vec<f64> = eigen
        .eigenvalues
        .iter()
        .map(|&l| if l >= cutoff { 1.0 / l } else { 0.0 })
        .collect();
    let v = &eigen.eigenvectors;
    let mut out = DMatrix::<f64>::zeros(g.nrows(), g.ncols());
    for (k, &inv) in inverted.iter().enumerate() {
        if inv != 0.0 {
            let col = v.column(k);
            // out += inv · v_k v_kᵀ
            for i in 0..g.nrows() {
                let vi = inv * col[i];
                for j in 0..g.ncols() {
                    out[(i, j)] += vi * col[j];
                }
            }
        }
    }
    let sym = (&out + out.transpose()) * 0.5;
    Ok(sym)
}

/// Row-wise blend `B = D_{1-γ}·G + D_γ` of a metric pseudo-inverse with the
/// identity. γ = 1 gives the identity, γ = 0 the pure pseudo-inverse;
/// endpoints are accepted so the limits are directly usable.
pub fn blend_preconditioner(g_pinv: &DMatrix<f64>, gamma: &[f64]) -> Result<DMatrix<f64>> {
    if g_pinv.nrows() != gamma.len() || !g_pinv.is_square() {
        return Err(Error::DimensionMismatch {
            left: g_pinv.nrows(),
            right: gamma.len(),
        });
    }
    for &g in gamma {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::BlendOutOfRange(g));
        }
    }
    let mut b = DMatrix::<f64>::zeros(g_pinv.nrows(), g_pinv.ncols());
    for i in 0..g_pinv.nrows() {
        let keep = 1.0 - gamma[i];
        for j in 0..g_pinv.ncols() {
            b[(i, j)] = keep * g_pinv[(i, j)];
        }
        b[(i, i)] += gamma[i];
    }
    Ok(b)
}
