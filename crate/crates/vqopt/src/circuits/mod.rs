//! Circuit templates and optimization tasks.
//!
//! A [`CircuitTemplate`] is an ordered gate list over a fixed register with
//! a declared trainable-parameter count; gate angles reference parameter
//! slots through affine expressions, so one slot may drive many gates (QAOA
//! layers) and one gate may mix several slots (the re-upload classifier).
//!
//! A [`Task`] couples a cost function with reporting metadata. Five
//! families are provided:
//!
//! * random layered circuits with a `Z₀Z₁` objective,
//! * hardware-efficient VQE against a loaded Hamiltonian,
//! * QAOA for MaxCut on weighted graphs,
//! * QAOA for Sherrington-Kirkpatrick (±1 coupling) instances,
//! * a single-qubit data re-upload classifier on the circle dataset.
//!
//! Everything seeded is deterministic: the same inputs always produce the
//! same circuits, couplings, and datasets.

mod io;
mod oracle;

pub use io::{
    load_graph, load_hamiltonian, load_task_spec, parse_hamiltonian, save_graph, ErParams,
    TaskSpec,
};
pub use oracle::{brute_force_maxcut, exact_ground_energy};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seeds;
use crate::sim::{AngleExpr, GateOp, Pauli, PauliSum, PauliTerm, StateVector, MAX_QUBITS};

/// Parameterized circuit over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitTemplate {
    pub n_qubits: usize,
    pub n_params: usize,
    pub gates: Vec<GateOp>,
}

impl CircuitTemplate {
    pub fn new(n_qubits: usize, n_params: usize, gates: Vec<GateOp>) -> Result<Self> {
        let tpl = CircuitTemplate {
            n_qubits,
            n_params,
            gates,
        };
        tpl.validate()?;
        Ok(tpl)
    }

    /// Structural checks: register size, target ranges, angle shapes.
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(self.n_qubits));
        }
        for gate in &self.gates {
            gate.validate(self.n_qubits, self.n_params)?;
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus coverage: every declared slot must
    /// be referenced by at least one gate. Task builders enforce this; ad
    /// hoc circuits (e.g. per-data-point instantiations that deliberately
    /// leave classical-head slots untouched) may skip it.
    pub fn validate_complete(&self) -> Result<()> {
        self.validate()?;
        let mut used = vec![false; self.n_params];
        for gate in &self.gates {
            if let Some(expr) = &gate.angle {
                for &(slot, _) in &expr.terms {
                    used[slot] = true;
                }
            }
        }
        if let Some(unused) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter slot {unused} is never referenced"
            )));
        }
        Ok(())
    }

    /// Run the circuit on |0…0⟩ with the given parameters.
    pub fn run(&self, params: &[f64]) -> Result<StateVector> {
        if params.len() != self.n_params {
            return Err(Error::ParamLengthMismatch {
                expected: self.n_params,
                got: params.len(),
            });
        }
        let mut state = StateVector::zero(self.n_qubits)?;
        for gate in &self.gates {
            state.apply(gate, params)?;
        }
        Ok(state)
    }

    /// Indices of gates whose angle depends on at least one slot, in
    /// application order. These are the differentiation sites.
    pub fn parameterized_gates(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.is_parameterized())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Undirected weighted graph with edges stored as `(i, j, w)`, `i < j`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Graph {
    #[serde(rename = "vertices")]
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let g = Graph { n_vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vertices == 0 || self.n_vertices > MAX_QUBITS {
            return Err(Error::InvalidGraph(format!(
                "vertex count {} out of range 1..=24",
                self.n_vertices
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, w) in &self.edges {
            if i >= j {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) must satisfy i < j"
                )));
            }
            if j >= self.n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) references vertex {j} outside 0..{}",
                    self.n_vertices
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}, {j}) has non-finite weight"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(())
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }
}

/// Erdős–Rényi graph with unit weights. An empty draw is retried with a
/// derived seed so the result always has at least one edge; the retry chain
/// is deterministic.
pub fn gen_er_graph(n_vertices: usize, edge_prob: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidGraph(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    const MAX_RETRIES: u64 = 64;
    for attempt in 0..MAX_RETRIES {
        let mut rng = seeds::rng(seed, &["er_graph"], &[n_vertices as u64, attempt]);
        let mut edges = Vec::new();
        for i in 0..n_vertices {
            for j in (i + 1)..n_vertices {
                if rng.gen_bool(edge_prob) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        if !edges.is_empty() {
            return Graph::new(n_vertices, edges);
        }
    }
    Err(Error::InvalidGraph(format!(
        "no edges after {MAX_RETRIES} draws (n={n_vertices}, p={edge_prob})"
    )))
}

/// Labeled 2-D points; labels are 0/1.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LabeledDataset {
    pub points: Vec<[f64; 2]>,
    pub labels: Vec<u8>,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label_fraction(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        self.labels.iter().map(|&l| l as usize).sum::<usize>() as f64 / self.labels.len() as f64
    }
}

/// Radius at which the circle x₁²+x₂² < r² splits the uniform square
/// [-1, 1]² into equal-probability classes (area πr² = 2).
pub fn balanced_radius() -> f64 {
    (2.0 / std::f64::consts::PI).sqrt()
}

/// Uniform points on [-1, 1]² labeled 1 inside the circle of given radius.
pub fn gen_circle_dataset(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> LabeledDataset {
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        points.push([x, y]);
        labels.push(u8::from(x * x + y * y < radius * radius));
    }
    LabeledDataset { points, labels }
}

/// Task family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    RandomPqc,
    VqeHea,
    QaoaMaxCut,
    QaoaSk,
    Reupload,
}

/// Cost function of a task.
#[derive(Debug, Clone)]
pub enum CostModel {
    /// ⟨ψ(θ)|H|ψ(θ)⟩ after a fixed circuit.
    Expectation {
        circuit: CircuitTemplate,
        observable: PauliSum,
    },
    /// Mean per-point squared error of the re-upload classifier.
    Reupload(ReuploadModel),
}

/// Reporting metadata attached to a task.
#[derive(Debug, Clone)]
pub enum TaskInfo {
    RandomPqc {
        n_qubits: usize,
        layers: usize,
        seed: u64,
    },
    VqeHea {
        n_qubits: usize,
        layers: usize,
        label: String,
    },
    QaoaMaxCut {
        graph: Graph,
        p_layers: usize,
    },
    QaoaSk {
        n_spins: usize,
        p_layers: usize,
        seed: u64,
        couplings: Vec<(usize, usize, i8)>,
    },
    Reupload {
        radius: f64,
        seed: u64,
    },
}

/// One optimization problem: a differentiable cost over a trainable vector
/// plus enough metadata to report results.
#[derive(Debug, Clone)]
pub struct Task {
    pub id: String,
    pub cost: CostModel,
    pub info: TaskInfo,
}

impl Task {
    pub fn kind(&self) -> TaskKind {
        match &self.info {
            TaskInfo::RandomPqc { .. } => TaskKind::RandomPqc,
            TaskInfo::VqeHea { .. } => TaskKind::VqeHea,
            TaskInfo::QaoaMaxCut { .. } => TaskKind::QaoaMaxCut,
            TaskInfo::QaoaSk { .. } => TaskKind::QaoaSk,
            TaskInfo::Reupload { .. } => TaskKind::Reupload,
        }
    }

    pub fn n_params(&self) -> usize {
        match &self.cost {
            CostModel::Expectation { circuit, .. } => circuit.n_params,
            CostModel::Reupload(model) => model.n_params(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        match &self.cost {
            CostModel::Expectation { circuit, .. } => circuit.n_qubits,
            CostModel::Reupload(_) => 1,
        }
    }

    /// Cost value at a trainable vector.
    pub fn loss(&self, theta: &[f64]) -> Result<f64> {
        match &self.cost {
            CostModel::Expectation {
                circuit,
                observable,
            } => circuit.run(theta)?.expectation(observable),
            CostModel::Reupload(model) => model.loss(theta),
        }
    }

    /// Circuit of an expectation-style task, if any.
    pub fn circuit(&self) -> Option<&CircuitTemplate> {
        match &self.cost {
            CostModel::Expectation { circuit, .. } => Some(circuit),
            CostModel::Reupload(_) => None,
        }
    }
}

/// Uniform trainable initialization on [-π, π), the convention shared by
/// every task family.
pub fn random_theta(n_params: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n_params)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// Random layered circuit: a fixed RY(π/4) wall, then per layer one
/// seeded-random Pauli rotation per qubit followed by a CZ chain. The
/// objective is ⟨Z₀Z₁⟩, so two qubits are the minimum. Parameter slots are
/// layer-major: layer ℓ, qubit q → slot ℓ·n + q.
pub fn build_random_pqc(n_qubits: usize, layers: usize, seed: u64) -> Result<Task> {
    if n_qubits < 2 {
        return Err(Error::InvalidTask(
            "random layered circuit needs at least 2 qubits for the Z0Z1 objective".into(),
        ));
    }
    if layers == 0 {
        return Err(Error::InvalidTask("layer count must be positive".into()));
    }
    let mut rng = seeds::rng(seed, &["random_pqc"], &[n_qubits as u64, layers as u64]);
    let mut gates = Vec::new();
    for q in 0..n_qubits {
        gates.push(GateOp::ry(q, AngleExpr::fixed(std::f64::consts::FRAC_PI_4)));
    }
    for layer in 0..layers {
        for q in 0..n_qubits {
            let pauli = match rng.gen_range(0..3u8) {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            };
            gates.push(GateOp::rotation(
                pauli,
                q,
                AngleExpr::slot(layer * n_qubits + q),
            ));
        }
        for q in 0..n_qubits - 1 {
            gates.push(GateOp::cz(q, q + 1));
        }
    }
    let circuit = CircuitTemplate::new(n_qubits, n_qubits * layers, gates)?;
    circuit.validate_complete()?;
    let observable = PauliSum::new(vec![PauliTerm::zz(1.0, 0, 1)?]);
    Ok(Task {
        id: format!("rand_pqc_q{n_qubits}_l{layers}_s{seed}"),
        cost: CostModel::Expectation {
            circuit,
            observable,
        },
        info: TaskInfo::RandomPqc {
            n_qubits,
            layers,
            seed,
        },
    })
}

/// Hardware-efficient VQE ansatz: per layer, an RY then RZ on each qubit
/// (two slots per qubit per layer, interleaved RY/RZ per qubit) followed by
/// a linear CNOT chain. The register size comes from the Hamiltonian.
pub fn build_vqe_hea(hamiltonian: &PauliSum, layers: usize, label: &str) -> Result<Task> {
    if layers == 0 {
        return Err(Error::InvalidTask("layer count must be positive".into()));
    }
    if hamiltonian.terms.is_empty() {
        return Err(Error::InvalidTask("Hamiltonian has no terms".into()));
    }
    let n_qubits = hamiltonian.min_qubits();
    let mut gates = Vec::new();
    for layer in 0..layers {
        for q in 0..n_qubits {
            let base = 2 * (layer * n_qubits + q);
            gates.push(GateOp::ry(q, AngleExpr::slot(base)));
            gates.push(GateOp::rz(q, AngleExpr::slot(base + 1)));
        }
        for q in 0..n_qubits.saturating_sub(1) {
            gates.push(GateOp::cnot(q, q + 1));
        }
    }
    let circuit = CircuitTemplate::new(n_qubits, 2 * n_qubits * layers, gates)?;
    circuit.validate_complete()?;
    Ok(Task {
        id: format!("vqe_hea_{label}_l{layers}"),
        cost: CostModel::Expectation {
            circuit,
            observable: hamiltonian.clone(),
        },
        info: TaskInfo::VqeHea {
            n_qubits,
            layers,
            label: label.to_string(),
        },
    })
}

/// Shared QAOA compilation: Hadamard wall, then per layer a compiled ZZ
/// rotation per coupling (CNOT · RZ · CNOT, with the RZ angle scaled by
/// twice the ZZ coefficient so the layer equals `exp(-iγ Σ c_ij Z_iZ_j)`)
/// followed by an RX mixer on every qubit. Slots: layer ℓ → γ at 2ℓ,
/// β at 2ℓ+1.
fn build_qaoa_circuit(
    n_qubits: usize,
    zz_couplings: &[(usize, usize, f64)],
    p_layers: usize,
) -> Result<CircuitTemplate> {
    if p_layers == 0 {
        return Err(Error::InvalidTask("p_layers must be positive".into()));
    }
    let mut gates = Vec::new();
    for q in 0..n_qubits {
        gates.push(GateOp::h(q));
    }
    for layer in 0..p_layers {
        let gamma = 2 * layer;
        let beta = 2 * layer + 1;
        for &(i, j, coeff) in zz_couplings {
            gates.push(GateOp::cnot(i, j));
            gates.push(GateOp::rz(j, AngleExpr::scaled_slot(gamma, 2.0 * coeff)));
            gates.push(GateOp::cnot(i, j));
        }
        for q in 0..n_qubits {
            gates.push(GateOp::rx(q, AngleExpr::slot(beta)));
        }
    }
    let circuit = CircuitTemplate::new(n_qubits, 2 * p_layers, gates)?;
    circuit.validate_complete()?;
    Ok(circuit)
}

/// MaxCut cost Hamiltonian `Σ_e (w_e/2)(Z_iZ_j - I)`; on a basis state its
/// negated value is exactly the cut weight.
pub fn maxcut_hamiltonian(graph: &Graph) -> Result<PauliSum> {
    let mut terms = Vec::with_capacity(graph.edges.len() + 1);
    for &(i, j, w) in &graph.edges {
        terms.push(PauliTerm::zz(0.5 * w, i, j)?);
    }
    terms.push(PauliTerm::identity(-0.5 * graph.total_weight()));
    Ok(PauliSum::new(terms))
}

/// QAOA on a MaxCut instance. Each cost layer compiles
/// `exp(-iγ Σ (w_e/2) Z_iZ_j)`; the identity offset in the Hamiltonian only
/// contributes a global phase and is left to the observable.
pub fn build_qaoa_maxcut(graph: &Graph, p_layers: usize, label: &str) -> Result<Task> {
    graph.validate()?;
    let zz: Vec<(usize, usize, f64)> = graph
        .edges
        .iter()
        .map(|&(i, j, w)| (i, j, 0.5 * w))
        .collect();
    let circuit = build_qaoa_circuit(graph.n_vertices, &zz, p_layers)?;
    let observable = maxcut_hamiltonian(graph)?;
    Ok(Task {
        id: format!("qaoa_maxcut_{label}_p{p_layers}"),
        cost: CostModel::Expectation {
            circuit,
            observable,
        },
        info: TaskInfo::QaoaMaxCut {
            graph: graph.clone(),
            p_layers,
        },
    })
}

/// QAOA on a Sherrington-Kirkpatrick instance: all-to-all ±1 couplings
/// drawn from the seed, cost `H = (1/√n) Σ_{i<j} J_ij Z_iZ_j`.
pub fn build_qaoa_sk(n_spins: usize, p_layers: usize, seed: u64) -> Result<Task> {
    if n_spins < 2 {
        return Err(Error::InvalidTask(
            "Sherrington-Kirkpatrick needs at least 2 spins".into(),
        ));
    }
    let mut rng = seeds::rng(seed, &["sk_couplings"], &[n_spins as u64]);
    let mut couplings = Vec::new();
    for i in 0..n_spins {
        for j in (i + 1)..n_spins {
            let j_ij: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            couplings.push((i, j, j_ij));
        }
    }
    let scale = 1.0 / (n_spins as f64).sqrt();
    let zz: Vec<(usize, usize, f64)> = couplings
        .iter()
        .map(|&(i, j, j_ij)| (i, j, j_ij as f64 * scale))
        .collect();
    let circuit = build_qaoa_circuit(n_spins, &zz, p_layers)?;
    let observable = PauliSum::new(
        zz.iter()
            .map(|&(i, j, c)| PauliTerm::zz(c, i, j))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(Task {
        id: format!("qaoa_sk_n{n_spins}_p{p_layers}_s{seed}"),
        cost: CostModel::Expectation {
            circuit,
            observable,
        },
        info: TaskInfo::QaoaSk {
            n_spins,
            p_layers,
            seed,
            couplings,
        },
    })
}

/// Single-qubit data re-upload classifier.
///
/// The trainable vector is `(θ₁..θ_{3L}, ω₁..ω_{3L}, α₀, α₁)`. Per layer
/// the circuit applies RZ, RY, RZ whose angles are `x̃_j·ω + θ` with the
/// padded point `x̃ = (x₁, x₂, 0)` — the third ω of each layer is
/// structurally inert. Per-point cost:
/// `(α₀F₀ - (1-y))² + (α₁F₁ - y)²` with fidelities `F₀ = |⟨0|ψ⟩|²`,
/// `F₁ = 1 - F₀`; the task cost is the mean over the training set.
#[derive(Debug, Clone)]
pub struct ReuploadModel {
    pub layers: usize,
    pub train: LabeledDataset,
    pub test: LabeledDataset,
}

impl ReuploadModel {
    pub fn n_params(&self) -> usize {
        6 * self.layers + 2
    }

    pub fn theta_slot(&self, layer: usize, gate: usize) -> usize {
        3 * layer + gate
    }

    pub fn omega_slot(&self, layer: usize, gate: usize) -> usize {
        3 * self.layers + 3 * layer + gate
    }

    pub fn alpha_slots(&self) -> (usize, usize) {
        (6 * self.layers, 6 * self.layers + 1)
    }

    /// Circuit for one data point; slots index into the full trainable
    /// vector, so the α slots are declared but unused here.
    pub fn point_circuit(&self, x: [f64; 2]) -> CircuitTemplate {
        let padded = [x[0], x[1], 0.0];
        let mut gates = Vec::with_capacity(3 * self.layers);
        for layer in 0..self.layers {
            for (gate, &coord) in padded.iter().enumerate() {
                let mut terms = vec![(self.theta_slot(layer, gate), 1.0)];
                if coord != 0.0 {
                    terms.push((self.omega_slot(layer, gate), coord));
                }
                let expr = AngleExpr::new(terms, 0.0);
                let op = if gate == 1 {
                    GateOp::ry(0, expr)
                } else {
                    GateOp::rz(0, expr)
                };
                gates.push(op);
            }
        }
        CircuitTemplate {
            n_qubits: 1,
            n_params: self.n_params(),
            gates,
        }
    }

    /// Fidelities (F₀, F₁) of the encoded point.
    pub fn fidelities(&self, x: [f64; 2], theta: &[f64]) -> Result<(f64, f64)> {
        let state = self.point_circuit(x).run(theta)?;
        let z = state.expectation(&PauliSum::new(vec![PauliTerm::new(
            1.0,
            vec![(0, Pauli::Z)],
        )?]))?;
        let f0 = 0.5 * (1.0 + z);
        Ok((f0, 1.0 - f0))
    }

    pub fn point_cost(&self, x: [f64; 2], label: u8, theta: &[f64]) -> Result<f64> {
        let (f0, f1) = self.fidelities(x, theta)?;
        let (a0, a1) = self.alpha_slots();
        let y = label as f64;
        let e0 = theta[a0] * f0 - (1.0 - y);
        let e1 = theta[a1] * f1 - y;
        Ok(e0 * e0 + e1 * e1)
    }

    pub fn loss(&self, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.n_params() {
            return Err(Error::ParamLengthMismatch {
                expected: self.n_params(),
                got: theta.len(),
            });
        }
        if self.train.is_empty() {
            return Err(Error::InvalidTask("empty training set".into()));
        }
        let mut total = 0.0;
        for (point, &label) in self.train.points.iter().zip(&self.train.labels) {
            total += self.point_cost(*point, label, theta)?;
        }
        Ok(total / self.train.len() as f64)
    }

    /// Fidelity-argmax prediction; ties resolve to label 0.
    pub fn predict(&self, x: [f64; 2], theta: &[f64]) -> Result<u8> {
        let (f0, f1) = self.fidelities(x, theta)?;
        Ok(u8::from(f1 > f0))
    }

    /// Fraction of correctly classified points.
    pub fn accuracy(&self, data: &LabeledDataset, theta: &[f64]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::InvalidTask("empty evaluation set".into()));
        }
        let mut correct = 0usize;
        for (point, &label) in data.points.iter().zip(&data.labels) {
            if self.predict(*point, theta)? == label {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.len() as f64)
    }
}

/// Build the re-upload classification task with seeded train/test splits.
pub fn build_reupload(
    layers: usize,
    n_train: usize,
    n_test: usize,
    radius: f64,
    seed: u64,
) -> Result<Task> {
    if layers == 0 {
        return Err(Error::InvalidTask("layer count must be positive".into()));
    }
    if n_train == 0 || n_test == 0 {
        return Err(Error::InvalidTask("dataset sizes must be positive".into()));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidTask(format!("invalid radius {radius}")));
    }
    let mut train_rng = seeds::rng(seed, &["reupload", "train"], &[]);
    let mut test_rng = seeds::rng(seed, &["reupload", "test"], &[]);
    let train = gen_circle_dataset(n_train, radius, &mut train_rng);
    let test = gen_circle_dataset(n_test, radius, &mut test_rng);
    let model = ReuploadModel {
        layers,
        train,
        test,
    };
    Ok(Task {
        id: format!("reupload_l{layers}_r{radius:.4}_s{seed}"),
        cost: CostModel::Reupload(model),
        info: TaskInfo::Reupload { radius, seed },
    })
}
