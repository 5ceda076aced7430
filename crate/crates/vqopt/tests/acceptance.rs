//! Acceptance suite: twelve end-to-end checks, one per shipping criterion.
//!
//! Each test prints a single `criterion NN: PASS/FAIL — detail` line (visible
//! with `cargo test --test acceptance -- --nocapture`) and then asserts the
//! verdict. Exact-math criteria use independent oracles computed in this
//! file; the statistical criteria pin every seed, so reruns are bit-stable.
//!
//! The learned-optimizer criteria meta-train their checkpoints in-process
//! from fixed seeds (shared lazily across tests); the full suite takes
//! roughly half an hour of CPU time.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use vqopt::bench::{report, run_l2o, run_suite, OptimizerSpec, ReportKind, SuiteSpec};
use vqopt::circuits::{
    balanced_radius, brute_force_maxcut, build_qaoa_maxcut, build_qaoa_sk, build_random_pqc,
    build_reupload, build_vqe_hea, exact_ground_energy, gen_er_graph, load_hamiltonian,
    maxcut_hamiltonian, random_theta, CostModel, Graph, Task, TaskInfo, TaskSpec,
};
use vqopt::geom::{metric_tensor, param_shift_grad};
use vqopt::l2o::{
    meta_grad, meta_train, record_tape, save_checkpoint, unroll, validation_losses, L2OWeights,
    MetaConfig, PrecondMode,
};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;
use vqopt::sim::{PauliSum, StateVector};

type C64 = Complex<f64>;

// ---------------------------------------------------------------------------
// Pinned fixture parameters. Every stochastic criterion fixes its seeds, so
// the whole suite is deterministic end to end.
// ---------------------------------------------------------------------------

/// Training instance for the transferable PQC optimizer: one (7,5) circuit.
const PQC_TEACHER_SEED: u64 = 0;
/// Meta-training seed for the transferable PQC checkpoint.
const PQC_META_SEED: u64 = 2;
/// Training seeds compared in the curriculum ablation.
const CURRICULUM_SEEDS: [u64; 3] = [0, 1, 2];
/// Unseen evaluation grid: ten draws from {6,7,8} qubits × {4,5,6} layers.
const TRANSFER_GRID: [(usize, usize); 10] = [
    (6, 4),
    (6, 5),
    (6, 6),
    (7, 4),
    (7, 6),
    (8, 4),
    (8, 5),
    (8, 6),
    (7, 5),
    (6, 5),
];

const SK_INSTANCE_SEED: u64 = 1;
const SK_META_SEED: u64 = 0;
const MAXCUT_GRAPH_SEED: u64 = 1;
const MAXCUT_META_SEED: u64 = 0;
const REUPLOAD_DATA_SEED: u64 = 5;
const REUPLOAD_META_SEED: u64 = 0;
const VQE_META_SEED: u64 = 0;

fn verdict(criterion: usize, pass: bool, detail: &str) {
    let line = format!(
        "criterion {criterion:02}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn h2_hamiltonian() -> &'static (PauliSum, f64) {
    static H2: OnceLock<(PauliSum, f64)> = OnceLock::new();
    H2.get_or_init(|| {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/h2_sto3g.ham");
        let (ham, _) = load_hamiltonian(&path).expect("shipped Hamiltonian loads");
        let e0 = exact_ground_energy(&ham).expect("4-qubit diagonalization");
        (ham, e0)
    })
}

fn theta0_for(task: &Task, tag: &str, k: u64) -> Vec<f64> {
    let mut rng = seeds::rng(11, &[tag], &[k]);
    random_theta(task.n_params(), &mut rng)
}

// ---------------------------------------------------------------------------
// Shared meta-trained checkpoints (lazy, trained once per process).
// ---------------------------------------------------------------------------

fn pqc_teacher() -> Task {
    build_random_pqc(7, 5, PQC_TEACHER_SEED).expect("teacher builds")
}

/// Curriculum-trained PQC models by training seed (criteria 5, 6, 7).
fn curriculum_model(seed: u64) -> &'static L2OWeights {
    static MODELS: OnceLock<Vec<OnceLock<L2OWeights>>> = OnceLock::new();
    let slots = MODELS.get_or_init(|| (0..8).map(|_| OnceLock::new()).collect());
    slots[seed as usize].get_or_init(|| {
        let (weights, _) = meta_train(&pqc_teacher(), &MetaConfig::default(), seed)
            .expect("curriculum training succeeds");
        weights
    })
}

/// Same budget, same seed, but with the metric forced to the identity
/// (criterion 6's ablation arm).
fn identity_model() -> &'static L2OWeights {
    static MODEL: OnceLock<L2OWeights> = OnceLock::new();
    MODEL.get_or_init(|| {
        let cfg = MetaConfig {
            mode: PrecondMode::IdentityPrecond,
            ..MetaConfig::default()
        };
        let (weights, _) =
            meta_train(&pqc_teacher(), &cfg, PQC_META_SEED).expect("identity training succeeds");
        weights
    })
}

/// Single-stage schedule at the longest unroll, equal trajectory budget
/// (criterion 7's no-curriculum arm).
fn flat_model(seed: u64) -> &'static L2OWeights {
    static MODELS: OnceLock<Vec<OnceLock<L2OWeights>>> = OnceLock::new();
    let slots = MODELS.get_or_init(|| (0..8).map(|_| OnceLock::new()).collect());
    slots[seed as usize].get_or_init(|| {
        let cfg = flat_config();
        let (weights, _) =
            meta_train(&pqc_teacher(), &cfg, seed).expect("flat training succeeds");
        weights
    })
}

fn flat_config() -> MetaConfig {
    let default = MetaConfig::default();
    MetaConfig {
        schedule: vec![*default.schedule.last().unwrap()],
        trajectories_per_stage: default.trajectories_per_stage * default.schedule.len(),
        ..default
    }
}

fn sk_task() -> Task {
    build_qaoa_sk(6, 3, SK_INSTANCE_SEED).expect("SK task builds")
}

fn sk_model() -> &'static L2OWeights {
    static MODEL: OnceLock<L2OWeights> = OnceLock::new();
    MODEL.get_or_init(|| {
        let (weights, _) =
            meta_train(&sk_task(), &MetaConfig::default(), SK_META_SEED).expect("SK training");
        weights
    })
}

fn maxcut_task() -> (Task, f64) {
    let graph = gen_er_graph(5, 0.5, MAXCUT_GRAPH_SEED).expect("graph generates");
    let (c_max, _) = brute_force_maxcut(&graph).expect("brute force");
    let task = build_qaoa_maxcut(&graph, 3, "acceptance").expect("task builds");
    (task, c_max)
}

fn maxcut_model() -> &'static L2OWeights {
    static MODEL: OnceLock<L2OWeights> = OnceLock::new();
    MODEL.get_or_init(|| {
        let (task, _) = maxcut_task();
        let (weights, _) =
            meta_train(&task, &MetaConfig::default(), MAXCUT_META_SEED).expect("MaxCut training");
        weights
    })
}

fn reupload_task() -> Task {
    build_reupload(3, 200, 1000, balanced_radius(), REUPLOAD_DATA_SEED).expect("task builds")
}

fn reupload_model() -> &'static L2OWeights {
    static MODEL: OnceLock<L2OWeights> = OnceLock::new();
    MODEL.get_or_init(|| {
        let (weights, _) = meta_train(&reupload_task(), &MetaConfig::default(), REUPLOAD_META_SEED)
            .expect("re-upload training");
        weights
    })
}

fn vqe_task() -> Task {
    let (ham, _) = h2_hamiltonian();
    build_vqe_hea(ham, 3, "h2_sto3g").expect("task builds")
}

fn vqe_model() -> &'static L2OWeights {
    static MODEL: OnceLock<L2OWeights> = OnceLock::new();
    MODEL.get_or_init(|| {
        let (weights, _) =
            meta_train(&vqe_task(), &MetaConfig::default(), VQE_META_SEED).expect("VQE training");
        weights
    })
}

// ---------------------------------------------------------------------------
// Criterion 1 — parameter-shift gradients vs central finite differences on
// one instance of every task family.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_gradient_oracle() {
    let (ham, _) = h2_hamiltonian();
    let graph = gen_er_graph(5, 0.5, 1).unwrap();
    let tasks: Vec<Task> = vec![
        build_random_pqc(4, 3, 9).unwrap(),
        build_vqe_hea(ham, 2, "h2_small").unwrap(),
        build_qaoa_maxcut(&graph, 2, "grad_oracle").unwrap(),
        build_qaoa_sk(4, 2, 3).unwrap(),
        build_reupload(2, 30, 30, balanced_radius(), 7).unwrap(),
    ];
    let h = 1e-5;
    let mut worst = 0.0f64;
    for (i, task) in tasks.iter().enumerate() {
        let mut rng = seeds::rng(17, &["grad_oracle"], &[i as u64]);
        let theta = random_theta(task.n_params(), &mut rng);
        let analytic = param_shift_grad(task, &theta).unwrap();
        for k in 0..theta.len() {
            let mut plus = theta.clone();
            plus[k] += h;
            let mut minus = theta.clone();
            minus[k] -= h;
            let fd = (task.loss(&plus).unwrap() - task.loss(&minus).unwrap()) / (2.0 * h);
            worst = worst.max((analytic[k] - fd).abs());
        }
    }
    verdict(
        1,
        worst < 1e-6,
        &format!("max-abs gradient error {worst:.2e} across 5 task families (bound 1e-6)"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 2 — metric tensor vs finite-difference inner products, plus the
// closed-form single- and two-rotation cases.
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_metric_oracle() {
    use vqopt::circuits::CircuitTemplate;
    use vqopt::sim::{AngleExpr, GateOp};

    // Finite-difference |∂ψ⟩ straight from the definition.
    let fd_metric = |circuit: &CircuitTemplate, theta: &[f64], h: f64| -> DMatrix<f64> {
        let n = circuit.n_params;
        let psi = circuit.run(theta).unwrap();
        let inner = |a: &[C64], b: &[C64]| -> C64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        let d_states: Vec<Vec<C64>> = (0..n)
            .map(|k| {
                let mut plus = theta.to_vec();
                plus[k] += h;
                let mut minus = theta.to_vec();
                minus[k] -= h;
                let sp = circuit.run(&plus).unwrap();
                let sm = circuit.run(&minus).unwrap();
                sp.amplitudes()
                    .iter()
                    .zip(sm.amplitudes())
                    .map(|(p, m)| (p - m) / C64::new(2.0 * h, 0.0))
                    .collect()
            })
            .collect();
        let overlaps: Vec<C64> = d_states.iter().map(|d| inner(psi.amplitudes(), d)).collect();
        let mut g = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (inner(&d_states[i], &d_states[j])
                    - overlaps[i].conj() * overlaps[j])
                    .re;
            }
        }
        g
    };

    let mut worst = 0.0f64;
    for seed in [4u64, 8, 15] {
        let task = build_random_pqc(4, 2, seed).unwrap();
        let circuit = task.circuit().unwrap();
        assert!(task.n_params() <= 10 && task.n_qubits() <= 5);
        let mut rng = seeds::rng(19, &["metric_oracle"], &[seed]);
        let theta = random_theta(task.n_params(), &mut rng);
        let analytic = metric_tensor(circuit, &theta).unwrap();
        let numeric = fd_metric(circuit, &theta, 1e-4);
        worst = worst.max((&analytic - &numeric).abs().max());
    }

    // Single RX from |0⟩: g = 1/4 exactly.
    let single = CircuitTemplate::new(1, 1, vec![GateOp::rx(0, AngleExpr::slot(0))]).unwrap();
    let g1 = metric_tensor(&single, &[0.731]).unwrap();
    let err1 = (g1[(0, 0)] - 0.25).abs();

    // Independent RX on each of two qubits: diag(1/4, 1/4) exactly.
    let double = CircuitTemplate::new(
        2,
        2,
        vec![
            GateOp::rx(0, AngleExpr::slot(0)),
            GateOp::rx(1, AngleExpr::slot(1)),
        ],
    )
    .unwrap();
    let g2 = metric_tensor(&double, &[0.2, -1.1]).unwrap();
    let err2 = (&g2 - DMatrix::from_diagonal_element(2, 2, 0.25)).abs().max();

    verdict(
        2,
        worst < 1e-6 && err1 < 1e-10 && err2 < 1e-10,
        &format!(
            "max-abs FD error {worst:.2e} (bound 1e-6); closed-form errors {err1:.1e}, {err2:.1e} (bound 1e-10)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 3 — meta-gradient tape vs finite differences over every learned
// weight at H=4, T=3.
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_meta_gradient_oracle() {
    let task = build_random_pqc(3, 2, 21).unwrap();
    let hidden = 4;
    let mut worst = 0.0f64;
    for seed in 0..3u64 {
        // Dense weights everywhere (the shipped init zeroes the heads, which
        // would blank out most of the gradient being checked).
        let base = L2OWeights::init(hidden, seed);
        let mut rng = seeds::rng(23, &["meta_oracle", "w"], &[seed]);
        let flat: Vec<f64> = base
            .flatten()
            .iter()
            .map(|_| rand::Rng::gen_range(&mut rng, -0.5..0.5))
            .collect();
        let weights = L2OWeights::from_flat(hidden, &flat).unwrap();

        let mut theta_rng = seeds::rng(23, &["meta_oracle", "theta"], &[seed]);
        let theta0 = random_theta(task.n_params(), &mut theta_rng);

        let tape = record_tape(&task, &theta0, 3, &weights, PrecondMode::Full, None, None).unwrap();
        let grad = meta_grad(&task, &theta0, 3, &weights, PrecondMode::Full, None, None)
            .unwrap()
            .grad
            .expect("non-diverged")
            .flatten();

        let h = 1e-5;
        let fd: Vec<f64> = (0..flat.len())
            .map(|k| {
                let mut plus = flat.clone();
                plus[k] += h;
                let mut minus = flat.clone();
                minus[k] -= h;
                let lp = tape
                    .surrogate_loss(&L2OWeights::from_flat(hidden, &plus).unwrap())
                    .unwrap();
                let lm = tape
                    .surrogate_loss(&L2OWeights::from_flat(hidden, &minus).unwrap())
                    .unwrap();
                (lp - lm) / (2.0 * h)
            })
            .collect();
        let diff = grad
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(diff / scale.max(1e-12));
    }
    verdict(
        3,
        worst < 1e-4,
        &format!("worst relative meta-gradient error {worst:.2e} over 3 seeds (bound 1e-4)"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 4 — brute-force equivalences: QAOA layers vs dense evolution,
// MaxCut observable vs combinatorial cuts, SK costs vs direct spin sums.
// ---------------------------------------------------------------------------

/// Cut weight of the assignment `x` (qubit 0 = most significant bit).
fn cut_value(graph: &Graph, x: usize) -> f64 {
    let n = graph.n_vertices;
    graph
        .edges
        .iter()
        .map(|&(i, j, w)| {
            let bi = (x >> (n - 1 - i)) & 1;
            let bj = (x >> (n - 1 - j)) & 1;
            if bi != bj {
                w
            } else {
                0.0
            }
        })
        .sum()
}

fn basis_state(n_qubits: usize, index: usize) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    amps[index] = C64::new(1.0, 0.0);
    StateVector::from_amplitudes(amps).unwrap()
}

#[test]
fn criterion_04_brute_force_equivalence() {
    // (a) QAOA compiled layers vs exact dense evolution on V = 5, p = 2.
    let graph = gen_er_graph(5, 0.5, 1).unwrap();
    let task = build_qaoa_maxcut(&graph, 2, "dense_oracle").unwrap();
    let circuit = task.circuit().unwrap();
    let n = graph.n_vertices;
    let dim = 1usize << n;

    let mut rng = seeds::rng(29, &["dense"], &[]);
    let theta = random_theta(circuit.n_params, &mut rng);

    // Mixer Σ_q X_q is real symmetric: exponentiate through its spectrum.
    let mut mixer = DMatrix::<f64>::zeros(dim, dim);
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        for row in 0..dim {
            mixer[(row, row ^ bit)] += 1.0;
        }
    }
    let eig = SymmetricEigen::new(mixer);

    let mut psi = DMatrix::<C64>::from_element(dim, 1, C64::new(1.0 / (dim as f64).sqrt(), 0.0));
    for layer in 0..2 {
        let gamma = theta[2 * layer];
        let beta = theta[2 * layer + 1];
        // Cost phase exp(−iγ Σ_e (w_e/2) Z_iZ_j), diagonal in the basis.
        for x in 0..dim {
            let mut phase = 0.0;
            for &(i, j, w) in &graph.edges {
                let zi = 1.0 - 2.0 * ((x >> (n - 1 - i)) & 1) as f64;
                let zj = 1.0 - 2.0 * ((x >> (n - 1 - j)) & 1) as f64;
                phase += 0.5 * w * zi * zj;
            }
            psi[(x, 0)] *= C64::from_polar(1.0, -gamma * phase);
        }
        // Mixer exp(−i(β/2) Σ X) = Q·exp(−i(β/2)Λ)·Qᵀ.
        let rotated = eig.eigenvectors.transpose().map(C64::from) * &psi;
        let mut scaled = rotated;
        for (k, lambda) in eig.eigenvalues.iter().enumerate() {
            scaled[(k, 0)] *= C64::from_polar(1.0, -0.5 * beta * lambda);
        }
        psi = eig.eigenvectors.map(C64::from) * scaled;
    }
    let simulated = circuit.run(&theta).unwrap();
    let qaoa_err = simulated
        .amplitudes()
        .iter()
        .zip(psi.column(0).iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);

    // (b) MaxCut observable ↔ combinatorial cut value, V = 6, full enumeration.
    let graph6 = gen_er_graph(6, 0.5, 2).unwrap();
    let ham6 = maxcut_hamiltonian(&graph6).unwrap();
    let mut cut_err = 0.0f64;
    let mut best_cut = 0.0f64;
    for x in 0..(1usize << 6) {
        let from_observable = -basis_state(6, x).expectation(&ham6).unwrap();
        let combinatorial = cut_value(&graph6, x);
        cut_err = cut_err.max((from_observable - combinatorial).abs());
        best_cut = best_cut.max(combinatorial);
    }
    let (c_max, _) = brute_force_maxcut(&graph6).unwrap();
    cut_err = cut_err.max((c_max - best_cut).abs());

    // (c) SK basis-state costs vs the direct 1/√n spin sum.
    let sk = build_qaoa_sk(6, 3, SK_INSTANCE_SEED).unwrap();
    let couplings = match &sk.info {
        TaskInfo::QaoaSk { couplings, .. } => couplings.clone(),
        _ => unreachable!(),
    };
    let observable = match &sk.cost {
        CostModel::Expectation { observable, .. } => observable.clone(),
        _ => unreachable!(),
    };
    let scale = 1.0 / 6.0f64.sqrt();
    let mut sk_err = 0.0f64;
    for x in 0..(1usize << 6) {
        let direct: f64 = couplings
            .iter()
            .map(|&(i, j, j_ij)| {
                let si = 1.0 - 2.0 * ((x >> (5 - i)) & 1) as f64;
                let sj = 1.0 - 2.0 * ((x >> (5 - j)) & 1) as f64;
                scale * j_ij as f64 * si * sj
            })
            .sum();
        let from_observable = basis_state(6, x).expectation(&observable).unwrap();
        sk_err = sk_err.max((direct - from_observable).abs());
    }

    verdict(
        4,
        qaoa_err < 1e-8 && cut_err < 1e-9 && sk_err < 1e-9,
        &format!(
            "dense-evolution amp error {qaoa_err:.2e} (bound 1e-8); cut enumeration error {cut_err:.1e}; SK spin-sum error {sk_err:.1e}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 5 — transfer: the (7,5)-trained optimizer reaches ≤ −0.95 within
// 200 steps on at least 8 of 10 unseen random PQCs.
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_pqc_transfer() {
    let weights = curriculum_model(PQC_META_SEED);
    let bests: Vec<f64> = TRANSFER_GRID
        .par_iter()
        .enumerate()
        .map(|(i, (nq, layers))| {
            let instance = build_random_pqc(*nq, *layers, 100 + i as u64).unwrap();
            let mut rng = seeds::rng(7, &["eval"], &[i as u64]);
            let theta0 = random_theta(instance.n_params(), &mut rng);
            let traj = unroll(&instance, &theta0, 200, weights, PrecondMode::Full, None).unwrap();
            traj.losses.iter().cloned().fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hits = bests.iter().filter(|b| **b <= -0.95).count();
    let summary: Vec<String> = bests.iter().map(|b| format!("{b:.2}")).collect();
    verdict(
        5,
        hits >= 8,
        &format!(
            "{hits}/10 unseen PQCs reached ≤ −0.95 within 200 steps (need ≥ 8); best losses [{}]",
            summary.join(", ")
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 — ablation direction: with identical budget, the metric-blended
// rule ends at least as low as the identity-preconditioned one on (7,8).
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_ablation_direction() {
    let full = curriculum_model(PQC_META_SEED);
    let ident = identity_model();
    let finals: Vec<(f64, f64)> = (0..5u64)
        .into_par_iter()
        .map(|k| {
            let instance = build_random_pqc(7, 8, 300 + k).unwrap();
            let mut rng = seeds::rng(13, &["ablate"], &[k]);
            let theta0 = random_theta(instance.n_params(), &mut rng);
            let f = unroll(&instance, &theta0, 200, full, PrecondMode::Full, None).unwrap();
            let i = unroll(
                &instance,
                &theta0,
                200,
                ident,
                PrecondMode::IdentityPrecond,
                None,
            )
            .unwrap();
            (
                *f.losses.last().unwrap(),
                *i.losses.last().unwrap(),
            )
        })
        .collect();
    let full_mean = mean(&finals.iter().map(|(f, _)| *f).collect::<Vec<_>>());
    let ident_mean = mean(&finals.iter().map(|(_, i)| *i).collect::<Vec<_>>());
    verdict(
        6,
        full_mean <= ident_mean,
        &format!(
            "mean final loss on (7,8): full {full_mean:.3} vs identity-preconditioned {ident_mean:.3} (need full ≤ identity)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 7 — curriculum ablation: held-out validation at T = 80 favors the
// staged schedule over a flat [80] schedule of equal trajectory budget.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_curriculum_ablation() {
    let task = pqc_teacher();
    let cfg = MetaConfig::default();
    let flat_cfg = flat_config();
    let mut wins = 0usize;
    let mut details = Vec::new();
    for &seed in &CURRICULUM_SEEDS {
        let curr = mean(&validation_losses(&task, curriculum_model(seed), 80, &cfg, seed).unwrap());
        let flat = mean(&validation_losses(&task, flat_model(seed), 80, &flat_cfg, seed).unwrap());
        if curr <= flat {
            wins += 1;
        }
        details.push(format!("seed {seed}: {curr:.2} vs {flat:.2}"));
    }
    verdict(
        7,
        wins * 2 > CURRICULUM_SEEDS.len(),
        &format!(
            "curriculum val@80 beat flat-[80] on {wins}/{} training seeds ({})",
            CURRICULUM_SEEDS.len(),
            details.join("; ")
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 8 — SK band: mean final objective ≤ −2.8 and at least as low as
// every default baseline.
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_sk_band() {
    let task = sk_task();
    let weights = sk_model();
    let kinds = [
        BaselineKind::Gd,
        BaselineKind::Momentum,
        BaselineKind::Adam,
        BaselineKind::Adagrad,
        BaselineKind::Rmsprop,
        BaselineKind::Qngd,
    ];
    let mut l2o_finals = Vec::new();
    for k in 0..5u64 {
        let theta0 = theta0_for(&task, "sk", k);
        let record = run_l2o(&task, weights, PrecondMode::Full, &theta0, 200).unwrap();
        l2o_finals.push(record.final_loss().unwrap());
    }
    let l2o_mean = mean(&l2o_finals);

    let mut worst_baseline: Option<(String, f64)> = None;
    let mut beats_all = true;
    for kind in kinds {
        let cfg = BaselineConfig::new(kind);
        let mut finals = Vec::new();
        for k in 0..5u64 {
            let theta0 = theta0_for(&task, "sk", k);
            let record = run_baseline(&task, &cfg, &theta0, 200).unwrap();
            finals.push(record.final_loss().unwrap());
        }
        let m = mean(&finals);
        if l2o_mean > m {
            beats_all = false;
        }
        if worst_baseline.as_ref().map_or(true, |(_, v)| m < *v) {
            worst_baseline = Some((kind.id().to_string(), m));
        }
    }
    let (best_name, best_val) = worst_baseline.unwrap();
    verdict(
        8,
        l2o_mean <= -2.8 && beats_all,
        &format!(
            "L2O mean final objective {l2o_mean:.3} (need ≤ −2.8) vs strongest baseline {best_name} {best_val:.3}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 9 — MaxCut protocol: single-config L2O approximation ratio within
// 0.02 of the best-of-five-rates natural gradient.
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_maxcut_protocol() {
    let (task, c_max) = maxcut_task();
    let weights = maxcut_model();

    let lrs: Vec<f64> = (0..5).map(|i| 10f64.powf(-2.0 - 0.5 * i as f64)).collect();
    let mut qngd_best = f64::NEG_INFINITY;
    for lr in &lrs {
        let mut cfg = BaselineConfig::new(BaselineKind::Qngd);
        cfg.lr = *lr;
        let mut ratios = Vec::new();
        for k in 0..5u64 {
            let theta0 = theta0_for(&task, "mc", k);
            let record = run_baseline(&task, &cfg, &theta0, 200).unwrap();
            ratios.push(-record.final_loss().unwrap() / c_max);
        }
        qngd_best = qngd_best.max(mean(&ratios));
    }

    let mut ratios = Vec::new();
    for k in 0..5u64 {
        let theta0 = theta0_for(&task, "mc", k);
        let record = run_l2o(&task, weights, PrecondMode::Full, &theta0, 200).unwrap();
        ratios.push(-record.final_loss().unwrap() / c_max);
    }
    let l2o_mean = mean(&ratios);

    verdict(
        9,
        l2o_mean >= qngd_best - 0.02,
        &format!(
            "L2O mean approximation ratio {l2o_mean:.3} vs best-of-5-rates QNGD {qngd_best:.3} (allowed gap 0.02)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 10 — re-upload classifier: the learned optimizer trains it to
// ≥ 85% test accuracy and beats default-rate GD by ≥ 10 points.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_reupload_band() {
    let task = reupload_task();
    let weights = reupload_model();
    let mut l2o_accs = Vec::new();
    let mut gd_accs = Vec::new();
    for k in 0..3u64 {
        let theta0 = theta0_for(&task, "ru", k);
        let record = run_l2o(&task, weights, PrecondMode::Full, &theta0, 200).unwrap();
        l2o_accs.push(
            record
                .final_metrics
                .get("test_accuracy")
                .copied()
                .unwrap_or(0.0),
        );
        let gd = run_baseline(&task, &BaselineConfig::new(BaselineKind::Gd), &theta0, 200).unwrap();
        gd_accs.push(gd.final_metrics.get("test_accuracy").copied().unwrap_or(0.0));
    }
    let l2o_mean = 100.0 * mean(&l2o_accs);
    let gd_mean = 100.0 * mean(&gd_accs);
    verdict(
        10,
        l2o_mean >= 85.0 && gd_mean <= l2o_mean - 10.0,
        &format!(
            "L2O test accuracy {l2o_mean:.1}% (need ≥ 85) vs default-rate GD {gd_mean:.1}% (need gap ≥ 10)"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 11 — VQE sanity on the shipped H₂ Hamiltonian: chemical-scale
// accuracy on ≥ 8/10 starts, reaching the loose band no slower than Adam.
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_vqe_sanity() {
    let (_, e0) = *h2_hamiltonian();
    let task = vqe_task();
    let weights = vqe_model();

    let first_step_below = |losses: &[f64], bar: f64| -> f64 {
        losses
            .iter()
            .position(|l| *l <= bar)
            .map(|p| p as f64)
            .unwrap_or(f64::INFINITY)
    };
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };

    let mut hits = 0usize;
    let mut l2o_steps = Vec::new();
    let mut adam_steps = Vec::new();
    for k in 0..10u64 {
        let theta0 = theta0_for(&task, "h2", k);
        let record = run_l2o(&task, weights, PrecondMode::Full, &theta0, 200).unwrap();
        let best = record.losses.iter().cloned().fold(f64::INFINITY, f64::min);
        if best <= e0 + 2e-2 {
            hits += 1;
        }
        l2o_steps.push(first_step_below(&record.losses, e0 + 0.05));
        let adam = run_baseline(
            &task,
            &BaselineConfig::new(BaselineKind::Adam),
            &theta0,
            200,
        )
        .unwrap();
        adam_steps.push(first_step_below(&adam.losses, e0 + 0.05));
    }
    let l2o_median = median(l2o_steps);
    let adam_median = median(adam_steps);
    verdict(
        11,
        hits >= 8 && l2o_median <= adam_median,
        &format!(
            "{hits}/10 starts within 2e-2 Ha of E₀ = {e0:.6}; median steps to E₀+0.05: L2O {l2o_median} vs Adam {adam_median}"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 12 — determinism: identical CSVs across thread counts and reruns.
// ---------------------------------------------------------------------------

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("tiny.ckpt");
    save_checkpoint(&L2OWeights::init(8, 0), &ckpt, 0).unwrap();

    let suite = SuiteSpec {
        seed: 9,
        steps: 40,
        replicates: 2,
        tasks: vec![
            TaskSpec::RandomPqc {
                n_qubits: 3,
                layers: 2,
                seed: 5,
            },
            TaskSpec::QaoaSk {
                n_spins: 4,
                p_layers: 2,
                seed: 3,
            },
        ],
        optimizers: vec![
            OptimizerSpec::Baseline {
                name: "adam".into(),
                lr: None,
                id: None,
            },
            OptimizerSpec::Baseline {
                name: "qngd".into(),
                lr: None,
                id: None,
            },
            OptimizerSpec::L2o {
                checkpoint: ckpt.clone(),
                mode: PrecondMode::Full,
                id: None,
            },
        ],
    };

    let csv_for = |threads: usize, out: &Path| -> Vec<u8> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let records = pool.install(|| run_suite(&suite, dir.path(), out).unwrap());
        let csv = out.join("results.csv");
        report(&records, ReportKind::Csv, &csv).unwrap();
        std::fs::read(&csv).unwrap()
    };

    let single = csv_for(1, &dir.path().join("t1"));
    let quad = csv_for(4, &dir.path().join("t4"));
    // Rerun over the already-populated directory: records are reused, so the
    // bytes must also survive a resume.
    let rerun = csv_for(2, &dir.path().join("t1"));

    let mut counts = BTreeMap::new();
    counts.insert("threads=1 vs threads=4", single == quad);
    counts.insert("fresh vs resumed", single == rerun);
    let pass = counts.values().all(|v| *v);
    verdict(
        12,
        pass,
        &format!(
            "CSV bytes identical across thread counts and reruns ({} rows)",
            String::from_utf8_lossy(&single).lines().count().saturating_sub(1)
        ),
    );
}
