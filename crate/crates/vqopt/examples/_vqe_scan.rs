//! Scratch: VQE ansatz-depth scan — expressivity + learned-rule viability.

use std::path::Path;

use vqopt::circuits::{build_vqe_hea, load_hamiltonian, random_theta, Task};
use vqopt::l2o::{meta_train, MetaConfig, PrecondMode};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::bench::run_l2o;
use vqopt::seeds;

fn theta0_for(task: &Task, k: u64) -> Vec<f64> {
    let mut rng = seeds::rng(11, &["h2"], &[k]);
    random_theta(task.n_params(), &mut rng)
}

fn first_below(losses: &[f64], bar: f64) -> f64 {
    losses
        .iter()
        .position(|&l| l <= bar)
        .map(|i| i as f64)
        .unwrap_or(f64::INFINITY)
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn main() -> vqopt::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/h2_sto3g.ham");
    let (ham, _) = load_hamiltonian(&path)?;
    let e0 = -1.136189454066;

    for layers in [1usize, 2, 3] {
        let task = build_vqe_hea(&ham, layers, "h2")?;
        // Expressivity: best Adam reaches from 3 starts, 300 steps.
        let mut best = f64::INFINITY;
        for k in 0..3u64 {
            let rec = run_baseline(
                &task,
                &BaselineConfig::new(BaselineKind::Adam),
                &theta0_for(&task, k),
                300,
            )?;
            best = best.min(rec.losses.iter().cloned().fold(f64::INFINITY, f64::min));
        }
        println!("layers {layers}: params {} adam_best {best:.6} (e0 {e0:.6})", task.n_params());

        for ms in 0..3u64 {
            let cfg = MetaConfig::default();
            let (weights, log) = meta_train(&task, &cfg, ms)?;
            let mut hits = 0usize;
            let mut l2o_steps = Vec::new();
            let mut adam_steps = Vec::new();
            for k in 0..10u64 {
                let theta0 = theta0_for(&task, k);
                let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0, 200)?;
                let best = rec.losses.iter().cloned().fold(f64::INFINITY, f64::min);
                if best <= e0 + 2e-2 {
                    hits += 1;
                }
                l2o_steps.push(first_below(&rec.losses, e0 + 0.05));
                let arec = run_baseline(
                    &task,
                    &BaselineConfig::new(BaselineKind::Adam),
                    &theta0,
                    200,
                )?;
                adam_steps.push(first_below(&arec.losses, e0 + 0.05));
            }
            println!(
                "  l{layers} m{ms} (best_stage {}): hits {hits}/10 med {} vs adam {}",
                log.best_stage,
                median(&mut l2o_steps),
                median(&mut adam_steps)
            );
        }
    }
    Ok(())
}
