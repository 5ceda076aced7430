//! Scratch: (meta_lr, grad_clip) sweep under the windowed protocol.

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_train, unroll, L2OWeights, MetaConfig, PrecondMode};
use vqopt::seeds;

fn transfer(weights: &L2OWeights) -> (usize, f64) {
    let evals: Vec<(usize, usize)> = vec![
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
    let bests: Vec<f64> = evals
        .par_iter()
        .enumerate()
        .map(|(i, (nq, nl))| {
            let inst = build_random_pqc(*nq, *nl, 100 + i as u64).unwrap();
            let mut rng = seeds::rng(7, &["eval"], &[i as u64]);
            let theta0 = random_theta(inst.n_params(), &mut rng);
            let traj = unroll(&inst, &theta0, 200, weights, PrecondMode::Full, None).unwrap();
            if traj.diverged {
                f64::INFINITY
            } else {
                traj.losses.iter().cloned().fold(f64::INFINITY, f64::min)
            }
        })
        .collect();
    let hits = bests.iter().filter(|b| **b <= -0.95).count();
    let mean = bests.iter().sum::<f64>() / bests.len() as f64;
    (hits, mean)
}

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
    for (lr, clip) in [
        (1e-3, 0.5),
        (1e-3, 0.25),
        (2e-3, 1.0),
        (2e-3, 0.5),
        (3e-3, 1.0),
    ] {
        for seed in [0u64, 1, 2] {
            let cfg = MetaConfig {
                meta_lr: lr,
                grad_clip: Some(clip),
                ..MetaConfig::default()
            };
            let (weights, log) = meta_train(&task, &cfg, seed)?;
            let (hits, mean) = transfer(&weights);
            println!(
                "lr {lr:.0e} clip {clip} seed {seed}: best_stage {} stages {} | hits {hits}/10 mean_best {mean:.3}",
                log.best_stage,
                log.stages.len()
            );
        }
    }
    Ok(())
}
