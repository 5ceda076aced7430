//! Scratch: does the choice of (7,5) teacher instance change transfer?

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
    for task_seed in [1u64, 7, 13, 42] {
        let task = build_random_pqc(7, 5, task_seed)?;
        for seed in [0u64, 1] {
            let cfg = MetaConfig::default();
            let (weights, log) = meta_train(&task, &cfg, seed)?;
            let (hits, mean) = transfer(&weights);
            println!(
                "teacher seed {task_seed} meta seed {seed}: best_stage {} | hits {hits}/10 mean_best {mean:.3}",
                log.best_stage
            );
        }
    }
    Ok(())
}
