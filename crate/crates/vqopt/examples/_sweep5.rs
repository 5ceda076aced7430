//! Scratch: sweep my-choice MetaConfig defaults (grad_clip, trajectory_len)
//! against the PQC transfer protocol across meta seeds.

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_train, unroll, MetaConfig, PrecondMode};
use vqopt::seeds;

fn transfer(weights: &vqopt::l2o::L2OWeights) -> (usize, f64) {
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
            traj.losses.iter().cloned().fold(f64::INFINITY, f64::min)
        })
        .collect();
    let hits = bests.iter().filter(|b| **b <= -0.95).count();
    let mean = bests.iter().sum::<f64>() / bests.len() as f64;
    (hits, mean)
}

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
    for clip in [0.5f64, 1.0, 2.0] {
        for tlen in [200usize, 280] {
            let mut line = format!("clip {clip:.1} tlen {tlen}:");
            for seed in 0..6u64 {
                let cfg = MetaConfig {
                    grad_clip: Some(clip),
                    trajectory_len: tlen,
                    ..MetaConfig::default()
                };
                let (weights, log) = meta_train(&task, &cfg, seed)?;
                let (hits, mean) = transfer(&weights);
                line.push_str(&format!(" s{seed}:{hits}({mean:.2},st{})", log.best_stage));
            }
            println!("{line}");
        }
    }
    Ok(())
}
