//! Scratch: default-config meta-training vs the PQC transfer protocol.

use rayon::prelude::*;
use std::time::Instant;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_train, unroll, MetaConfig, PrecondMode};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
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

    for seed in [0u64, 1, 2, 3, 4, 5] {
        let cfg = MetaConfig::default();
        let t0 = Instant::now();
        let (weights, log) = meta_train(&task, &cfg, seed)?;
        let train_s = t0.elapsed().as_secs_f64();

        let t1 = Instant::now();
        let results: Vec<(f64, f64, bool)> = evals
            .par_iter()
            .enumerate()
            .map(|(i, (nq, nl))| {
                let inst = build_random_pqc(*nq, *nl, 100 + i as u64).unwrap();
                let mut rng = seeds::rng(7, &["eval"], &[i as u64]);
                let theta0 = random_theta(inst.n_params(), &mut rng);
                let traj = unroll(&inst, &theta0, 200, &weights, PrecondMode::Full, None).unwrap();
                let fin = *traj.losses.last().unwrap();
                let best = traj.losses.iter().cloned().fold(f64::INFINITY, f64::min);
                (fin, best, traj.diverged)
            })
            .collect();
        let hits = results.iter().filter(|(_, b, d)| !d && *b <= -0.95).count();
        let mean_best = results.iter().map(|(_, b, _)| b).sum::<f64>() / results.len() as f64;
        let bests: Vec<String> = results
            .iter()
            .map(|(_, b, d)| if *d { "DIV".into() } else { format!("{b:.2}") })
            .collect();
        let finals: Vec<String> = results
            .iter()
            .map(|(f, _, d)| if *d { "DIV".into() } else { format!("{f:.2}") })
            .collect();
        let skipped: usize = log.stages.iter().map(|s| s.skipped).sum();
        let vals: Vec<String> = log
            .stages
            .iter()
            .map(|s| {
                format!(
                    "@{}:{:.1}",
                    s.validation_len,
                    s.validation.iter().sum::<f64>() / s.validation.len() as f64
                )
            })
            .collect();
        println!(
            "seed {seed}: best_stage {} stages {} skipped {skipped} val [{}] | hits {hits}/10 mean_best {mean_best:.3} | bests [{}] finals [{}] (train {train_s:.0}s eval {:.0}s)",
            log.best_stage,
            log.stages.len(),
            vals.join(" "),
            bests.join(", "),
            finals.join(", "),
            t1.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
