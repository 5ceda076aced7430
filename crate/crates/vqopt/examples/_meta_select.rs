//! Scratch: per-trajectory snapshot selection — which validation metric
//! finds the transfer-strong weights?

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_grad, unroll, CoordState, L2OWeights, MetaConfig, PrecondMode};
use vqopt::opt::{baseline_step, BaselineConfig, BaselineKind, OptState};
use vqopt::seeds;

fn transfer_hits(weights: &L2OWeights) -> usize {
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
    evals
        .par_iter()
        .enumerate()
        .map(|(i, (nq, nl))| {
            let inst = build_random_pqc(*nq, *nl, 100 + i as u64).unwrap();
            let mut rng = seeds::rng(7, &["eval"], &[i as u64]);
            let theta0 = random_theta(inst.n_params(), &mut rng);
            let traj = unroll(&inst, &theta0, 200, weights, PrecondMode::Full, None).unwrap();
            let best = traj.losses.iter().cloned().fold(f64::INFINITY, f64::min);
            usize::from(!traj.diverged && best <= -0.95)
        })
        .sum()
}

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
    let p = task.n_params();

    for seed in [0u64, 1, 2] {
        let cfg = MetaConfig::default();
        let mut weights = L2OWeights::init(cfg.hidden, seed);
        let mut adam = BaselineConfig::new(BaselineKind::Adam);
        adam.lr = cfg.meta_lr;
        let mut adam_state = OptState::new(L2OWeights::n_flat(cfg.hidden));

        // (metric value, weights) per selector; lower is better.
        let mut best_outer: Option<(f64, L2OWeights)> = None;
        let mut best_best200: Option<(f64, L2OWeights)> = None;

        for (stage, &t_len) in cfg.schedule.iter().enumerate() {
            let val_len = cfg.schedule.get(stage + 1).copied().unwrap_or(t_len);
            for traj_idx in 0..cfg.trajectories_per_stage {
                let mut rng =
                    seeds::rng(seed, &["meta", "traj"], &[stage as u64, traj_idx as u64]);
                let mut theta = random_theta(p, &mut rng);
                let mut state: Option<CoordState> = None;
                let mut remaining = cfg.trajectory_len;
                while remaining > 0 {
                    let window = t_len.min(remaining);
                    let result =
                        meta_grad(&task, &theta, window, &weights, cfg.mode, None, state.as_ref())?;
                    match result.grad {
                        Some(grad) => {
                            let mut flat_grad = grad.flatten();
                            if let Some(clip) = cfg.grad_clip {
                                let n = flat_grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                                if n > clip {
                                    for g in &mut flat_grad {
                                        *g *= clip / n;
                                    }
                                }
                            }
                            let mut flat = weights.flatten();
                            baseline_step(&adam, &mut adam_state, &mut flat, &flat_grad, None)?;
                            weights = L2OWeights::from_flat(cfg.hidden, &flat)?;
                            theta = result.trajectory.thetas.last().unwrap().clone();
                            state = result.final_state;
                            remaining -= window;
                        }
                        None => break,
                    }
                }

                // Validation trajectories for both candidate metrics.
                let rows: Vec<(f64, f64)> = [1u64, 2, 3, 4, 5]
                    .par_iter()
                    .map(|&s| {
                        let mut vrng = seeds::rng(seed, &["meta", "val"], &[s]);
                        let theta0 = random_theta(p, &mut vrng);
                        let shortt =
                            unroll(&task, &theta0, val_len, &weights, cfg.mode, None).unwrap();
                        let longt =
                            unroll(&task, &theta0, 200, &weights, cfg.mode, None).unwrap();
                        let best200 =
                            longt.losses.iter().cloned().fold(f64::INFINITY, f64::min);
                        (shortt.outer_loss, best200)
                    })
                    .collect();
                let mean_outer = rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64;
                let mean_b200 = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
                if best_outer.as_ref().map_or(true, |(m, _)| mean_outer < *m) {
                    best_outer = Some((mean_outer, weights.clone()));
                }
                if best_best200.as_ref().map_or(true, |(m, _)| mean_b200 < *m) {
                    best_best200 = Some((mean_b200, weights.clone()));
                }
            }
        }

        let (mo, wo) = best_outer.unwrap();
        let (mb, wb) = best_best200.unwrap();
        println!(
            "seed {seed}: outer-selected hits {}/10 (val {mo:.1}) | best200-selected hits {}/10 (val {mb:.3}) | final-weights hits {}/10",
            transfer_hits(&wo),
            transfer_hits(&wb),
            transfer_hits(&weights),
        );
    }
    Ok(())
}
