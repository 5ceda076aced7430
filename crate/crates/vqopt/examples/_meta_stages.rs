//! Scratch: transfer quality of every stage-end snapshot (training loop
//! replicated without snapshot selection).

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_grad, unroll, CoordState, L2OWeights, MetaConfig, PrecondMode};
use vqopt::opt::{baseline_step, BaselineConfig, BaselineKind, OptState};
use vqopt::seeds;

fn transfer_bests(weights: &L2OWeights) -> Vec<f64> {
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
            if traj.diverged {
                f64::INFINITY
            } else {
                traj.losses.iter().cloned().fold(f64::INFINITY, f64::min)
            }
        })
        .collect()
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
        println!("seed {seed}:");
        for (stage, &t_len) in cfg.schedule.iter().enumerate() {
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
            }
            let bests = transfer_bests(&weights);
            let hits = bests.iter().filter(|b| **b <= -0.95).count();
            // Candidate selection metrics from the 5 held-out θ₀ streams.
            let val_stats = |len: usize, w: &L2OWeights| -> (f64, f64, f64) {
                let rows: Vec<(f64, f64, f64)> = [1u64, 2, 3, 4, 5]
                    .par_iter()
                    .map(|&s| {
                        let mut rng = seeds::rng(seed, &["meta", "val"], &[s]);
                        let theta0 = random_theta(p, &mut rng);
                        let traj =
                            unroll(&task, &theta0, len, w, PrecondMode::Full, None).unwrap();
                        let best = traj.losses.iter().cloned().fold(f64::INFINITY, f64::min);
                        (traj.outer_loss, *traj.losses.last().unwrap(), best)
                    })
                    .collect();
                let m = |f: fn(&(f64, f64, f64)) -> f64| {
                    rows.iter().map(f).sum::<f64>() / rows.len() as f64
                };
                (m(|r| r.0), m(|r| r.1), m(|r| r.2))
            };
            let (o80, f80, b80) = val_stats(80, &weights);
            let (o200, f200, b200) = val_stats(200, &weights);
            println!(
                "  stage {stage} (unroll {t_len:>2}): hits {hits}/10 | @80 outer {o80:.1} final {f80:.3} best {b80:.3} | @200 outer {o200:.1} final {f200:.3} best {b200:.3}"
            );
        }
    }
    Ok(())
}
