//! Scratch: does an EMA of the meta-weights transfer more stably than raw
//! iterates?

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_grad, unroll, CoordState, L2OWeights, MetaConfig, PrecondMode};
use vqopt::opt::{baseline_step, BaselineConfig, BaselineKind, OptState};
use vqopt::seeds;

fn transfer_hits(weights: &L2OWeights) -> (usize, f64) {
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
    let p = task.n_params();

    for seed in [0u64, 1, 2] {
        let cfg = MetaConfig::default();
        let mut weights = L2OWeights::init(cfg.hidden, seed);
        let mut adam = BaselineConfig::new(BaselineKind::Adam);
        adam.lr = cfg.meta_lr;
        let mut adam_state = OptState::new(L2OWeights::n_flat(cfg.hidden));

        let mut ema98 = weights.flatten();
        let mut ema995 = weights.flatten();

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
                            for (e, w) in ema98.iter_mut().zip(&flat) {
                                *e = 0.98 * *e + 0.02 * w;
                            }
                            for (e, w) in ema995.iter_mut().zip(&flat) {
                                *e = 0.995 * *e + 0.005 * w;
                            }
                            weights = L2OWeights::from_flat(cfg.hidden, &flat)?;
                            theta = result.trajectory.thetas.last().unwrap().clone();
                            state = result.final_state;
                            remaining -= window;
                        }
                        None => break,
                    }
                }
            }
            let (hr, mr) = transfer_hits(&weights);
            let (h98, m98) = transfer_hits(&L2OWeights::from_flat(cfg.hidden, &ema98)?);
            let (h995, m995) = transfer_hits(&L2OWeights::from_flat(cfg.hidden, &ema995)?);
            println!(
                "seed {seed} stage {stage} (unroll {t_len:>2}): raw {hr}/10 ({mr:.3}) | ema.98 {h98}/10 ({m98:.3}) | ema.995 {h995}/10 ({m995:.3})"
            );
        }
    }
    Ok(())
}
