//! Scratch: step-by-step behavior of a trained rule on hit vs miss
//! instances.

use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::geom::{param_shift_grad, pinv_psd, task_metric};
use vqopt::l2o::{
    l2o_cell, l2o_update, meta_train, preprocess_grad, CoordState, MetaConfig,
};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
    let cfg = MetaConfig::default();
    let (weights, _) = meta_train(&task, &cfg, 0)?;

    for (idx, nq, nl) in [(0usize, 6usize, 4usize), (3, 7, 4)] {
        let inst = build_random_pqc(nq, nl, 100 + idx as u64)?;
        let p = inst.n_params();
        let mut rng = seeds::rng(7, &["eval"], &[idx as u64]);
        let mut theta = random_theta(p, &mut rng);
        let mut state = CoordState::zeros(weights.hidden, p);
        println!("instance {idx} ({nq},{nl}): p = {p}");
        let mut best = f64::INFINITY;
        for t in 0..200 {
            let loss = inst.loss(&theta)?;
            best = best.min(loss);
            let grad = param_shift_grad(&inst, &theta)?;
            let z = preprocess_grad(&grad)?;
            let out = l2o_cell(&weights, &z, &state)?;
            let g = task_metric(&inst, &theta)?;
            let gp = pinv_psd(&g, 1e-6)?;
            let next = l2o_update(&theta, &out.alpha, &out.beta, &out.gamma, Some(&gp))?;
            if t % 20 == 0 || t == 199 {
                let eta_mean =
                    out.alpha.iter().map(|a| (0.01 * a).exp()).sum::<f64>() / p as f64;
                let beta_mean = out.beta.iter().map(|b| b.abs()).sum::<f64>() / p as f64;
                let gamma_mean = out.gamma.iter().sum::<f64>() / p as f64;
                let step_inf = next
                    .iter()
                    .zip(&theta)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                let gnorm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
                let gp_max = (0..p).map(|k| gp[(k, k)]).fold(0.0f64, f64::max);
                println!(
                    "  t {t:>3}: loss {loss:+.4} best {best:+.4} |grad| {gnorm:.2e} mean_eta {eta_mean:.3} mean|beta| {beta_mean:.2} mean_gamma {gamma_mean:.2} step_inf {step_inf:.2e} gp_diag_max {gp_max:.1e}"
                );
            }
            state = out.state;
            theta = next;
        }
    }
    Ok(())
}
