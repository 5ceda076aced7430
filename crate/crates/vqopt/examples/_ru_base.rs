//! Scratch: can any baseline escape the re-upload plateau from the fixture θ₀?

use vqopt::circuits::{balanced_radius, build_reupload, random_theta, Task};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn theta0_for(task: &Task, k: u64) -> Vec<f64> {
    let mut rng = seeds::rng(11, &["ru"], &[k]);
    random_theta(task.n_params(), &mut rng)
}

fn main() -> vqopt::Result<()> {
    let task = build_reupload(3, 200, 1000, balanced_radius(), 5)?;
    for (name, kind, lr) in [
        ("gd_default", BaselineKind::Gd, 0.01),
        ("adam_default", BaselineKind::Adam, 0.01),
        ("rmsprop_0.05", BaselineKind::Rmsprop, 0.05),
        ("adam_0.05", BaselineKind::Adam, 0.05),
    ] {
        for steps in [200usize, 500] {
            let mut accs = Vec::new();
            for k in 0..3u64 {
                let mut cfg = BaselineConfig::new(kind);
                cfg.lr = lr;
                let rec = run_baseline(&task, &cfg, &theta0_for(&task, k), steps)?;
                accs.push(rec.final_metrics.get("test_accuracy").copied().unwrap_or(0.0));
            }
            println!(
                "{name} @{steps}: {:?} mean {:.1}%",
                accs.iter().map(|a| format!("{a:.2}")).collect::<Vec<_>>(),
                100.0 * accs.iter().sum::<f64>() / 3.0
            );
        }
    }
    Ok(())
}
