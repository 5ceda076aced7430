//! Meta-train a small learned optimizer on one task family, then pit it
//! against Adam on parameter draws it never saw during training.

use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::l2o::{meta_train, unroll, MetaConfig, PrecondMode};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(3, 2, 21)?;
    println!("meta-training on {}", task.id);

    // Short curriculum: unrolls grow as the update rule stabilizes.
    let cfg = MetaConfig {
        schedule: vec![5, 10, 20],
        trajectories_per_stage: 12,
        hidden: 12,
        ..MetaConfig::default()
    };
    let (weights, log) = meta_train(&task, &cfg, 0)?;
    for (i, stage) in log.stages.iter().enumerate() {
        let val = stage.validation.iter().sum::<f64>() / stage.validation.len() as f64;
        println!(
            "  stage {i}: unroll {:>2}, validation outer loss {val:.4}",
            stage.unroll_len
        );
    }
    println!("kept stage {} weights\n", log.best_stage);

    // Held-out comparison at a longer horizon than training ever used.
    let steps = 40;
    let adam = BaselineConfig::new(BaselineKind::Adam);
    println!("{:>6} {:>12} {:>12}", "draw", "learned", "adam");
    for draw in 0..4u64 {
        let mut rng = seeds::rng(draw, &["example", "meta", "holdout"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let traj = unroll(&task, &theta0, steps, &weights, PrecondMode::Full, None)?;
        let record = run_baseline(&task, &adam, &theta0, steps)?;
        println!(
            "{draw:>6} {:>12.6} {:>12.6}",
            traj.losses.last().unwrap(),
            record.final_loss().unwrap()
        );
    }
    Ok(())
}
