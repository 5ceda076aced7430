//! Train the single-qubit data re-upload classifier on the circle dataset:
//! three blocks of feature-modulated rotations, two trainable class weights.

use vqopt::circuits::{balanced_radius, build_reupload, random_theta};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    // The radius makes both classes equally likely, so accuracy 0.5 is
    // chance level.
    let task = build_reupload(3, 200, 1000, balanced_radius(), 5)?;
    println!("{} with {} trainables", task.id, task.n_params());

    let mut rng = seeds::rng(3, &["example", "reupload"], &[]);
    let theta0 = random_theta(task.n_params(), &mut rng);

    // The squared-error landscape has a wide chance-level plateau that traps
    // timid optimizers; a bolder rate escapes it.
    let mut config = BaselineConfig::new(BaselineKind::Rmsprop);
    config.lr = 0.05;
    let record = run_baseline(&task, &config, &theta0, 500)?;

    println!("loss {:.6} → {:.6}", record.losses[0], record.final_loss().unwrap());
    for (name, value) in &record.final_metrics {
        println!("{name} = {value:.4}");
    }
    Ok(())
}
