//! Race the six classic baselines on one randomly generated circuit task,
//! all starting from the same parameter vector.

use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(4, 3, 7)?;
    println!("task {} ({} parameters)", task.id, task.n_params());

    let mut rng = seeds::rng(11, &["example", "baselines"], &[]);
    let theta0 = random_theta(task.n_params(), &mut rng);

    println!("{:<10} {:>12} {:>12} {:>12}", "optimizer", "initial", "step 25", "step 100");
    for kind in BaselineKind::ALL {
        let config = BaselineConfig::new(kind);
        let record = run_baseline(&task, &config, &theta0, 100)?;
        println!(
            "{:<10} {:>12.6} {:>12.6} {:>12.6}",
            kind.id(),
            record.losses[0],
            record.losses[25],
            record.losses[100]
        );
    }
    println!("(all at their default learning rate; qngd inverts the metric each step)");
    Ok(())
}
