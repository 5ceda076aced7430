//! Scratch: more meta seeds for the SK fixture (instance 1).

use vqopt::bench::run_l2o;
use vqopt::circuits::{build_qaoa_sk, random_theta, Task};
use vqopt::l2o::{meta_train, MetaConfig, PrecondMode};
use vqopt::seeds;

fn theta0_for(task: &Task, k: u64) -> Vec<f64> {
    let mut rng = seeds::rng(11, &["sk"], &[k]);
    random_theta(task.n_params(), &mut rng)
}

fn main() -> vqopt::Result<()> {
    let task = build_qaoa_sk(6, 3, 1)?;
    for mseed in [3u64, 4, 5, 6, 7] {
        let (weights, log) = meta_train(&task, &MetaConfig::default(), mseed)?;
        let mut finals = Vec::new();
        for k in 0..5u64 {
            let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0_for(&task, k), 200)?;
            finals.push(rec.final_loss().unwrap_or(f64::INFINITY));
        }
        let mean = finals.iter().sum::<f64>() / 5.0;
        println!(
            "m{mseed}: mean {mean:.3} finals {:?} best_stage {}",
            finals.iter().map(|f| format!("{f:.2}")).collect::<Vec<_>>(),
            log.best_stage
        );
    }
    Ok(())
}
