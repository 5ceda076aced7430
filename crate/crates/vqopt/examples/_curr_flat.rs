//! Scratch: criterion-7 probe — curriculum vs flat-[80] validation at T=80.

use vqopt::circuits::build_random_pqc;
use vqopt::l2o::{meta_train, validation_losses, MetaConfig};

fn main() -> vqopt::Result<()> {
    let task = build_random_pqc(7, 5, 0)?;
    let cfg = MetaConfig::default();
    let flat_cfg = MetaConfig {
        schedule: vec![80],
        trajectories_per_stage: 100,
        ..MetaConfig::default()
    };
    for seed in 0..3u64 {
        let (curr_w, _) = meta_train(&task, &cfg, seed)?;
        let (flat_w, _) = meta_train(&task, &flat_cfg, seed)?;
        let curr = validation_losses(&task, &curr_w, 80, &cfg, seed)?;
        let flat = validation_losses(&task, &flat_w, 80, &flat_cfg, seed)?;
        let cm = curr.iter().sum::<f64>() / curr.len() as f64;
        let fm = flat.iter().sum::<f64>() / flat.len() as f64;
        println!(
            "seed {seed}: curriculum {cm:.2} vs flat {fm:.2} -> {}",
            if cm <= fm { "curriculum wins" } else { "flat wins" }
        );
    }
    Ok(())
}
