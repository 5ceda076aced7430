//! Scratch: baseline hit rates on the 10 transfer-eval PQC instances.

use rayon::prelude::*;
use vqopt::circuits::{build_random_pqc, random_theta};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
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
    for kind in [
        BaselineKind::Gd,
        BaselineKind::Momentum,
        BaselineKind::Adam,
        BaselineKind::Rmsprop,
        BaselineKind::Adagrad,
        BaselineKind::Qngd,
    ] {
        let bests: Vec<f64> = evals
            .par_iter()
            .enumerate()
            .map(|(i, (nq, nl))| {
                let inst = build_random_pqc(*nq, *nl, 100 + i as u64).unwrap();
                let mut rng = seeds::rng(7, &["eval"], &[i as u64]);
                let theta0 = random_theta(inst.n_params(), &mut rng);
                let cfg = BaselineConfig::new(kind);
                let record = run_baseline(&inst, &cfg, &theta0, 200).unwrap();
                record.losses.iter().cloned().fold(f64::INFINITY, f64::min)
            })
            .collect();
        let hits = bests.iter().filter(|b| **b <= -0.95).count();
        let shown: Vec<String> = bests.iter().map(|b| format!("{b:.2}")).collect();
        println!("{kind:?}: hits {hits}/10 bests [{}]", shown.join(", "));
    }
    Ok(())
}
