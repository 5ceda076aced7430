//! Scratch: seed/instance scans for the SK, re-upload, and VQE fixtures.

use std::path::Path;
use vqopt::bench::run_l2o;
use vqopt::circuits::{
    balanced_radius, build_qaoa_sk, build_reupload, build_vqe_hea, exact_ground_energy,
    load_hamiltonian, random_theta, CostModel, Task,
};
use vqopt::l2o::{meta_train, MetaConfig, PrecondMode};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

const ALL_KINDS: [BaselineKind; 6] = [
    BaselineKind::Gd,
    BaselineKind::Momentum,
    BaselineKind::Adam,
    BaselineKind::Adagrad,
    BaselineKind::Rmsprop,
    BaselineKind::Qngd,
];

fn theta0_for(task: &Task, tag: &str, k: u64) -> Vec<f64> {
    let mut rng = seeds::rng(11, &[tag], &[k]);
    random_theta(task.n_params(), &mut rng)
}

fn main() -> vqopt::Result<()> {
    // --- SK ----------------------------------------------------------------
    for inst in [1u64, 3, 4, 5] {
        let task = build_qaoa_sk(6, 3, inst)?;
        let e0 = match &task.cost {
            CostModel::Expectation { observable, .. } => exact_ground_energy(observable)?,
            _ => unreachable!(),
        };
        let mut base_means = Vec::new();
        for kind in ALL_KINDS {
            let cfg = BaselineConfig::new(kind);
            let mut finals = Vec::new();
            for k in 0..5u64 {
                let rec = run_baseline(&task, &cfg, &theta0_for(&task, "sk", k), 200)?;
                finals.push(rec.final_loss().unwrap_or(f64::INFINITY));
            }
            base_means.push(finals.iter().sum::<f64>() / 5.0);
        }
        let min_base = base_means.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut line = format!("SK inst {inst}: E0 {e0:.3} min_base {min_base:.3} |");
        for mseed in 0..3u64 {
            let (weights, _) = meta_train(&task, &MetaConfig::default(), mseed)?;
            let mut finals = Vec::new();
            for k in 0..5u64 {
                let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0_for(&task, "sk", k), 200)?;
                finals.push(rec.final_loss().unwrap_or(f64::INFINITY));
            }
            let mean = finals.iter().sum::<f64>() / 5.0;
            let pass = mean <= -2.8 && mean <= min_base;
            line.push_str(&format!(" m{mseed}:{mean:.3}{}", if pass { "*" } else { "" }));
        }
        println!("{line}");
    }

    // --- Re-upload ----------------------------------------------------------
    {
        let task = build_reupload(3, 200, 1000, balanced_radius(), 5)?;
        let mut gd_accs = Vec::new();
        for k in 0..3u64 {
            let rec = run_baseline(
                &task,
                &BaselineConfig::new(BaselineKind::Gd),
                &theta0_for(&task, "ru", k),
                200,
            )?;
            gd_accs.push(rec.final_metrics.get("test_accuracy").copied().unwrap_or(0.0));
        }
        println!(
            "RU gd accs {:?}",
            gd_accs.iter().map(|a| format!("{a:.3}")).collect::<Vec<_>>()
        );
        for mseed in 0..4u64 {
            let (weights, log) = meta_train(&task, &MetaConfig::default(), mseed)?;
            let mut line = format!("RU m{mseed} (best_stage {}):", log.best_stage);
            for steps in [200usize, 300] {
                let mut accs = Vec::new();
                for k in 0..3u64 {
                    let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0_for(&task, "ru", k), steps)?;
                    accs.push(rec.final_metrics.get("test_accuracy").copied().unwrap_or(0.0));
                }
                let mean = 100.0 * accs.iter().sum::<f64>() / 3.0;
                line.push_str(&format!(
                    " @{steps}: {:?} mean {mean:.1}",
                    accs.iter().map(|a| format!("{a:.2}")).collect::<Vec<_>>()
                ));
            }
            println!("{line}");
        }
    }

    // --- VQE H2 --------------------------------------------------------------
    {
        let (ham, _) = load_hamiltonian(Path::new("crates/vqopt/data/h2_sto3g.ham"))?;
        let e0 = exact_ground_energy(&ham)?;
        let task = build_vqe_hea(&ham, 3, "h2_sto3g")?;
        let mut adam_steps: Vec<f64> = Vec::new();
        for k in 0..10u64 {
            let rec = run_baseline(
                &task,
                &BaselineConfig::new(BaselineKind::Adam),
                &theta0_for(&task, "h2", k),
                200,
            )?;
            adam_steps.push(
                rec.losses.iter().position(|l| *l <= e0 + 0.05).map(|p| p as f64)
                    .unwrap_or(f64::INFINITY),
            );
        }
        let med = |v: &mut Vec<f64>| {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v[v.len() / 2]
        };
        let adam_med = med(&mut adam_steps);
        for mseed in 0..3u64 {
            let (weights, log) = meta_train(&task, &MetaConfig::default(), mseed)?;
            let mut hits = 0;
            let mut l2o_steps: Vec<f64> = Vec::new();
            for k in 0..10u64 {
                let rec = run_l2o(&task, &weights, PrecondMode::Full, &theta0_for(&task, "h2", k), 200)?;
                let best = rec.losses.iter().cloned().fold(f64::INFINITY, f64::min);
                if best <= e0 + 0.02 {
                    hits += 1;
                }
                l2o_steps.push(
                    rec.losses.iter().position(|l| *l <= e0 + 0.05).map(|p| p as f64)
                        .unwrap_or(f64::INFINITY),
                );
            }
            println!(
                "VQE m{mseed} (best_stage {}): hits {hits}/10 med {} vs adam {adam_med}",
                log.best_stage,
                med(&mut l2o_steps)
            );
        }
    }
    Ok(())
}
