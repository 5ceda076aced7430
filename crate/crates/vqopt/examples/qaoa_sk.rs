//! Sherrington–Kirkpatrick spin glass: all-to-all random ±1 couplings with
//! energies scaled by 1/√n, minimized by the alternating-layer circuit.

use vqopt::circuits::{build_qaoa_sk, exact_ground_energy, CostModel};
use vqopt::circuits::random_theta;
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let task = build_qaoa_sk(6, 2, 3)?;
    let CostModel::Expectation { ref observable, .. } = task.cost else {
        unreachable!("spin-glass tasks are expectation tasks");
    };
    let ground = exact_ground_energy(observable)?;
    println!("{}: exact ground energy {ground:.6}", task.id);

    println!("{:<10} {:>12} {:>12}", "optimizer", "energy", "gap");
    for kind in [BaselineKind::Adam, BaselineKind::Momentum, BaselineKind::Gd] {
        let mut rng = seeds::rng(1, &["example", "sk"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let record = run_baseline(&task, &BaselineConfig::new(kind), &theta0, 200)?;
        let energy = record.final_loss().expect("run finished");
        println!("{:<10} {energy:>12.6} {:>12.6}", kind.id(), energy - ground);
    }
    Ok(())
}
