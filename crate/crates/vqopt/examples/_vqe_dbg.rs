//! Scratch: debug the VQE-H2 meta-training fixture.

use vqopt::circuits::{build_vqe_hea, exact_ground_energy, load_hamiltonian, random_theta};
use vqopt::l2o::{meta_train, MetaConfig};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let (ham, nq) = load_hamiltonian(std::path::Path::new("crates/vqopt/data/h2_sto3g.ham"))?;
    let e0 = exact_ground_energy(&ham)?;
    let task = build_vqe_hea(&ham, 3, "h2_sto3g")?;
    println!("nq {nq} P {} E0 {e0:.6}", task.n_params());

    // Sanity: one Adam run.
    let mut rng = seeds::rng(11, &["h2"], &[0]);
    let theta0 = random_theta(task.n_params(), &mut rng);
    let rec = run_baseline(&task, &BaselineConfig::new(BaselineKind::Adam), &theta0, 200)?;
    println!("adam final {:.6}", rec.final_loss().unwrap());

    match meta_train(&task, &MetaConfig::default(), 0) {
        Ok((_, log)) => println!("train ok, stages {}, best {}", log.stages.len(), log.best_stage),
        Err(e) => println!("train error: {e}"),
    }
    Ok(())
}
