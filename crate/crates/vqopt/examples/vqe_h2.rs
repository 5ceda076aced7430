//! Variational ground-state search for molecular hydrogen (STO-3G,
//! Jordan–Wigner) with a hardware-efficient ansatz. The bundled 4-qubit
//! Hamiltonian is small enough to diagonalize exactly for reference.

use std::path::Path;

use vqopt::circuits::{build_vqe_hea, exact_ground_energy, load_hamiltonian, random_theta};
use vqopt::opt::{run_baseline, BaselineConfig, BaselineKind};
use vqopt::seeds;

fn main() -> vqopt::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/h2_sto3g.ham");
    let (hamiltonian, n_qubits) = load_hamiltonian(&path)?;
    let ground = exact_ground_energy(&hamiltonian)?;
    println!("H2/STO-3G: {n_qubits} qubits, {} Pauli terms", hamiltonian.terms.len());
    println!("exact ground energy {ground:.9} Ha");

    let task = build_vqe_hea(&hamiltonian, 3, "h2_sto3g")?;
    println!("ansatz {} with {} angles\n", task.id, task.n_params());

    let config = BaselineConfig::new(BaselineKind::Adam);
    println!("{:>6} {:>14} {:>14}", "seed", "energy [Ha]", "error [Ha]");
    for seed in 0..5u64 {
        let mut rng = seeds::rng(seed, &["example", "vqe"], &[]);
        let theta0 = random_theta(task.n_params(), &mut rng);
        let record = run_baseline(&task, &config, &theta0, 250)?;
        let energy = record.final_loss().expect("run finished");
        println!("{seed:>6} {energy:>14.9} {:>14.2e}", energy - ground);
    }
    Ok(())
}
