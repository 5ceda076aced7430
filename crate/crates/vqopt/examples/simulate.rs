//! Build small circuits gate by gate, inspect amplitudes, and measure Pauli
//! observables with the dense statevector simulator.

use std::f64::consts::{FRAC_PI_2, PI};

use vqopt::sim::{AngleExpr, GateOp, Pauli, PauliSum, PauliTerm, StateVector};

fn main() -> vqopt::Result<()> {
    // |00⟩ → H on qubit 0 → CNOT gives a Bell pair. Qubit 0 is the most
    // significant bit of the amplitude index.
    let mut bell = StateVector::zero(2)?;
    bell.apply(&GateOp::h(0), &[])?;
    bell.apply(&GateOp::cnot(0, 1), &[])?;
    println!("Bell state amplitudes:");
    for (index, amp) in bell.amplitudes().iter().enumerate() {
        println!("  |{index:02b}⟩  {:+.4} {:+.4}i", amp.re, amp.im);
    }

    // Perfect ZZ correlation, no X magnetization.
    let zz = PauliSum::new(vec![PauliTerm::zz(1.0, 0, 1)?]);
    let x0 = PauliSum::new(vec![PauliTerm::new(1.0, vec![(0, Pauli::X)])?]);
    println!("⟨Z0 Z1⟩ = {:+.4}", bell.expectation(&zz)?);
    println!("⟨X0⟩    = {:+.4}", bell.expectation(&x0)?);

    // Parameterized gates read their angle from a slot vector at apply
    // time, so the same gate object serves every parameter value.
    let ry = GateOp::ry(0, AngleExpr::slot(0));
    let z0 = PauliSum::new(vec![PauliTerm::new(1.0, vec![(0, Pauli::Z)])?]);
    println!("single-qubit RY sweep:");
    for theta in [0.0, FRAC_PI_2, PI] {
        let mut state = StateVector::zero(1)?;
        state.apply(&ry, &[theta])?;
        println!("  θ = {theta:.4}  ⟨Z⟩ = {:+.4}", state.expectation(&z0)?);
    }
    Ok(())
}
