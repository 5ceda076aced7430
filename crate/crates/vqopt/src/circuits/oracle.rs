//! Brute-force reference solvers.
//!
//! These are deliberately naive and deliberately independent of the
//! statevector simulator: combinatorial enumeration for MaxCut, and dense
//! diagonalization built from explicit 2×2 Kronecker products for ground
//! energies. They anchor the tolerances everywhere optimizers are judged
//! against "the right answer".

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuits::Graph;
use crate::error::{Error, Result};
use crate::sim::{Pauli, PauliSum};

/// Exhaustive MaxCut: returns the best cut weight and the lexicographically
/// smallest maximizing assignment (bit `i` of the mask = side of vertex
/// `i`, least significant bit first). Each undirected edge counts once.
pub fn brute_force_maxcut(graph: &Graph) -> Result<(f64, u64)> {
    graph.validate()?;
    let n = graph.n_vertices;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_mask = 0u64;
    for mask in 0u64..(1u64 << n) {
        let mut cut = 0.0;
        for &(i, j, w) in &graph.edges {
            if ((mask >> i) ^ (mask >> j)) & 1 == 1 {
                cut += w;
            }
        }
        if cut > best_value {
            best_value = cut;
            best_mask = mask;
        }
    }
    Ok((best_value, best_mask))
}

fn pauli_matrix(p: Option<Pauli>) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        None => DMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
        Some(Pauli::X) => DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
        Some(Pauli::Y) => DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
        Some(Pauli::Z) => DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
    }
}

/// Exact smallest eigenvalue of a Pauli sum (register ≤ 12 qubits).
///
/// Z-only sums take a cheap diagonal path; anything else assembles the
/// dense Hermitian matrix by Kronecker products over qubits (qubit 0
/// outermost, i.e. most significant) and diagonalizes its real symmetric
/// embedding `[[Re, -Im], [Im, Re]]`, which shares the complex spectrum.
pub fn exact_ground_energy(hamiltonian: &PauliSum) -> Result<f64> {
    if hamiltonian.terms.is_empty() {
        return Err(Error::InvalidTask("Hamiltonian has no terms".into()));
    }
    let n = hamiltonian.min_qubits();
    if n > 12 {
        return Err(Error::QubitCountOutOfRange(n));
    }
    let dim = 1usize << n;

    if hamiltonian.is_diagonal() {
        let mut diag = vec![0.0f64; dim];
        for term in &hamiltonian.terms {
            let mut factor = vec![term.coeff];
            for q in 0..n {
                let has_z = term.ops.iter().any(|&(tq, _)| tq == q);
                let next_len = factor.len() * 2;
                let mut next = Vec::with_capacity(next_len);
                for &v in &factor {
                    next.push(v);
                    next.push(if has_z { -v } else { v });
                }
                factor = next;
            }
            for (d, f) in diag.iter_mut().zip(&factor) {
                *d += f;
            }
        }
        return Ok(diag.into_iter().fold(f64::INFINITY, f64::min));
    }

    let mut dense = DMatrix::<Complex64>::zeros(dim, dim);
    for term in &hamiltonian.terms {
        let mut acted = DMatrix::from_element(1, 1, Complex64::new(term.coeff, 0.0));
        for q in 0..n {
            let op = term.ops.iter().find(|&&(tq, _)| tq == q).map(|&(_, p)| p);
            acted = acted.kronecker(&pauli_matrix(op));
        }
        dense += acted;
    }

    // Real symmetric embedding of the Hermitian matrix.
    let mut embed = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
    for r in 0..dim {
        for c in 0..dim {
            let v = dense[(r, c)];
            embed[(r, c)] = v.re;
            embed[(r + dim, c + dim)] = v.re;
            embed[(r, c + dim)] = -v.im;
            embed[(r + dim, c)] = v.im;
        }
    }
    let embed = (&embed + embed.transpose()) * 0.5;
    let eigen = SymmetricEigen::new(embed);
    Ok(eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}
