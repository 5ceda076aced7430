//! Variational quantum circuit optimization toolkit.
//!
//! The crate bundles everything needed to study how classical optimizers —
//! including a meta-trained LSTM optimizer that blends quantum-geometric
//! preconditioning into its update rule — behave on small variational
//! quantum workloads:
//!
//! * [`sim`] — dense statevector simulation with a small gate set and
//!   Pauli-sum expectation values.
//! * [`circuits`] — circuit templates and task builders (random layered
//!   circuits, hardware-efficient VQE, QAOA for MaxCut and
//!   Sherrington-Kirkpatrick instances, a single-qubit data re-upload
//!   classifier), plus file formats and brute-force reference solvers.
//! * [`geom`] — exact parameter-shift gradients, the Fubini-Study metric
//!   tensor, its pseudo-inverse, and preconditioner blending.
//! * [`opt`] — classic first-order baselines and quantum natural gradient
//!   descent.
//! * [`l2o`] — the learned optimizer: coordinate-wise two-layer LSTM,
//!   unrolled optimization with a reverse-mode tape for meta-gradients,
//!   curriculum meta-training, and versioned checkpoints.
//! * [`bench`] — a reproducible benchmark harness with CSV/JSON/SVG
//!   reports.
//!
//! Every run is deterministic given its seeds; see `examples/` for
//! runnable entry points covering each capability.

pub mod bench;
pub mod circuits;
pub mod error;
pub mod geom;
pub mod l2o;
pub mod opt;
pub mod seeds;
pub mod sim;

pub use error::{Error, Result};
