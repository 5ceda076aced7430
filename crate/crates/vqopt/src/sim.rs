//! Dense statevector simulation.
//!
//! States live in the full 2^n-dimensional complex vector space. Qubit 0 is
//! the *most significant* bit of the amplitude index, so for two qubits the
//! basis order is |00⟩, |01⟩, |10⟩, |11⟩ and flipping qubit 0 moves
//! amplitude 0 to amplitude 2.
//!
//! Rotation gates follow the convention `R_P(θ) = exp(-i θ P / 2)`; gates
//! are applied in place with strided sweeps over the target qubit, never by
//! materializing a 2^n × 2^n matrix. Angles of parameterized gates are
//! affine functions of a parameter vector (`offset + Σ coeff·θ[slot]`),
//! which covers fixed angles, plain slots, weight-scaled slots, and slots
//! shared with data-dependent coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register; 2^24 amplitudes is the dense ceiling here.
pub const MAX_QUBITS: usize = 24;

const IM_TOL: f64 = 1e-9;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn label(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Gate vocabulary: three Pauli rotations plus Hadamard and two entanglers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    H,
    CZ,
    CNOT,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::H => "H",
            GateKind::CZ => "CZ",
            GateKind::CNOT => "CNOT",
        }
    }

    /// Number of distinct target qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::H => 1,
            GateKind::CZ | GateKind::CNOT => 2,
        }
    }

    /// Whether the gate takes an angle.
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    /// Generator Pauli of a rotation gate (`R_P(θ) = exp(-iθP/2)`).
    pub fn generator(self) -> Option<Pauli> {
        match self {
            GateKind::RX => Some(Pauli::X),
            GateKind::RY => Some(Pauli::Y),
            GateKind::RZ => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Affine angle expression `offset + Σ coeff · θ[slot]`.
///
/// A fixed angle has no terms; a plain trainable angle has a single term
/// with coefficient 1. Several gates may reference the same slot (QAOA
/// layers do), and one gate may combine several slots (the re-upload
/// classifier mixes a data-scaled slot with a bias slot).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleExpr {
    pub terms: Vec<(usize, f64)>,
    pub offset: f64,
}

impl AngleExpr {
    pub fn fixed(offset: f64) -> Self {
        AngleExpr {
            terms: Vec::new(),
            offset,
        }
    }

    pub fn slot(slot: usize) -> Self {
        AngleExpr {
            terms: vec![(slot, 1.0)],
            offset: 0.0,
        }
    }

    pub fn scaled_slot(slot: usize, coeff: f64) -> Self {
        AngleExpr {
            terms: vec![(slot, coeff)],
            offset: 0.0,
        }
    }

    pub fn new(terms: Vec<(usize, f64)>, offset: f64) -> Self {
        AngleExpr { terms, offset }
    }

    /// Evaluate the expression against a parameter vector.
    pub fn resolve(&self, params: &[f64]) -> Result<f64> {
        let mut angle = self.offset;
        for &(slot, coeff) in &self.terms {
            let theta = params.get(slot).ok_or(Error::ParamSlotOutOfRange {
                slot,
                n_params: params.len(),
            })?;
            angle += coeff * theta;
        }
        Ok(angle)
    }

    /// Does the expression depend on any parameter slot?
    pub fn is_parameterized(&self) -> bool {
        !self.terms.is_empty()
    }
}

/// One gate in a circuit.
///
/// Rotation gates carry an [`AngleExpr`]; H/CZ/CNOT carry none. CNOT
/// targets are ordered `[control, target]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub angle: Option<AngleExpr>,
}

impl GateOp {
    pub fn rx(target: usize, angle: AngleExpr) -> Self {
        GateOp {
            kind: GateKind::RX,
            targets: vec![target],
            angle: Some(angle),
        }
    }

    pub fn ry(target: usize, angle: AngleExpr) -> Self {
        GateOp {
            kind: GateKind::RY,
            targets: vec![target],
            angle: Some(angle),
        }
    }

    pub fn rz(target: usize, angle: AngleExpr) -> Self {
        GateOp {
            kind: GateKind::RZ,
            targets: vec![target],
            angle: Some(angle),
        }
    }

    pub fn rotation(pauli: Pauli, target: usize, angle: AngleExpr) -> Self {
        match pauli {
            Pauli::X => Self::rx(target, angle),
            Pauli::Y => Self::ry(target, angle),
            Pauli::Z => Self::rz(target, angle),
        }
    }

    pub fn h(target: usize) -> Self {
        GateOp {
            kind: GateKind::H,
            targets: vec![target],
            angle: None,
        }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        GateOp {
            kind: GateKind::CZ,
            targets: vec![a, b],
            angle: None,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::CNOT,
            targets: vec![control, target],
            angle: None,
        }
    }

    /// Does the gate's angle depend on any parameter slot?
    pub fn is_parameterized(&self) -> bool {
        self.angle.as_ref().is_some_and(AngleExpr::is_parameterized)
    }

    /// Structural validation against a register size and parameter count.
    pub fn validate(&self, n_qubits: usize, n_params: usize) -> Result<()> {
        let name = self.kind.name();
        if self.targets.len() != self.kind.arity() {
            return Err(Error::BadTargets {
                gate: name,
                expected: self.kind.arity(),
                got: self.targets.len(),
            });
        }
        for &t in &self.targets {
            if t >= n_qubits {
                return Err(Error::QubitIndexOutOfRange {
                    index: t,
                    n_qubits,
                });
            }
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::BadTargets {
                gate: name,
                expected: 2,
                got: 1,
            });
        }
        match (&self.angle, self.kind.is_rotation()) {
            (None, true) => return Err(Error::MissingAngle(name)),
            (Some(_), false) => return Err(Error::UnexpectedAngle(name)),
            _ => {}
        }
        if let Some(expr) = &self.angle {
            for &(slot, coeff) in &expr.terms {
                if slot >= n_params {
                    return Err(Error::ParamSlotOutOfRange { slot, n_params });
                }
                if !coeff.is_finite() {
                    return Err(Error::NonFinite("angle coefficient"));
                }
            }
            if !expr.offset.is_finite() {
                return Err(Error::NonFinite("angle offset"));
            }
        }
        Ok(())
    }
}

/// Weighted sum of Pauli strings; the coefficients are real, so the sum is
/// Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    /// Distinct qubits with their Pauli, sorted by qubit index. Empty means
    /// the identity.
    pub ops: Vec<(usize, Pauli)>,
}

impl PauliTerm {
    pub fn new(coeff: f64, mut ops: Vec<(usize, Pauli)>) -> Result<Self> {
        ops.sort_by_key(|&(q, _)| q);
        for pair in ops.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidPauli(format!(
                    "qubit {} referenced twice in one term",
                    pair[0].0
                )));
            }
        }
        if !coeff.is_finite() {
            return Err(Error::NonFinite("Pauli coefficient"));
        }
        Ok(PauliTerm { coeff, ops })
    }

    pub fn identity(coeff: f64) -> Self {
        PauliTerm {
            coeff,
            ops: Vec::new(),
        }
    }

    /// `Z_a Z_b`-style helper used by several task builders.
    pub fn zz(coeff: f64, a: usize, b: usize) -> Result<Self> {
        PauliTerm::new(coeff, vec![(a, Pauli::Z), (b, Pauli::Z)])
    }

    fn max_qubit(&self) -> Option<usize> {
        self.ops.last().map(|&(q, _)| q)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    pub terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(terms: Vec<PauliTerm>) -> Self {
        PauliSum { terms }
    }

    /// Smallest register able to hold every referenced qubit (at least 1).
    pub fn min_qubits(&self) -> usize {
        self.terms
            .iter()
            .filter_map(PauliTerm::max_qubit)
            .max()
            .map_or(1, |q| q + 1)
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for term in &self.terms {
            if let Some(q) = term.max_qubit() {
                if q >= n_qubits {
                    return Err(Error::QubitIndexOutOfRange {
                        index: q,
                        n_qubits,
                    });
                }
            }
        }
        Ok(())
    }

    /// Diagonal entry ⟨z|H|z⟩ for a computational basis state given as a
    /// bitmask (qubit 0 = most significant bit). Errors if any term holds an
    /// X or Y, which would make the matrix off-diagonal.
    pub fn diagonal_entry(&self, basis_index: usize, n_qubits: usize) -> Result<f64> {
        let mut total = 0.0;
        for term in &self.terms {
            let mut sign = 1.0;
            for &(q, p) in &term.ops {
                if p != Pauli::Z {
                    return Err(Error::InvalidPauli(format!(
                        "{}{} is not diagonal in the computational basis",
                        p.label(),
                        q
                    )));
                }
                let bit = (basis_index >> (n_qubits - 1 - q)) & 1;
                if bit == 1 {
                    sign = -sign;
                }
            }
            total += term.coeff * sign;
        }
        Ok(total)
    }

    /// Are all terms Z-only (diagonal in the computational basis)?
    pub fn is_diagonal(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.ops.iter().all(|&(_, p)| p == Pauli::Z))
    }
}

/// Dense register of 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Build from raw amplitudes (len must be a power of two in range).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch { left: dim, right: 0 });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(n_qubits));
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Bit mask selecting the target qubit (qubit 0 = most significant).
    fn mask(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1 << (self.n_qubits - 1 - qubit))
    }

    /// Strided in-place application of a 2×2 matrix to one qubit.
    fn apply_single(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        let mask = self.mask(qubit)?;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + mask {
                let j = i | mask;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
            base += mask << 1;
        }
        Ok(())
    }

    fn apply_rotation(&mut self, pauli: Pauli, qubit: usize, angle: f64) -> Result<()> {
        let half = 0.5 * angle;
        let (c, s) = (half.cos(), half.sin());
        let zero = Complex64::new(0.0, 0.0);
        let m = match pauli {
            Pauli::X => [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ],
            Pauli::Y => [
                [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
            ],
            Pauli::Z => [[Complex64::new(c, -s), zero], [zero, Complex64::new(c, s)]],
        };
        self.apply_single(qubit, m)
    }

    fn apply_h(&mut self, qubit: usize) -> Result<()> {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_single(qubit, [[r, r], [r, -r]])
    }

    fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        let ma = self.mask(a)?;
        let mb = self.mask(b)?;
        let both = ma | mb;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let mc = self.mask(control)?;
        let mt = self.mask(target)?;
        for i in 0..self.amps.len() {
            if i & mc == mc && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
        Ok(())
    }

    /// Apply one gate, resolving its angle against `params`.
    pub fn apply(&mut self, gate: &GateOp, params: &[f64]) -> Result<()> {
        match gate.kind {
            GateKind::RX | GateKind::RY | GateKind::RZ => {
                let expr = gate.angle.as_ref().ok_or(Error::MissingAngle(gate.kind.name()))?;
                let angle = expr.resolve(params)?;
                let pauli = gate.kind.generator().expect("rotation has a generator");
                self.apply_rotation(pauli, gate.targets[0], angle)
            }
            GateKind::H => self.apply_h(gate.targets[0]),
            GateKind::CZ => self.apply_cz(gate.targets[0], gate.targets[1]),
            GateKind::CNOT => self.apply_cnot(gate.targets[0], gate.targets[1]),
        }
    }

    /// Apply a rotation gate with an explicitly resolved angle.
    pub fn apply_resolved(&mut self, gate: &GateOp, angle: f64) -> Result<()> {
        let pauli = gate
            .kind
            .generator()
            .ok_or(Error::UnexpectedAngle(gate.kind.name()))?;
        self.apply_rotation(pauli, gate.targets[0], angle)
    }

    /// Multiply by the rotation generator scaled for differentiation:
    /// `|ψ⟩ ← (-i/2) · P |ψ⟩` where `P` generates the gate. The result is
    /// no longer normalized (its norm halves); it is the building block for
    /// derivative states `|∂ψ⟩`.
    pub fn apply_pauli_generator(&mut self, gate: &GateOp) -> Result<()> {
        let pauli = gate
            .kind
            .generator()
            .ok_or(Error::UnexpectedAngle(gate.kind.name()))?;
        let qubit = *gate
            .targets
            .first()
            .ok_or(Error::BadTargets {
                gate: gate.kind.name(),
                expected: 1,
                got: 0,
            })?;
        self.apply_pauli_ops(&[(qubit, pauli)])?;
        let scale = Complex64::new(0.0, -0.5);
        for amp in &mut self.amps {
            *amp *= scale;
        }
        Ok(())
    }

    /// In-place multiplication by a Pauli string (unit coefficient).
    pub fn apply_pauli_ops(&mut self, ops: &[(usize, Pauli)]) -> Result<()> {
        let (flip, ymask, zmask, ny) = self.pauli_masks(ops)?;
        let phase_base = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let src = self.amps.clone();
        for (i, &amp) in src.iter().enumerate() {
            let mut phase = phase_base;
            if ((i & (ymask | zmask)).count_ones() & 1) == 1 {
                phase = -phase;
            }
            self.amps[i ^ flip] = phase * amp;
        }
        Ok(())
    }

    fn pauli_masks(&self, ops: &[(usize, Pauli)]) -> Result<(usize, usize, usize, u32)> {
        let mut flip = 0usize;
        let mut ymask = 0usize;
        let mut zmask = 0usize;
        let mut ny = 0u32;
        for &(q, p) in ops {
            let m = self.mask(q)?;
            match p {
                Pauli::X => flip |= m,
                Pauli::Y => {
                    flip |= m;
                    ymask |= m;
                    ny += 1;
                }
                Pauli::Z => zmask |= m,
            }
        }
        Ok((flip, ymask, zmask, ny))
    }

    /// ⟨ψ| H |ψ⟩ for a Hermitian Pauli sum. The imaginary part must vanish
    /// up to floating-point noise; it is checked and discarded.
    pub fn expectation(&self, observable: &PauliSum) -> Result<f64> {
        observable.validate(self.n_qubits)?;
        let mut total = 0.0;
        for term in &observable.terms {
            let (flip, ymask, zmask, ny) = self.pauli_masks(&term.ops)?;
            let phase_base = match ny % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &amp) in self.amps.iter().enumerate() {
                let mut phase = phase_base;
                if ((i & (ymask | zmask)).count_ones() & 1) == 1 {
                    phase = -phase;
                }
                // ⟨ψ|P|ψ⟩ = Σ_i conj(ψ[i^flip]) · phase(i) · ψ[i]
                acc += self.amps[i ^ flip].conj() * phase * amp;
            }
            if acc.im.abs() > IM_TOL {
                return Err(Error::NonFinite("expectation imaginary part"));
            }
            total += term.coeff * acc.re;
        }
        Ok(total)
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}
