//! Gate-level circuits over the closed gate set, with exact execution and
//! per-step snapshots.

use crate::qlinalg::{CMat, StateVector, C_ONE, C_ZERO};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// The closed gate set. Every circuit in the crate is built from these kinds;
/// inverses are included so that decryption and backward execution need no
/// matrix inversion machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Z,
    P,
    Pdag,
    H,
    #[serde(rename = "CNOT")]
    Cnot,
    /// Controlled-P; `targets[0]` is the control.
    #[serde(rename = "CP")]
    Cp,
    T,
    Tdag,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cp => 2,
            _ => 1,
        }
    }

    pub fn is_clifford(self) -> bool {
        !matches!(self, GateKind::T | GateKind::Tdag | GateKind::Cp)
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::P => GateKind::Pdag,
            GateKind::Pdag => GateKind::P,
            GateKind::T => GateKind::Tdag,
            GateKind::Tdag => GateKind::T,
            // Cp^-1 = Cp^3; callers that need it expand to three gates.
            other => other,
        }
    }

    /// Whether the inverse is a single gate of the set.
    pub fn self_describing_inverse(self) -> bool {
        !matches!(self, GateKind::Cp)
    }

    /// Dense unitary; for two-qubit kinds, `targets[0]` indexes the most
    /// significant bit.
    pub fn matrix(self) -> CMat {
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let t = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        match self {
            GateKind::X => CMat::from_rows(&[&[C_ZERO, C_ONE], &[C_ONE, C_ZERO]]),
            GateKind::Z => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, -C_ONE]]),
            GateKind::P => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, i]]),
            GateKind::Pdag => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, -i]]),
            GateKind::H => CMat::from_rows(&[&[h, h], &[h, -h]]),
            GateKind::T => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, t]]),
            GateKind::Tdag => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, t.conj()]]),
            GateKind::Cnot => CMat::from_rows(&[
                &[C_ONE, C_ZERO, C_ZERO, C_ZERO],
                &[C_ZERO, C_ONE, C_ZERO, C_ZERO],
                &[C_ZERO, C_ZERO, C_ZERO, C_ONE],
                &[C_ZERO, C_ZERO, C_ONE, C_ZERO],
            ]),
            GateKind::Cp => CMat::from_rows(&[
                &[C_ONE, C_ZERO, C_ZERO, C_ZERO],
                &[C_ZERO, C_ONE, C_ZERO, C_ZERO],
                &[C_ZERO, C_ZERO, C_ONE, C_ZERO],
                &[C_ZERO, C_ZERO, C_ZERO, i],
            ]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::P => "P",
            GateKind::Pdag => "Pdag",
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Cp => "CP",
            GateKind::T => "T",
            GateKind::Tdag => "Tdag",
        }
    }
}

/// One gate instance bound to targets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Self {
        assert_eq!(kind.arity(), targets.len(), "gate arity mismatch for {}", kind.name());
        Self { kind, targets: targets.to_vec() }
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, &[q])
    }
    pub fn z(q: usize) -> Self {
        Self::new(GateKind::Z, &[q])
    }
    pub fn p(q: usize) -> Self {
        Self::new(GateKind::P, &[q])
    }
    pub fn pdag(q: usize) -> Self {
        Self::new(GateKind::Pdag, &[q])
    }
    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, &[q])
    }
    pub fn t(q: usize) -> Self {
        Self::new(GateKind::T, &[q])
    }
    pub fn tdag(q: usize) -> Self {
        Self::new(GateKind::Tdag, &[q])
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, &[control, target])
    }
    pub fn cp(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cp, &[control, target])
    }
}

/// Ordered gate list on a fixed register. `labels`, when present, tag each
/// gate with a phase name used by encoded-verifier schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    #[serde(rename = "n")]
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new(), labels: Vec::new() }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Self { num_qubits, gates, labels: Vec::new() };
        c.check()?;
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn push_labeled(&mut self, gate: Gate, label: &str) {
        self.gates.push(gate);
        while self.labels.len() < self.gates.len() - 1 {
            self.labels.push(String::new());
        }
        self.labels.push(label.to_string());
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn check(&self) -> Result<()> {
        for g in &self.gates {
            if g.targets.len() != g.kind.arity() {
                return Err(Error::Invalid(format!("arity mismatch for {}", g.kind.name())));
            }
            for &t in &g.targets {
                if t >= self.num_qubits {
                    return Err(Error::QubitOutOfRange { index: t, num_qubits: self.num_qubits });
                }
            }
        }
        Ok(())
    }

    /// Concatenation on the same register.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch("circuit concatenation".into()));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Circuit::with_gates(self.num_qubits, gates)
    }

    /// Exact inverse circuit (gates reversed and inverted). Cp inverts to
    /// three Cp gates.
    pub fn inverse(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            if g.kind == GateKind::Cp {
                for _ in 0..3 {
                    gates.push(g.clone());
                }
            } else {
                gates.push(Gate::new(g.kind.inverse(), &g.targets));
            }
        }
        Circuit { num_qubits: self.num_qubits, gates, labels: Vec::new() }
    }

    /// Dense unitary of the whole circuit (small registers only).
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.num_qubits > 12 {
            return Err(Error::SizeLimit { requested: self.num_qubits, limit: 12 });
        }
        let dim = 1usize << self.num_qubits;
        let mut cols: Vec<StateVector> = Vec::with_capacity(dim);
        for b in 0..dim {
            cols.push(run(self, &StateVector::basis(self.num_qubits, b)?)?);
        }
        let mut m = CMat::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                m[(i, j)] = col.amplitudes()[i];
            }
        }
        Ok(m)
    }
}

/// Runs the circuit, applying gates in order (first gate first).
pub fn run(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    if input.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch(format!(
            "input on {} qubits for circuit on {}",
            input.num_qubits(),
            circuit.num_qubits
        )));
    }
    let mut state = input.clone();
    for g in &circuit.gates {
        state.apply_gate(&g.kind.matrix(), &g.targets)?;
    }
    Ok(state)
}

/// All intermediate states: element 0 is the input, element t is the state
/// after the first t gates.
pub fn snapshots(circuit: &Circuit, input: &StateVector) -> Result<Vec<StateVector>> {
    if input.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch(format!(
            "input on {} qubits for circuit on {}",
            input.num_qubits(),
            circuit.num_qubits
        )));
    }
    let mut out = Vec::with_capacity(circuit.len() + 1);
    let mut state = input.clone();
    out.push(state.clone());
    for g in &circuit.gates {
        state.apply_gate(&g.kind.matrix(), &g.targets)?;
        out.push(state.clone());
    }
    Ok(out)
}

/// Streaming variant of [`snapshots`] for registers too large to cache:
/// calls `visit(t, state)` for t = 0..=T without retaining earlier states.
pub fn visit_snapshots<F>(circuit: &Circuit, input: &StateVector, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &StateVector) -> Result<()>,
{
    if input.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch("snapshot input".into()));
    }
    let mut state = input.clone();
    visit(0, &state)?;
    for (t, g) in circuit.gates.iter().enumerate() {
        state.apply_gate(&g.kind.matrix(), &g.targets)?;
        visit(t + 1, &state)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::DensityMatrix;

    fn bell() -> Circuit {
        Circuit::with_gates(2, vec![Gate::h(0), Gate::cnot(0, 1)]).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2);
        let input = StateVector::basis(2, 0b10).unwrap();
        assert_eq!(run(&c, &input).unwrap(), input);
        assert_eq!(snapshots(&c, &input).unwrap().len(), 1);
    }

    #[test]
    fn hadamard_makes_plus() {
        let c = Circuit::with_gates(1, vec![Gate::h(0)]).unwrap();
        let out = run(&c, &StateVector::zero(1).unwrap()).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((out.amplitudes()[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn bell_state_matches_composed_matrix() {
        // Cross-check circuit execution against the single composed 4x4 unitary.
        let c = bell();
        let input = StateVector::zero(2).unwrap();
        let by_run = run(&c, &input).unwrap();
        let u = c.to_matrix().unwrap();
        let by_matrix = u.mul_vec(input.amplitudes());
        for (a, b) in by_run.amplitudes().iter().zip(by_matrix.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
        let r = FRAC_1_SQRT_2;
        assert!((by_run.amplitudes()[0].re - r).abs() < 1e-14);
        assert!((by_run.amplitudes()[3].re - r).abs() < 1e-14);
    }

    #[test]
    fn snapshots_end_at_run_output() {
        let c = bell();
        let input = StateVector::zero(2).unwrap();
        let snaps = snapshots(&c, &input).unwrap();
        assert_eq!(snaps.len(), 3);
        assert_eq!(snaps[0], input);
        assert_eq!(snaps[2], run(&c, &input).unwrap());
        for s in &snaps {
            assert!(s.is_normalized(1e-12));
        }
    }

    #[test]
    fn x_flips_basis_state() {
        let c = Circuit::with_gates(1, vec![Gate::x(0)]).unwrap();
        let out = run(&c, &StateVector::zero(1).unwrap()).unwrap();
        assert!((out.amplitudes()[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_on_density_is_identity() {
        let mut rho = DensityMatrix::maximally_mixed(2).unwrap();
        let before = rho.clone();
        // I (x) I realized as two explicit no-op pairs X X.
        rho.apply_gate(&GateKind::X.matrix(), &[0]).unwrap();
        rho.apply_gate(&GateKind::X.matrix(), &[0]).unwrap();
        assert!(rho.mat().max_abs_diff(before.mat()) < 1e-15);
    }

    #[test]
    fn composition_law_on_random_circuits() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut c = Circuit::new(n);
                for _ in 0..rng.gen_range(1..=5) {
                    let kinds = [
                        GateKind::X,
                        GateKind::Z,
                        GateKind::P,
                        GateKind::H,
                        GateKind::T,
                        GateKind::Cnot,
                    ];
                    let kind = kinds[rng.gen_range(0..kinds.len())];
                    if kind.arity() == 1 {
                        c.push(Gate::new(kind, &[rng.gen_range(0..n)]));
                    } else {
                        let a = rng.gen_range(0..n);
                        let mut b = rng.gen_range(0..n);
                        while b == a {
                            b = rng.gen_range(0..n);
                        }
                        c.push(Gate::new(kind, &[a, b]));
                    }
                }
                c
            };
            let c1 = mk(&mut rng);
            let c2 = mk(&mut rng);
            let input = StateVector::zero(n).unwrap();
            let joined = c1.then(&c2).unwrap();
            let composed = run(&c2, &run(&c1, &input).unwrap()).unwrap();
            let direct = run(&joined, &input).unwrap();
            for (a, b) in direct.amplitudes().iter().zip(composed.amplitudes().iter()) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn inverse_undoes_circuit() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::t(1));
        c.push(Gate::cp(0, 1));
        c.push(Gate::cnot(1, 0));
        let input = run(&bell(), &StateVector::zero(2).unwrap()).unwrap();
        let fwd = run(&c, &input).unwrap();
        let back = run(&c.inverse(), &fwd).unwrap();
        for (a, b) in back.amplitudes().iter().zip(input.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_out_of_range_target() {
        let c = Circuit { num_qubits: 1, gates: vec![Gate::cnot(0, 1)], labels: vec![] };
        assert!(c.check().is_err());
    }

    #[test]
    fn circuit_json_round_trip() {
        let c = bell();
        let json = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
    }
}
