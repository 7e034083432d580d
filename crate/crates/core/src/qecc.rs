//! Quantum error-correcting codes: the `[[7,1,3]]` Steane code, a no-op
//! identity code for brute-force pipelines, encoders, codespace projectors,
//! transversal compilers, and the unitary T-gadget.

use crate::circuits::{run, Circuit, Gate, GateKind};
use crate::qlinalg::{hermitian_eigen, CMat, DensityMatrix, PauliString, StateVector};
use crate::{Error, Result, MAX_DENSITY_QUBITS, MAX_STATE_QUBITS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Canonical Steane fixture; the exact encoder is pinned here so that the
/// subset states produced by the code simulators are reproducible.
pub const STEANE_FIXTURE_JSON: &str = include_str!("../fixtures/steane.json");

/// Structural description of an `[[N,1,D]]` code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDescriptor {
    pub name: String,
    /// Physical qubits per logical qubit.
    pub num_physical: usize,
    /// Code distance.
    pub distance: usize,
    pub stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    /// Largest per-block subset whose reduced state is independent of the
    /// encoded data. Defaults to floor((D-1)/2); see `raise_sim_bound`.
    pub max_sim_subset: usize,
    /// Physical single-qubit kind that implements the logical P gate
    /// transversally (Pdag for Steane, P for the identity code).
    pub phase_kind: GateKind,
}

/// Serialized form of a code fixture file.
#[derive(Debug, Serialize, Deserialize)]
pub struct CodeFixture {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub stabilizers: Vec<String>,
    pub logical_x: String,
    pub logical_z: String,
    pub phase_kind: GateKind,
    pub encode_circuit: Circuit,
}

impl CodeDescriptor {
    /// Structural validity: generators commute pairwise, logicals commute
    /// with every generator, and logical X/Z anticommute.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.stabilizers.iter().enumerate() {
            if a.num_qubits() != self.num_physical {
                return Err(Error::DimensionMismatch("stabilizer width".into()));
            }
            for b in self.stabilizers.iter().skip(i + 1) {
                if !a.commutes_with(b)? {
                    return Err(Error::Invalid(format!("generators {a} and {b} anticommute")));
                }
            }
            if !a.commutes_with(&self.logical_x)? || !a.commutes_with(&self.logical_z)? {
                return Err(Error::Invalid(format!("logical operator anticommutes with {a}")));
            }
        }
        if self.logical_x.commutes_with(&self.logical_z)? {
            return Err(Error::Invalid("logical X and Z must anticommute".into()));
        }
        Ok(())
    }

    /// Raises the per-block simulation bound to the erasure limit D-1.
    /// For Steane this moves the bound from 1 to 2; the subset-independence
    /// suite exercises the raised bound empirically.
    pub fn raise_sim_bound(mut self) -> Self {
        self.max_sim_subset = self.distance.saturating_sub(1).max(self.max_sim_subset);
        self
    }
}

/// A code together with its pinned encoding circuit (data qubit at position
/// 0, N-1 fresh zeros behind it).
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingMap {
    pub descriptor: CodeDescriptor,
    pub encode_circuit: Circuit,
}

impl EncodingMap {
    /// The `[[1,1,1]]` identity code: every pipeline has a brute-force
    /// configuration where encoding is a no-op.
    pub fn identity() -> Self {
        let descriptor = CodeDescriptor {
            name: "identity".into(),
            num_physical: 1,
            distance: 1,
            stabilizers: Vec::new(),
            logical_x: PauliString::parse("X").unwrap(),
            logical_z: PauliString::parse("Z").unwrap(),
            max_sim_subset: 0,
            phase_kind: GateKind::P,
        };
        Self { descriptor, encode_circuit: Circuit::new(1) }
    }

    /// The `[[7,1,3]]` Steane code from the pinned fixture.
    pub fn steane() -> Self {
        Self::from_fixture_json(STEANE_FIXTURE_JSON).expect("embedded fixture is valid")
    }

    /// Steane with the per-block simulation bound raised to D-1 = 2.
    pub fn steane_raised() -> Self {
        let mut map = Self::steane();
        map.descriptor = map.descriptor.raise_sim_bound();
        map
    }

    pub fn from_fixture_json(json: &str) -> Result<Self> {
        let fx: CodeFixture =
            serde_json::from_str(json).map_err(|e| Error::Invalid(format!("fixture: {e}")))?;
        let stabilizers: Result<Vec<PauliString>> =
            fx.stabilizers.iter().map(|s| PauliString::parse(s)).collect();
        let descriptor = CodeDescriptor {
            name: fx.name,
            num_physical: fx.n,
            distance: fx.d,
            stabilizers: stabilizers?,
            logical_x: PauliString::parse(&fx.logical_x)?,
            logical_z: PauliString::parse(&fx.logical_z)?,
            max_sim_subset: (fx.d - 1) / 2,
            phase_kind: fx.phase_kind,
        };
        descriptor.validate()?;
        fx.encode_circuit.check()?;
        if fx.encode_circuit.num_qubits != descriptor.num_physical {
            return Err(Error::DimensionMismatch("encode circuit width".into()));
        }
        Ok(Self { descriptor, encode_circuit: fx.encode_circuit })
    }

    pub fn to_fixture_json(&self) -> String {
        let fx = CodeFixture {
            name: self.descriptor.name.clone(),
            n: self.descriptor.num_physical,
            k: 1,
            d: self.descriptor.distance,
            stabilizers: self.descriptor.stabilizers.iter().map(|s| s.to_string()).collect(),
            logical_x: self.descriptor.logical_x.to_string(),
            logical_z: self.descriptor.logical_z.to_string(),
            phase_kind: self.descriptor.phase_kind,
            encode_circuit: self.encode_circuit.clone(),
        };
        serde_json::to_string_pretty(&fx).expect("fixture serializes")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.descriptor.num_physical
    }

    /// Physical qubits of logical block `i` in a register of consecutive
    /// blocks.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        let n = self.n();
        i * n..(i + 1) * n
    }

    /// Encoding circuit acting on block `i` of a `num_qubits`-wide register.
    pub fn encode_circuit_on_block(&self, num_qubits: usize, block: usize) -> Result<Circuit> {
        offset_circuit(&self.encode_circuit, num_qubits, block * self.n())
    }

    /// Decoding circuit: the exact inverse of the pinned encoder.
    pub fn decode_circuit_on_block(&self, num_qubits: usize, block: usize) -> Result<Circuit> {
        offset_circuit(&self.encode_circuit.inverse(), num_qubits, block * self.n())
    }
}

/// Shifts every target of `circuit` by `offset` inside a wider register.
pub fn offset_circuit(circuit: &Circuit, num_qubits: usize, offset: usize) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.len());
    for g in &circuit.gates {
        let targets: Vec<usize> = g.targets.iter().map(|&t| t + offset).collect();
        gates.push(Gate { kind: g.kind, targets });
    }
    let c = Circuit { num_qubits, gates, labels: circuit.labels.clone() };
    c.check()?;
    Ok(c)
}

/// Encodes a pure state on k qubits into k consecutive blocks.
pub fn encode_state(map: &EncodingMap, psi: &StateVector) -> Result<StateVector> {
    let k = psi.num_qubits();
    let n = map.n();
    let total = k * n;
    if total > MAX_STATE_QUBITS {
        return Err(Error::SizeLimit { requested: total, limit: MAX_STATE_QUBITS });
    }
    // Place qubit i of psi at physical position i*n, zeros elsewhere.
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
    for (s, &a) in psi.amplitudes().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut t = 0usize;
        for i in 0..k {
            let bit = (s >> (k - 1 - i)) & 1;
            t |= bit << (total - 1 - i * n);
        }
        amps[t] = a;
    }
    let mut state = StateVector::from_amplitudes(total, amps)?;
    for i in 0..k {
        let enc = map.encode_circuit_on_block(total, i)?;
        state = run(&enc, &state)?;
    }
    Ok(state)
}

/// Encodes a mixed state on k qubits into k consecutive blocks
/// (density-matrix representation; small k only).
pub fn encode(map: &EncodingMap, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    let k = sigma.num_qubits();
    let total = k * map.n();
    if total > MAX_DENSITY_QUBITS {
        return Err(Error::SizeLimit { requested: total, limit: MAX_DENSITY_QUBITS });
    }
    let members = pure_decomposition(sigma)?;
    let encoded: Result<Vec<(f64, StateVector)>> = members
        .into_iter()
        .map(|(w, psi)| encode_state(map, &psi).map(|s| (w, s)))
        .collect();
    DensityMatrix::from_ensemble(&encoded?)
}

/// Eigen-decomposition of a state into a pure ensemble (weights >= 0).
pub fn pure_decomposition(rho: &DensityMatrix) -> Result<Vec<(f64, StateVector)>> {
    let (vals, vecs) = hermitian_eigen(rho.mat());
    let dim = rho.dim();
    let mut out = Vec::new();
    for idx in 0..dim {
        let w = vals[idx];
        if w < 1e-13 {
            continue;
        }
        let mut amps = Vec::with_capacity(dim);
        for r in 0..dim {
            amps.push(vecs[(r, idx)]);
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        out.push((w, StateVector::from_amplitudes(rho.num_qubits(), amps)?));
    }
    Ok(out)
}

/// Projector onto the codespace: the product of (I + g)/2 over generators.
pub fn codespace_projector(descriptor: &CodeDescriptor) -> Result<CMat> {
    let n = descriptor.num_physical;
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::SizeLimit { requested: n, limit: MAX_DENSITY_QUBITS });
    }
    let dim = 1usize << n;
    let mut proj = CMat::identity(dim);
    let half = Complex64::new(0.5, 0.0);
    for g in &descriptor.stabilizers {
        let gm = g.to_matrix()?;
        let factor = CMat::identity(dim).add(&gm).scale(half);
        proj = factor.mul(&proj);
    }
    Ok(proj)
}

/// Physical circuit implementing logical `kind` transversally on one block
/// (or a block pair for CNOT). Blocks are indexed within a register of
/// `num_blocks` consecutive blocks of width `map.n()`.
pub fn transversal_gate(
    map: &EncodingMap,
    kind: GateKind,
    blocks: &[usize],
    num_blocks: usize,
) -> Result<Circuit> {
    let n = map.n();
    let width = num_blocks * n;
    let mut c = Circuit::new(width);
    match (kind, blocks) {
        (GateKind::X, [b]) | (GateKind::Z, [b]) | (GateKind::H, [b]) => {
            for i in 0..n {
                c.push(Gate::new(kind, &[b * n + i]));
            }
        }
        (GateKind::P, [b]) => {
            for i in 0..n {
                c.push(Gate::new(map.descriptor.phase_kind, &[b * n + i]));
            }
        }
        (GateKind::Pdag, [b]) => {
            for i in 0..n {
                c.push(Gate::new(map.descriptor.phase_kind.inverse(), &[b * n + i]));
            }
        }
        (GateKind::Cnot, [ctrl, tgt]) => {
            for i in 0..n {
                c.push(Gate::cnot(ctrl * n + i, tgt * n + i));
            }
        }
        _ => return Err(Error::NonClifford(kind.name().into())),
    }
    c.check()?;
    Ok(c)
}

/// Transversal logical controlled-Z between two blocks, realized per qubit
/// pair as H, CNOT, H so that every gate in the register stays Clifford.
pub fn transversal_cz(
    map: &EncodingMap,
    ctrl_block: usize,
    tgt_block: usize,
    num_blocks: usize,
) -> Result<Circuit> {
    let n = map.n();
    let width = num_blocks * n;
    let mut c = Circuit::new(width);
    for i in 0..n {
        let a = ctrl_block * n + i;
        let b = tgt_block * n + i;
        c.push(Gate::h(b));
        c.push(Gate::cnot(a, b));
        c.push(Gate::h(b));
    }
    c.check()?;
    Ok(c)
}

/// Compiles a logical Clifford gate to its transversal physical circuit.
/// The register has one block per logical qubit the gate touches.
pub fn compile_transversal(map: &EncodingMap, kind: GateKind) -> Result<Circuit> {
    if !kind.is_clifford() {
        return Err(Error::NonClifford(kind.name().into()));
    }
    match kind.arity() {
        1 => transversal_gate(map, kind, &[0], 1),
        2 => transversal_gate(map, kind, &[0, 1], 2),
        _ => unreachable!(),
    }
}

/// Label attached to phase-1 gates of the T-gadget (logical-level work).
pub const T_GADGET_PHASE1: &str = "phase1";
/// Label attached to phase-2 gates (decoded-control work).
pub const T_GADGET_PHASE2: &str = "phase2";

/// Step indices of the structural stages of a compiled T-gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGadgetLayout {
    /// Steps [0, cnot32_end) implement transversal CNOT from block 3 to 2.
    pub cnot32_end: usize,
    /// Steps [cnot32_end, cnot21_end) implement transversal CNOT 2 -> 1.
    pub cnot21_end: usize,
    /// Steps [cnot21_end, dec_end) decode block 2.
    pub dec_end: usize,
    /// Steps [dec_end, cx_end) apply controlled-X from the decoded qubit.
    pub cx_end: usize,
    /// Steps [cx_end, cp_end) apply the controlled phase correction.
    pub cp_end: usize,
    /// Steps [cp_end, enc_end) re-encode block 2.
    pub enc_end: usize,
}

/// Unitary T-gadget on three consecutive blocks ordered
/// (ancilla-zero, data, magic). On input `Enc(|0>) (x) Enc(psi) (x) Enc(T|+>)`
/// the final state carries `Enc(T psi)` on the third block.
pub fn compile_t_gadget(map: &EncodingMap) -> Result<(Circuit, TGadgetLayout)> {
    let n = map.n();
    let width = 3 * n;
    let mut c = Circuit::new(width);
    let block1 = 0;
    let block2 = n;
    let block3 = 2 * n;

    // Phase 1: logical CNOT(magic -> data), then logical CNOT(data -> zero).
    for i in 0..n {
        c.push_labeled(Gate::cnot(block3 + i, block2 + i), T_GADGET_PHASE1);
    }
    let cnot32_end = c.len();
    for i in 0..n {
        c.push_labeled(Gate::cnot(block2 + i, block1 + i), T_GADGET_PHASE1);
    }
    let cnot21_end = c.len();

    // Phase 2: decode the data block down to one control qubit.
    let dec = map.decode_circuit_on_block(width, 1)?;
    for g in dec.gates {
        c.push_labeled(g, T_GADGET_PHASE2);
    }
    let dec_end = c.len();

    // Controlled logical X on the magic block (logical X is transversal X).
    let ctrl = block2;
    for i in 0..n {
        c.push_labeled(Gate::cnot(ctrl, block3 + i), T_GADGET_PHASE2);
    }
    let cx_end = c.len();

    // Controlled logical P on the magic block. The physical per-qubit kind
    // implementing logical P is `phase_kind`; its controlled version is CP
    // raised to the right power (CP^3 = controlled-Pdag).
    let reps = match map.descriptor.phase_kind {
        GateKind::P => 1,
        GateKind::Pdag => 3,
        other => return Err(Error::UnsupportedGate(other.name().into())),
    };
    for i in 0..n {
        for _ in 0..reps {
            c.push_labeled(Gate::cp(ctrl, block3 + i), T_GADGET_PHASE2);
        }
    }
    let cp_end = c.len();

    // Re-encode the data block.
    let enc = map.encode_circuit_on_block(width, 1)?;
    for g in enc.gates {
        c.push_labeled(g, T_GADGET_PHASE2);
    }
    let enc_end = c.len();

    c.check()?;
    let layout = TGadgetLayout { cnot32_end, cnot21_end, dec_end, cx_end, cp_end, enc_end };
    Ok((c, layout))
}

/// Structural composition of a code with itself: blocks of the outer code
/// are themselves encoded with the inner code. Generator counts and
/// commutation are checked; the composed encoder is assembled but not meant
/// for dense execution.
pub fn concatenate(outer: &EncodingMap, inner: &EncodingMap) -> Result<EncodingMap> {
    let n_out = outer.n();
    let n_in = inner.n();
    let n = n_out * n_in;

    let lift = |op: &PauliString| -> Result<PauliString> {
        let mut lifted = PauliString::identity(n);
        for (b, letter) in op.letters().iter().enumerate() {
            let embedding: Vec<usize> = (0..n_in).map(|i| b * n_in + i).collect();
            let factor = match letter {
                crate::qlinalg::Pauli::I => continue,
                crate::qlinalg::Pauli::X => inner.descriptor.logical_x.embed(n, &embedding)?,
                crate::qlinalg::Pauli::Z => inner.descriptor.logical_z.embed(n, &embedding)?,
                crate::qlinalg::Pauli::Y => inner
                    .descriptor
                    .logical_x
                    .compose(&inner.descriptor.logical_z)?
                    .embed(n, &embedding)?,
            };
            lifted = lifted.compose(&factor)?;
        }
        Ok(lifted)
    };

    let mut stabilizers = Vec::new();
    // Inner generators on each outer block.
    for b in 0..n_out {
        for g in &inner.descriptor.stabilizers {
            let embedding: Vec<usize> = (0..n_in).map(|i| b * n_in + i).collect();
            stabilizers.push(g.embed(n, &embedding)?);
        }
    }
    // Outer generators lifted through the inner logical operators.
    for g in &outer.descriptor.stabilizers {
        stabilizers.push(lift(g)?);
    }

    let descriptor = CodeDescriptor {
        name: format!("{}^2", outer.descriptor.name),
        num_physical: n,
        distance: outer.descriptor.distance * inner.descriptor.distance,
        stabilizers,
        logical_x: lift(&outer.descriptor.logical_x)?,
        logical_z: lift(&outer.descriptor.logical_z)?,
        max_sim_subset: (outer.descriptor.distance * inner.descriptor.distance - 1) / 2,
        phase_kind: match (outer.descriptor.phase_kind, inner.descriptor.phase_kind) {
            // Two conjugating levels cancel.
            (GateKind::Pdag, GateKind::Pdag) => GateKind::P,
            (GateKind::P, k) | (k, GateKind::P) => k,
            _ => GateKind::P,
        },
    };
    descriptor.validate()?;

    // Composed encoder: outer encode on block positions, then inner encode
    // of every outer physical qubit.
    let mut gates = Vec::new();
    for g in &outer.encode_circuit.gates {
        let targets: Vec<usize> = g.targets.iter().map(|&t| t * n_in).collect();
        gates.push(Gate { kind: g.kind, targets });
    }
    for b in 0..n_out {
        for g in &inner.encode_circuit.gates {
            let targets: Vec<usize> = g.targets.iter().map(|&t| b * n_in + t).collect();
            gates.push(Gate { kind: g.kind, targets });
        }
    }
    let encode_circuit = Circuit::with_gates(n, gates)?;
    Ok(EncodingMap { descriptor, encode_circuit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::snapshots;
    use crate::qlinalg::{partial_trace_state, random, trace_distance, Pauli};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t_plus() -> StateVector {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&GateKind::H.matrix(), &[0]).unwrap();
        s.apply_gate(&GateKind::T.matrix(), &[0]).unwrap();
        s
    }

    #[test]
    fn steane_fixture_is_structurally_valid() {
        let map = EncodingMap::steane();
        map.descriptor.validate().unwrap();
        assert_eq!(map.descriptor.num_physical, 7);
        assert_eq!(map.descriptor.distance, 3);
        assert_eq!(map.descriptor.stabilizers.len(), 6);
        assert_eq!(map.descriptor.max_sim_subset, 1);
        assert_eq!(EncodingMap::steane_raised().descriptor.max_sim_subset, 2);
    }

    #[test]
    fn fixture_round_trips_through_json() {
        let map = EncodingMap::steane();
        let json = map.to_fixture_json();
        let back = EncodingMap::from_fixture_json(&json).unwrap();
        assert_eq!(map, back);
    }

    #[test]
    fn identity_code_encode_is_identity() {
        let map = EncodingMap::identity();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sigma = random::random_density(2, 2, &mut rng).unwrap();
        let out = encode(&map, &sigma).unwrap();
        assert!(out.mat().max_abs_diff(sigma.mat()) < 1e-12);
    }

    #[test]
    fn steane_codewords_live_in_codespace() {
        let map = EncodingMap::steane();
        let proj = codespace_projector(&map.descriptor).unwrap();
        for b in 0..2usize {
            let psi = StateVector::basis(1, b).unwrap();
            let enc = encode_state(&map, &psi).unwrap();
            let projected = proj.mul_vec(enc.amplitudes());
            for (a, p) in enc.amplitudes().iter().zip(projected.iter()) {
                assert!((a - p).norm() < 1e-12);
            }
            // Logical Z eigenvalue distinguishes the two codewords.
            let z = map.descriptor.logical_z.to_matrix().unwrap();
            let expect = z.mul_vec(enc.amplitudes());
            let sign = if b == 0 { 1.0 } else { -1.0 };
            for (a, e) in enc.amplitudes().iter().zip(expect.iter()) {
                assert!((a.scale(sign) - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn steane_single_qubit_marginal_is_maximally_mixed() {
        // Dense oracle: encode |0><0| on all 7 qubits and trace down.
        let map = EncodingMap::steane();
        let enc = encode_state(&map, &StateVector::zero(1).unwrap()).unwrap();
        for q in 0..7 {
            let marg = partial_trace_state(&enc, &[q]).unwrap();
            let mixed = DensityMatrix::maximally_mixed(1).unwrap();
            assert!(marg.mat().max_abs_diff(mixed.mat()) < 1e-12, "qubit {q}");
        }
    }

    #[test]
    fn steane_encoding_of_bell_state_stays_pure() {
        let map = EncodingMap::steane();
        let mut bell = StateVector::zero(2).unwrap();
        bell.apply_gate(&GateKind::H.matrix(), &[0]).unwrap();
        bell.apply_gate(&GateKind::Cnot.matrix(), &[0, 1]).unwrap();
        let enc = encode_state(&map, &bell).unwrap();
        assert_eq!(enc.num_qubits(), 14);
        assert!(enc.is_normalized(1e-12));
        let block0 = partial_trace_state(&enc, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert!((block0.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn codespace_projector_identity_code_is_identity() {
        let map = EncodingMap::identity();
        let proj = codespace_projector(&map.descriptor).unwrap();
        assert!(proj.max_abs_diff(&CMat::identity(2)) < 1e-15);
    }

    #[test]
    fn codespace_projector_rank_two_for_steane() {
        let map = EncodingMap::steane();
        let proj = codespace_projector(&map.descriptor).unwrap();
        assert!(proj.mul(&proj).max_abs_diff(&proj) < 1e-10);
        let (vals, _) = hermitian_eigen(&proj);
        let rank = vals.iter().filter(|&&v| v > 0.5).count();
        assert_eq!(rank, 2);
    }

    #[test]
    fn codespace_projector_annihilates_x_error() {
        let map = EncodingMap::steane();
        let proj = codespace_projector(&map.descriptor).unwrap();
        let enc = encode_state(&map, &StateVector::zero(1).unwrap()).unwrap();
        let mut errored = enc.clone();
        errored.apply_gate(&GateKind::X.matrix(), &[0]).unwrap();
        let projected = proj.mul_vec(errored.amplitudes());
        let norm_sqr: f64 = projected.iter().map(|c| c.norm_sqr()).sum();
        assert!(norm_sqr < 1.0);
        assert!(norm_sqr < 1e-12);
    }

    #[test]
    fn transversal_single_qubit_gates_act_logically() {
        let map = EncodingMap::steane();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [GateKind::X, GateKind::Z, GateKind::H, GateKind::P, GateKind::Pdag] {
            let psi = random::random_state(1, &mut rng).unwrap();
            let mut logical = psi.clone();
            logical.apply_gate(&kind.matrix(), &[0]).unwrap();
            let expected = encode_state(&map, &logical).unwrap();

            let circuit = compile_transversal(&map, kind).unwrap();
            let actual = run(&circuit, &encode_state(&map, &psi).unwrap()).unwrap();
            for (a, b) in actual.amplitudes().iter().zip(expected.amplitudes().iter()) {
                assert!((a - b).norm() < 1e-11, "gate {}", kind.name());
            }
        }
    }

    #[test]
    fn transversal_h_maps_zero_codeword_to_plus_codeword() {
        let map = EncodingMap::steane();
        let circuit = compile_transversal(&map, GateKind::H).unwrap();
        assert_eq!(circuit.len(), 7);
        let enc0 = encode_state(&map, &StateVector::zero(1).unwrap()).unwrap();
        let out = run(&circuit, &enc0).unwrap();
        let mut plus = StateVector::zero(1).unwrap();
        plus.apply_gate(&GateKind::H.matrix(), &[0]).unwrap();
        let expected = encode_state(&map, &plus).unwrap();
        for (a, b) in out.amplitudes().iter().zip(expected.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn transversal_cnot_acts_logically_dense_14_qubits() {
        let map = EncodingMap::steane();
        let circuit = compile_transversal(&map, GateKind::Cnot).unwrap();
        assert_eq!(circuit.len(), 7);
        let ten = StateVector::basis(2, 0b10).unwrap();
        let enc = encode_state(&map, &ten).unwrap();
        let out = run(&circuit, &enc).unwrap();
        let expected = encode_state(&map, &StateVector::basis(2, 0b11).unwrap()).unwrap();
        for (a, b) in out.amplitudes().iter().zip(expected.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn transversal_cz_acts_logically() {
        let map = EncodingMap::steane();
        let circuit = transversal_cz(&map, 0, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let psi = random::random_state(2, &mut rng).unwrap();
        let mut logical = psi.clone();
        // CZ = (I (x) H) CNOT (I (x) H).
        logical.apply_gate(&GateKind::H.matrix(), &[1]).unwrap();
        logical.apply_gate(&GateKind::Cnot.matrix(), &[0, 1]).unwrap();
        logical.apply_gate(&GateKind::H.matrix(), &[1]).unwrap();
        let expected = encode_state(&map, &logical).unwrap();
        let actual = run(&circuit, &encode_state(&map, &psi).unwrap()).unwrap();
        for (a, b) in actual.amplitudes().iter().zip(expected.amplitudes().iter()) {
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn compile_transversal_rejects_non_clifford() {
        let map = EncodingMap::steane();
        assert!(compile_transversal(&map, GateKind::T).is_err());
        assert!(compile_transversal(&map, GateKind::Cp).is_err());
    }

    #[test]
    fn identity_code_transversal_is_single_gate() {
        let map = EncodingMap::identity();
        for kind in [GateKind::X, GateKind::Z, GateKind::P, GateKind::H] {
            let c = compile_transversal(&map, kind).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c.gates[0].kind, kind);
        }
        let c = compile_transversal(&map, GateKind::Cnot).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn t_gadget_identity_code_on_zero_input() {
        // psi = |0>: T|0> = |0> up to phase, so block 3 ends in |0>.
        let map = EncodingMap::identity();
        let (gadget, _) = compile_t_gadget(&map).unwrap();
        let input = StateVector::zero(1)
            .unwrap()
            .tensor(&StateVector::zero(1).unwrap())
            .unwrap()
            .tensor(&t_plus())
            .unwrap();
        let out = run(&gadget, &input).unwrap();
        let block3 = partial_trace_state(&out, &[2]).unwrap();
        let expected = DensityMatrix::basis(1, 0).unwrap();
        assert!(trace_distance(&block3, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn t_gadget_identity_code_on_plus_input() {
        let map = EncodingMap::identity();
        let (gadget, layout) = compile_t_gadget(&map).unwrap();
        assert_eq!(layout.enc_end, gadget.len());
        let mut plus = StateVector::zero(1).unwrap();
        plus.apply_gate(&GateKind::H.matrix(), &[0]).unwrap();
        let input = StateVector::zero(1)
            .unwrap()
            .tensor(&plus)
            .unwrap()
            .tensor(&t_plus())
            .unwrap();
        let out = run(&gadget, &input).unwrap();
        let block3 = partial_trace_state(&out, &[2]).unwrap();
        let expected = t_plus().to_density().unwrap();
        assert!(trace_distance(&block3, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn t_gadget_identity_code_random_inputs_3_qubit_oracle() {
        let map = EncodingMap::identity();
        let (gadget, _) = compile_t_gadget(&map).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let psi = random::random_state(1, &mut rng).unwrap();
            let input =
                StateVector::zero(1).unwrap().tensor(&psi).unwrap().tensor(&t_plus()).unwrap();
            let out = run(&gadget, &input).unwrap();
            let block3 = partial_trace_state(&out, &[2]).unwrap();
            let mut t_psi = psi.clone();
            t_psi.apply_gate(&GateKind::T.matrix(), &[0]).unwrap();
            let expected = t_psi.to_density().unwrap();
            assert!(trace_distance(&block3, &expected).unwrap() < 1e-11);
        }
    }

    #[test]
    fn t_gadget_steane_dense_21_qubit_check() {
        let map = EncodingMap::steane();
        let (gadget, _) = compile_t_gadget(&map).unwrap();
        assert_eq!(gadget.num_qubits, 21);
        let input = encode_state(
            &map,
            &StateVector::zero(1)
                .unwrap()
                .tensor(&StateVector::zero(1).unwrap())
                .unwrap()
                .tensor(&t_plus())
                .unwrap(),
        )
        .unwrap();
        let out = run(&gadget, &input).unwrap();
        // Decode block 3 and compare the decoded qubit against T|0>.
        let dec = map.decode_circuit_on_block(21, 2).unwrap();
        let decoded = run(&dec, &out).unwrap();
        let out_qubit = partial_trace_state(&decoded, &[14]).unwrap();
        let expected = DensityMatrix::basis(1, 0).unwrap();
        assert!(trace_distance(&out_qubit, &expected).unwrap() < 1e-9);
    }

    #[test]
    fn t_gadget_snapshots_stay_normalized() {
        let map = EncodingMap::identity();
        let (gadget, _) = compile_t_gadget(&map).unwrap();
        let input = StateVector::zero(1)
            .unwrap()
            .tensor(&StateVector::zero(1).unwrap())
            .unwrap()
            .tensor(&t_plus())
            .unwrap();
        for s in snapshots(&gadget, &input).unwrap() {
            assert!(s.is_normalized(1e-12));
        }
    }

    #[test]
    fn secret_sharing_on_steane_pairs() {
        // Reduced states on any two qubits of one block are independent of
        // the encoded data, including data entangled with an environment.
        let map = EncodingMap::steane();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let subsets: Vec<Vec<usize>> = vec![vec![0], vec![3], vec![0, 1], vec![2, 5], vec![4, 6]];
        let mut reference: Vec<Option<DensityMatrix>> = vec![None; subsets.len()];
        for trial in 0..8 {
            let joint = random::random_state(2, &mut rng).unwrap();
            let state = encode_env(&map, &joint);
            for (si, subset) in subsets.iter().enumerate() {
                let marg = partial_trace_state(&state, subset).unwrap();
                match &reference[si] {
                    None => reference[si] = Some(marg),
                    Some(r) => {
                        assert!(
                            trace_distance(r, &marg).unwrap() < 1e-10,
                            "subset {subset:?} trial {trial}"
                        );
                    }
                }
            }
        }
    }

    /// Encodes qubit 0 of a two-qubit state, keeping qubit 1 as a raw
    /// environment appended after the block.
    fn encode_env(map: &EncodingMap, psi: &StateVector) -> StateVector {
        let n = map.n();
        let total = n + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
        for (s, &a) in psi.amplitudes().iter().enumerate() {
            let data = (s >> 1) & 1;
            let env = s & 1;
            let t = (data << (total - 1)) | env;
            amps[t] = a;
        }
        let state = StateVector::from_amplitudes(total, amps).unwrap();
        let enc = map.encode_circuit_on_block(total, 0).unwrap();
        run(&enc, &state).unwrap()
    }

    #[test]
    fn concatenated_steane_structure() {
        let steane = EncodingMap::steane();
        let squared = concatenate(&steane, &steane).unwrap();
        assert_eq!(squared.descriptor.num_physical, 49);
        assert_eq!(squared.descriptor.distance, 9);
        assert_eq!(squared.descriptor.stabilizers.len(), 48);
        squared.descriptor.validate().unwrap();
        assert_eq!(squared.descriptor.max_sim_subset, 4);
        for g in &squared.descriptor.stabilizers {
            assert!(g.support().iter().all(|&q| q < 49));
        }
    }

    #[test]
    fn concatenated_logicals_anticommute() {
        let steane = EncodingMap::steane();
        let squared = concatenate(&steane, &steane).unwrap();
        assert!(!squared
            .descriptor
            .logical_x
            .commutes_with(&squared.descriptor.logical_z)
            .unwrap());
    }

    #[test]
    fn pauli_embedding_places_letters() {
        let p = PauliString::parse("XZ").unwrap();
        let e = p.embed(4, &[1, 3]).unwrap();
        assert_eq!(e.letter(1), Pauli::X);
        assert_eq!(e.letter(3), Pauli::Z);
        assert_eq!(e.letter(0), Pauli::I);
    }
}
