//! Simulators for locally simulatable codes: reduced density matrices of
//! codewords and of intermediate steps of transversal Clifford computation
//! and of the unitary T-gadget, computed without access to the encoded data.
//!
//! The Clifford-step simulator works purely symbolically: each Pauli on the
//! requested subset is back-propagated through the physical prefix, and its
//! coefficient is read off small codeword marginals. Cost is `4^|S|` terms,
//! each with one back-propagation and one small trace.

use crate::circuits::{run, Circuit, Gate, GateKind};
use crate::qecc::{compile_t_gadget, compile_transversal, encode_state, EncodingMap, TGadgetLayout};
use crate::qlinalg::{
    partial_trace_state, pauli_backpropagate, CMat, DensityMatrix, Pauli, PauliString, Phase,
    StateVector,
};
use crate::{Error, Result};
use num_complex::Complex64;

/// Request record for the code simulators.
#[derive(Debug, Clone)]
pub struct SimRequest {
    pub gate: Option<GateKind>,
    pub step: usize,
    pub subset: Vec<usize>,
    pub control_bit: Option<bool>,
}

/// Reduced state of a codeword on a block-local subset, independent of the
/// encoded data. Computed densely from the encoding of |0>.
pub fn sim_codeword(map: &EncodingMap, subset: &[usize]) -> Result<DensityMatrix> {
    check_block_subset(map, subset)?;
    let enc = encode_state(map, &StateVector::zero(1)?)?;
    partial_trace_state(&enc, subset)
}

fn check_block_subset(map: &EncodingMap, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = map.n();
    for &q in subset {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: n });
        }
    }
    if subset.len() > map.descriptor.max_sim_subset {
        return Err(Error::SimBound(format!(
            "|S| = {} exceeds per-block bound {} for {}",
            subset.len(),
            map.descriptor.max_sim_subset,
            map.descriptor.name
        )));
    }
    Ok(())
}

/// Description of one logical block inside a multi-block register, telling
/// the Pauli-sum engine how to evaluate expectations against the block's
/// initial content.
#[derive(Debug, Clone)]
pub enum BlockContent {
    /// Block holds an unknown encoded state; expectations come from codeword
    /// subset states and are valid only within the per-block bound.
    Secret,
    /// Block holds the encoding of a publicly known single-qubit pure state;
    /// expectations are computed exactly at any support size.
    Public(StateVector),
    /// Unencoded qubits in a publicly known joint pure state (flags,
    /// decoded scratch). The state covers the whole block range.
    Raw(StateVector),
}

/// Expectation `trace(block_initial_state * P)` for a Pauli restricted to
/// one block, with block-local letters.
fn block_factor(
    map: &EncodingMap,
    content: &BlockContent,
    letters: &[(usize, Pauli)],
) -> Result<Complex64> {
    if letters.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let locals: Vec<usize> = letters.iter().map(|&(q, _)| q).collect();
    let small = small_pauli(letters);
    match content {
        BlockContent::Secret => {
            if letters.len() > map.descriptor.max_sim_subset {
                return Err(Error::SimBound(format!(
                    "back-propagated support {:?} ({}) exceeds per-block bound {}",
                    locals,
                    small,
                    map.descriptor.max_sim_subset
                )));
            }
            let tau = sim_codeword(map, &locals)?;
            small.trace_with(&tau)
        }
        BlockContent::Public(qubit) => {
            let enc = encode_state(map, qubit)?;
            let marg = partial_trace_state(&enc, &locals)?;
            small.trace_with(&marg)
        }
        BlockContent::Raw(state) => {
            let marg = partial_trace_state(state, &locals)?;
            small.trace_with(&marg)
        }
    }
}

/// Packs block-local (position, letter) pairs into a Pauli on the subset,
/// positions ascending.
fn small_pauli(letters: &[(usize, Pauli)]) -> PauliString {
    let k = letters.len();
    let ls: Vec<Pauli> = letters.iter().map(|&(_, p)| p).collect();
    PauliString::new(k, ls, Phase::ONE).expect("length matches")
}

/// Pauli-sum reconstruction of the marginal on `subset` of
/// `prefix * (initial blocks) * prefix^dagger`, where the initial state is a
/// product over blocks described by `contents` and `prefix` is Clifford.
///
/// `block_ranges[i]` gives the physical positions of block i; blocks must
/// tile the register.
pub fn pauli_sum_marginal(
    map: &EncodingMap,
    num_qubits: usize,
    block_ranges: &[std::ops::Range<usize>],
    contents: &[BlockContent],
    prefix: &[Gate],
    subset: &[usize],
) -> Result<DensityMatrix> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::DuplicateTarget(sorted[0]));
    }
    for &q in &sorted {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits });
        }
    }
    let k = sorted.len();
    let dim = 1usize << k;
    let mut acc = CMat::zeros(dim);
    let scale = 1.0 / dim as f64;
    for code in 0..1usize << (2 * k) {
        let letters: Vec<Pauli> = (0..k)
            .map(|i| Pauli::ALL[(code >> (2 * (k - 1 - i))) & 3])
            .collect();
        let on_subset = PauliString::new(k, letters.clone(), Phase::ONE)?;
        let embedded = on_subset.embed(num_qubits, &sorted)?;
        let back = pauli_backpropagate(&embedded, prefix)?;
        // Split the support of P' by block and take the per-block factors.
        let mut coeff = back.phase().value();
        for (bi, range) in block_ranges.iter().enumerate() {
            let in_block: Vec<(usize, Pauli)> = range
                .clone()
                .filter(|&q| back.letter(q) != Pauli::I)
                .map(|q| (q - range.start, back.letter(q)))
                .collect();
            if in_block.is_empty() {
                continue;
            }
            coeff *= block_factor(map, &contents[bi], &in_block)?;
        }
        if coeff.norm() < 1e-15 {
            continue;
        }
        // Accumulate coeff * P on the subset.
        for col in 0..dim {
            let (row, ph) = on_subset.column_action(col);
            acc[(row, col)] += ph * coeff * scale;
        }
    }
    DensityMatrix::from_mat_unchecked(acc.symmetrize()).map(|d| d.clamp_psd())
}

/// Reduced state at step `t` of the transversal implementation of a logical
/// Clifford gate, equal to the dense marginal of
/// `(U_t...U_1) Enc(sigma) (U_t...U_1)^dagger` for every encoded `sigma`.
///
/// With `control_bit` given, the prefix is the classically controlled
/// version: no gates for 0, the full gates for 1.
pub fn sim_clifford_step(
    map: &EncodingMap,
    gate: GateKind,
    t: usize,
    subset: &[usize],
    control_bit: Option<bool>,
) -> Result<DensityMatrix> {
    let circuit = compile_transversal(map, gate)?;
    let num_blocks = gate.arity();
    let num_qubits = num_blocks * map.n();
    if t > circuit.len() {
        return Err(Error::StepOutOfRange(t));
    }
    let prefix: Vec<Gate> = match control_bit {
        Some(false) => Vec::new(),
        _ => circuit.gates[..t].to_vec(),
    };
    let block_ranges: Vec<std::ops::Range<usize>> = (0..num_blocks).map(|b| map.block(b)).collect();
    let contents = vec![BlockContent::Secret; num_blocks];
    pauli_sum_marginal(map, num_qubits, &block_ranges, &contents, &prefix, subset)
}

/// Reduced state at step `t` of the unitary T-gadget, equal to the dense
/// marginal of the evolving `Enc(|0><0| (x) sigma (x) |T><T|)` for every
/// single-qubit `sigma`.
pub fn sim_t_gadget_step(map: &EncodingMap, t: usize, subset: &[usize]) -> Result<DensityMatrix> {
    let (gadget, layout) = compile_t_gadget(map)?;
    if t > gadget.len() {
        return Err(Error::StepOutOfRange(t));
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = map.n();
    let width = 3 * n;
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    for &q in &sorted {
        if q >= width {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: width });
        }
    }

    if t <= layout.cnot21_end {
        // Phase 1: Pauli sums against the initial product
        // Enc(|0>) (x) Enc(sigma) (x) Enc(|T>).
        let contents = vec![
            BlockContent::Public(StateVector::zero(1)?),
            BlockContent::Secret,
            BlockContent::Public(t_plus_state()?),
        ];
        let ranges = vec![map.block(0), map.block(1), map.block(2)];
        return pauli_sum_marginal(map, width, &ranges, &contents, &gadget.gates[..t], &sorted);
    }

    // Phase 2: uniform mixture over the decoded control bit b. Within each
    // branch, blocks 1 and 2 hold known states and block 3 holds the
    // encoding of an unknown qubit under a branch-dependent Clifford prefix.
    let s1: Vec<usize> = sorted.iter().copied().filter(|&q| q < n).collect();
    let s2: Vec<usize> = sorted.iter().copied().filter(|&q| (n..2 * n).contains(&q)).collect();
    let s3: Vec<usize> = sorted.iter().copied().filter(|&q| q >= 2 * n).collect();

    let mut acc: Option<CMat> = None;
    for b in 0..2usize {
        // Block 1: Enc(|b>), untouched during phase 2.
        let p1 = if s1.is_empty() {
            None
        } else {
            let enc = encode_state(map, &StateVector::basis(1, b)?)?;
            Some(partial_trace_state(&enc, &s1)?)
        };
        // Block 2: Enc(|b>) evolving through Dec and re-Enc; the correction
        // gates act as identity on the block within a basis branch.
        let p2 = if s2.is_empty() {
            None
        } else {
            let block_gates = block2_prefix(&gadget, &layout, t, n);
            let enc = encode_state(map, &StateVector::basis(1, b)?)?;
            let evolved = run(&Circuit::with_gates(n, block_gates)?, &enc)?;
            let local: Vec<usize> = s2.iter().map(|&q| q - n).collect();
            Some(partial_trace_state(&evolved, &local)?)
        };
        // Block 3: secret content under the branch-b correction prefix.
        let p3 = if s3.is_empty() {
            None
        } else {
            let local: Vec<usize> = s3.iter().map(|&q| q - 2 * n).collect();
            let prefix = block3_branch_prefix(map, &layout, t, b)?;
            let ranges = vec![0..n];
            let contents = vec![BlockContent::Secret];
            Some(pauli_sum_marginal(map, n, &ranges, &contents, &prefix, &local)?)
        };
        let branch = tensor_chain(&[p1, p2, p3])?;
        acc = Some(match acc {
            None => branch.mat().scale(Complex64::new(0.5, 0.0)),
            Some(m) => m.add(&branch.mat().scale(Complex64::new(0.5, 0.0))),
        });
    }
    DensityMatrix::from_mat_unchecked(acc.expect("two branches").symmetrize())
        .map(|d| d.clamp_psd())
}

fn t_plus_state() -> Result<StateVector> {
    let mut s = StateVector::zero(1)?;
    s.apply_gate(&GateKind::H.matrix(), &[0])?;
    s.apply_gate(&GateKind::T.matrix(), &[0])?;
    Ok(s)
}

/// Gates of the gadget prefix up to `t` that act inside block 2, re-based to
/// block-local indices. Correction gates (controlled from block 2's first
/// qubit into block 3) act as identity on block 2 in a computational-basis
/// branch and are skipped.
fn block2_prefix(gadget: &Circuit, layout: &TGadgetLayout, t: usize, n: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for (i, g) in gadget.gates.iter().enumerate() {
        if i >= t {
            break;
        }
        if i < layout.cnot21_end {
            continue;
        }
        let dec_window = i < layout.dec_end;
        let enc_window = i >= layout.cp_end && i < layout.enc_end;
        if dec_window || enc_window {
            let targets: Vec<usize> = g.targets.iter().map(|&q| q - n).collect();
            out.push(Gate { kind: g.kind, targets });
        }
    }
    out
}

/// The branch-b physical prefix on block 3 up to step `t`: each controlled
/// correction gate acts as its target gate when b = 1 and as identity when
/// b = 0.
fn block3_branch_prefix(
    map: &EncodingMap,
    layout: &TGadgetLayout,
    t: usize,
    b: usize,
) -> Result<Vec<Gate>> {
    let mut out = Vec::new();
    if b == 0 {
        return Ok(out);
    }
    // Controlled-X window: one CNOT per physical qubit, in order.
    let cx_done = t.saturating_sub(layout.dec_end).min(layout.cx_end - layout.dec_end);
    for i in 0..cx_done {
        out.push(Gate::x(i));
    }
    // Controlled-phase window: CP repetitions per qubit, each acting as one
    // physical P on the target in the b = 1 branch.
    let reps = match map.descriptor.phase_kind {
        GateKind::P => 1,
        GateKind::Pdag => 3,
        other => return Err(Error::UnsupportedGate(other.name().into())),
    };
    let cp_done = t.saturating_sub(layout.cx_end).min(layout.cp_end - layout.cx_end);
    for j in 0..cp_done {
        let qubit = j / reps;
        out.push(Gate::p(qubit));
    }
    Ok(out)
}

fn tensor_chain(parts: &[Option<DensityMatrix>]) -> Result<DensityMatrix> {
    let mut acc: Option<DensityMatrix> = None;
    for p in parts.iter().flatten() {
        acc = Some(match acc {
            None => p.clone(),
            Some(a) => a.tensor(p)?,
        });
    }
    acc.ok_or(Error::EmptySubset)
}
