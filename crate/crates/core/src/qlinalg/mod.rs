//! Dense complex linear algebra for small multi-qubit systems.
//!
//! Qubit ordering convention, used everywhere in the crate: **qubit 0 is the
//! most significant bit of the basis index**. A basis index `b` on `n` qubits
//! has the value of qubit `i` in bit position `n - 1 - i`.

mod density;
mod eig;
mod mat;
mod pauli;
pub mod random;
mod state;

pub use density::{embed_op, DensityMatrix};
pub use eig::hermitian_eigen;
pub use mat::CMat;
pub use pauli::{pauli_backpropagate, pauli_decompose, pauli_reconstruct, Pauli, PauliString, Phase};
pub use state::StateVector;

use crate::{Error, Result};
use num_complex::Complex64;

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Bit position of qubit `q` within a basis index on `n` qubits.
#[inline]
pub(crate) fn bit_pos(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Value of qubit `q` in basis index `idx` on `n` qubits.
#[inline]
pub fn qubit_bit(n: usize, idx: usize, q: usize) -> usize {
    (idx >> bit_pos(n, q)) & 1
}

/// Validates a list of gate targets against a register size.
pub(crate) fn check_targets(num_qubits: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::QubitOutOfRange { index: t, num_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    Ok(())
}

/// Splits basis indices into a kept part and an environment part.
///
/// Kept qubits are listed in ascending order; qubit `keep[i]` becomes qubit
/// `i` of the reduced system.
pub(crate) struct BitSplit {
    kept_pos: Vec<usize>,
    env_pos: Vec<usize>,
}

impl BitSplit {
    pub fn new(num_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateTarget(w[0]));
            }
        }
        if let Some(&max) = sorted.last() {
            if max >= num_qubits {
                return Err(Error::QubitOutOfRange { index: max, num_qubits });
            }
        }
        let kept_pos: Vec<usize> = sorted.iter().map(|&q| bit_pos(num_qubits, q)).collect();
        let mut env_pos = Vec::with_capacity(num_qubits - sorted.len());
        for q in 0..num_qubits {
            if !sorted.contains(&q) {
                env_pos.push(bit_pos(num_qubits, q));
            }
        }
        Ok(Self { kept_pos, env_pos })
    }

    #[inline]
    pub fn num_kept(&self) -> usize {
        self.kept_pos.len()
    }

    #[inline]
    pub fn num_env(&self) -> usize {
        self.env_pos.len()
    }

    /// Assembles a global index from a kept-part index and an env-part index.
    #[inline]
    pub fn assemble(&self, kept: usize, env: usize) -> usize {
        let mut idx = 0usize;
        for (i, &pos) in self.kept_pos.iter().enumerate() {
            idx |= ((kept >> (self.num_kept() - 1 - i)) & 1) << pos;
        }
        for (i, &pos) in self.env_pos.iter().enumerate() {
            idx |= ((env >> (self.num_env() - 1 - i)) & 1) << pos;
        }
        idx
    }
}

/// Reduced density matrix of a pure state on the (ascending) subset `keep`.
pub fn partial_trace_state(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let m = partial_trace_cross(state, state, keep)?;
    DensityMatrix::from_mat_unchecked(m)
}

/// Cross-Gram partial trace of two pure states:
/// `M[i][j] = sum_e  left[(i,e)] * conj(right[(j,e)])`.
///
/// With `left == right` this is the reduced density matrix; distinct inputs
/// give the work-register factor of history-state cross terms.
pub fn partial_trace_cross(left: &StateVector, right: &StateVector, keep: &[usize]) -> Result<CMat> {
    if left.num_qubits() != right.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "cross trace of {} vs {} qubits",
            left.num_qubits(),
            right.num_qubits()
        )));
    }
    let split = BitSplit::new(left.num_qubits(), keep)?;
    let k = split.num_kept();
    let dim = 1usize << k;
    let mut out = CMat::zeros(dim);
    let la = left.amplitudes();
    let ra = right.amplitudes();
    let env_count = 1usize << split.num_env();
    let mut lbuf = vec![C_ZERO; dim];
    let mut rbuf = vec![C_ZERO; dim];
    for env in 0..env_count {
        for kept in 0..dim {
            let g = split.assemble(kept, env);
            lbuf[kept] = la[g];
            rbuf[kept] = ra[g];
        }
        for i in 0..dim {
            if lbuf[i] == C_ZERO {
                continue;
            }
            for j in 0..dim {
                out[(i, j)] += lbuf[i] * rbuf[j].conj();
            }
        }
    }
    Ok(out)
}

/// Reduced density matrix of a mixed state on the (ascending) subset `keep`.
pub fn partial_trace_dm(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let split = BitSplit::new(rho.num_qubits(), keep)?;
    let k = split.num_kept();
    let dim = 1usize << k;
    let mut out = CMat::zeros(dim);
    let env_count = 1usize << split.num_env();
    for env in 0..env_count {
        for i in 0..dim {
            let gi = split.assemble(i, env);
            for j in 0..dim {
                let gj = split.assemble(j, env);
                out[(i, j)] += rho.mat()[(gi, gj)];
            }
        }
    }
    DensityMatrix::from_mat_unchecked(out)
}

/// Trace distance `D(rho, sigma) = 1/2 ||rho - sigma||_1`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance of {} vs {} qubits",
            rho.num_qubits(),
            sigma.num_qubits()
        )));
    }
    let diff = rho.mat().sub(sigma.mat());
    Ok(0.5 * trace_norm(&diff))
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
pub fn trace_norm(m: &CMat) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().map(|v| v.abs()).sum()
}
