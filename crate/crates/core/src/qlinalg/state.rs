use super::{bit_pos, check_targets, mat::CMat, DensityMatrix, C_ONE, C_ZERO};
use crate::{Error, Result, MAX_STATE_QUBITS, TOL_ALGEBRA};
use num_complex::Complex64;

/// Dense pure state on an ordered register of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Computational basis state |index>.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_STATE_QUBITS {
            return Err(Error::SizeLimit { requested: num_qubits, limit: MAX_STATE_QUBITS });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Invalid(format!("basis index {index} out of range")));
        }
        let mut amps = vec![C_ZERO; dim];
        amps[index] = C_ONE;
        Ok(Self { num_qubits, amps })
    }

    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_STATE_QUBITS {
            return Err(Error::SizeLimit { requested: num_qubits, limit: MAX_STATE_QUBITS });
        }
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                num_qubits
            )));
        }
        let v = Self { num_qubits, amps };
        if !v.is_normalized(TOL_ALGEBRA) {
            return Err(Error::InvalidState(format!("squared norm {}", v.norm_sqr())));
        }
        Ok(v)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in self.amps.iter_mut() {
                *a /= n;
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_STATE_QUBITS {
            return Err(Error::SizeLimit { requested: n, limit: MAX_STATE_QUBITS });
        }
        let mut amps = vec![C_ZERO; 1 << n];
        let od = other.dim();
        for (i, &a) in self.amps.iter().enumerate() {
            if a == C_ZERO {
                continue;
            }
            for (j, &b) in other.amps.iter().enumerate() {
                amps[i * od + j] = a * b;
            }
        }
        Ok(Self { num_qubits: n, amps })
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(self)
    }

    /// Applies a `2^k x 2^k` unitary to the listed targets; `targets[0]` is
    /// the most significant bit of the gate's row/column index.
    pub fn apply_gate(&mut self, gate: &CMat, targets: &[usize]) -> Result<()> {
        check_targets(self.num_qubits, targets)?;
        let k = targets.len();
        if gate.dim() != 1 << k {
            return Err(Error::DimensionMismatch(format!(
                "gate dimension {} for {} targets",
                gate.dim(),
                k
            )));
        }
        apply_gate_amps(&mut self.amps, self.num_qubits, gate, targets);
        Ok(())
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange { index: qubit, num_qubits: self.num_qubits });
        }
        let pos = bit_pos(self.num_qubits, qubit);
        let mut p = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if (i >> pos) & 1 == 1 {
                p += a.norm_sqr();
            }
        }
        Ok(p)
    }
}

/// In-place gate application on a raw amplitude buffer.
pub(crate) fn apply_gate_amps(
    amps: &mut [Complex64],
    num_qubits: usize,
    gate: &CMat,
    targets: &[usize],
) {
    let k = targets.len();
    let gdim = 1usize << k;
    let positions: Vec<usize> = targets.iter().map(|&t| bit_pos(num_qubits, t)).collect();
    let target_mask: usize = positions.iter().map(|&p| 1usize << p).sum();
    let mut gathered = vec![C_ZERO; gdim];
    let dim = amps.len();
    let mut base = 0usize;
    while base < dim {
        if base & target_mask != 0 {
            base += 1;
            continue;
        }
        // Indices for each gate-basis pattern; targets[0] is the MSB.
        for pat in 0..gdim {
            let mut idx = base;
            for (i, &pos) in positions.iter().enumerate() {
                idx |= ((pat >> (k - 1 - i)) & 1) << pos;
            }
            gathered[pat] = amps[idx];
        }
        for row in 0..gdim {
            let mut acc = C_ZERO;
            for col in 0..gdim {
                acc += gate[(row, col)] * gathered[col];
            }
            let mut idx = base;
            for (i, &pos) in positions.iter().enumerate() {
                idx |= ((row >> (k - 1 - i)) & 1) << pos;
            }
            amps[idx] = acc;
        }
        base += 1;
    }
}
