use super::state::apply_gate_amps;
use super::{check_targets, hermitian_eigen, mat::CMat, StateVector, C_ZERO};
use crate::{Error, Result, MAX_DENSITY_QUBITS, TOL_ALGEBRA, TOL_PSD};
use num_complex::Complex64;

/// Dense mixed state on an ordered register of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let n = state.num_qubits();
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit { requested: n, limit: MAX_DENSITY_QUBITS });
        }
        let dim = state.dim();
        let mut mat = CMat::zeros(dim);
        let amps = state.amplitudes();
        for i in 0..dim {
            if amps[i] == C_ZERO {
                continue;
            }
            for j in 0..dim {
                mat[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Ok(Self { num_qubits: n, mat })
    }

    /// Statistical mixture of pure states; probabilities must sum to 1.
    pub fn from_ensemble(members: &[(f64, StateVector)]) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Invalid("empty ensemble".into()));
        }
        let n = members[0].1.num_qubits();
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit { requested: n, limit: MAX_DENSITY_QUBITS });
        }
        let dim = 1usize << n;
        let mut mat = CMat::zeros(dim);
        for (p, psi) in members {
            if psi.num_qubits() != n {
                return Err(Error::DimensionMismatch("ensemble member size".into()));
            }
            let amps = psi.amplitudes();
            for i in 0..dim {
                if amps[i] == C_ZERO {
                    continue;
                }
                for j in 0..dim {
                    mat[(i, j)] += amps[i] * amps[j].conj() * *p;
                }
            }
        }
        Ok(Self { num_qubits: n, mat })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::from_pure(&StateVector::basis(num_qubits, index)?)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit { requested: num_qubits, limit: MAX_DENSITY_QUBITS });
        }
        let dim = 1usize << num_qubits;
        let mat = CMat::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self { num_qubits, mat })
    }

    /// Wraps a raw matrix without validating state-ness. The caller is
    /// expected to produce something that passes `validate` up to numerics.
    pub fn from_mat_unchecked(mat: CMat) -> Result<Self> {
        let dim = mat.dim();
        if !dim.is_power_of_two() || dim == 0 {
            return Err(Error::DimensionMismatch(format!("matrix dimension {dim}")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits == 0 || num_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit { requested: num_qubits, limit: MAX_DENSITY_QUBITS });
        }
        Ok(Self { num_qubits, mat })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_mul(&self.mat).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = hermitian_eigen(&self.mat);
        vals[0]
    }

    /// The shared validator: Hermitian, unit trace, positive semidefinite.
    pub fn validate(&self) -> Result<()> {
        let h = self.mat.hermiticity_defect();
        if h > TOL_ALGEBRA {
            return Err(Error::NotHermitian(h));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > TOL_ALGEBRA || t.im.abs() > TOL_ALGEBRA {
            return Err(Error::InvalidState(format!("trace {t}")));
        }
        let min = self.min_eigenvalue();
        if min < -TOL_PSD {
            return Err(Error::InvalidState(format!("min eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_DENSITY_QUBITS {
            return Err(Error::SizeLimit { requested: n, limit: MAX_DENSITY_QUBITS });
        }
        Ok(Self { num_qubits: n, mat: self.mat.kron(&other.mat) })
    }

    /// Conjugates by a gate on the listed targets: rho -> U rho U^dagger.
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
        let dim = self.dim();
        // Left multiply: each column transforms over the row index.
        let mut col = vec![C_ZERO; dim];
        for c in 0..dim {
            for r in 0..dim {
                col[r] = self.mat[(r, c)];
            }
            apply_gate_amps(&mut col, self.num_qubits, gate, targets);
            for r in 0..dim {
                self.mat[(r, c)] = col[r];
            }
        }
        // Right multiply by U^dagger: each row transforms with conj(U).
        let conj_gate = conj_entrywise(gate);
        let mut row = vec![C_ZERO; dim];
        for r in 0..dim {
            for c in 0..dim {
                row[c] = self.mat[(r, c)];
            }
            apply_gate_amps(&mut row, self.num_qubits, &conj_gate, targets);
            for c in 0..dim {
                self.mat[(r, c)] = row[c];
            }
        }
        Ok(())
    }

    /// Expectation value of a Hermitian operator on the full register.
    pub fn expectation(&self, op: &CMat) -> Result<f64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch("expectation operator".into()));
        }
        Ok(self.mat.trace_mul(op).re)
    }

    /// Zeroes eigenvalues in (-TOL_PSD, 0) and rescales to the original
    /// trace. Genuinely negative eigenvalues are left alone so that invalid
    /// states still fail validation downstream.
    pub fn clamp_psd(&self) -> Self {
        let (vals, vecs) = hermitian_eigen(&self.mat);
        if vals.iter().all(|&v| v >= 0.0) {
            return self.clone();
        }
        let old_trace = self.trace().re;
        let dim = self.dim();
        let clamped: Vec<f64> = vals
            .iter()
            .map(|&v| if v < 0.0 && v > -TOL_PSD { 0.0 } else { v })
            .collect();
        let mut mat = CMat::zeros(dim);
        for k in 0..dim {
            if clamped[k] == 0.0 {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    mat[(i, j)] += vecs[(i, k)] * vecs[(j, k)].conj() * clamped[k];
                }
            }
        }
        let new_trace = mat.trace().re;
        if new_trace > 0.0 && old_trace > 0.0 {
            mat = mat.scale(Complex64::new(old_trace / new_trace, 0.0));
        }
        Self { num_qubits: self.num_qubits, mat: mat.symmetrize() }
    }
}

fn conj_entrywise(m: &CMat) -> CMat {
    let dim = m.dim();
    let data = m.data().iter().map(|c| c.conj()).collect();
    CMat::from_vec(dim, data)
}

/// Embeds an operator given on `support` (ascending qubit order; `support[0]`
/// is the most significant bit of the operator index) into `num_qubits`.
pub fn embed_op(num_qubits: usize, support: &[usize], op: &CMat) -> Result<CMat> {
    check_targets(num_qubits, support)?;
    let k = support.len();
    if op.dim() != 1 << k {
        return Err(Error::DimensionMismatch("embedded operator dimension".into()));
    }
    let dim = 1usize << num_qubits;
    let positions: Vec<usize> = support.iter().map(|&q| super::bit_pos(num_qubits, q)).collect();
    let support_mask: usize = positions.iter().map(|&p| 1usize << p).sum();
    let mut out = CMat::zeros(dim);
    let extract = |g: usize| -> usize {
        let mut v = 0usize;
        for (i, &pos) in positions.iter().enumerate() {
            v |= ((g >> pos) & 1) << (k - 1 - i);
        }
        v
    };
    for i in 0..dim {
        let oi = extract(i);
        let rest_i = i & !support_mask;
        for j in 0..dim {
            if (j & !support_mask) != rest_i {
                continue;
            }
            out[(i, j)] = op[(oi, extract(j))];
        }
    }
    Ok(out)
}
