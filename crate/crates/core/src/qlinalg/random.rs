use super::{DensityMatrix, Pauli, PauliString, Phase, StateVector};
use crate::Result;
use num_complex::Complex64;
use rand::Rng;

/// Haar-ish random pure state (normalized complex Gaussian amplitudes).
pub fn random_state<R: Rng>(num_qubits: usize, rng: &mut R) -> Result<StateVector> {
    let dim = 1usize << num_qubits;
    let mut amps = Vec::with_capacity(dim);
    for _ in 0..dim {
        amps.push(Complex64::new(gaussian(rng), gaussian(rng)));
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    StateVector::from_amplitudes(num_qubits, amps)
}

/// Random mixed state as a rank-`rank` mixture of random pure states.
pub fn random_density<R: Rng>(num_qubits: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let rank = rank.max(1);
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let members: Result<Vec<(f64, StateVector)>> = weights
        .into_iter()
        .map(|w| random_state(num_qubits, rng).map(|s| (w, s)))
        .collect();
    DensityMatrix::from_ensemble(&members?)
}

/// Uniformly random Pauli string with +1 phase.
pub fn random_pauli<R: Rng>(num_qubits: usize, rng: &mut R) -> PauliString {
    let letters: Vec<Pauli> = (0..num_qubits)
        .map(|_| Pauli::ALL[rng.gen_range(0..4)])
        .collect();
    PauliString::new(num_qubits, letters, Phase::ONE).expect("length matches")
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; tails are irrelevant here.
    let u: f64 = rng.gen::<f64>().max(1e-12);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}
