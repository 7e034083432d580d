//! Locally simulatable quantum proofs at desk scale.
//!
//! The crate builds up, layer by layer, everything needed to run and verify
//! locally simulatable proof systems on small instances:
//!
//! - [`qlinalg`]: dense complex states, density matrices, Pauli algebra,
//!   partial traces and distances.
//! - [`circuits`]: the closed gate set and exact circuit execution with
//!   per-step snapshots.
//! - [`qecc`]: the `[[7,1,3]]` Steane code, an identity code for brute-force
//!   pipelines, transversal compilers and the unitary T-gadget.
//! - [`codesim`]: reduced density matrices of codewords and of intermediate
//!   steps of encoded computation, computed without the encoded state.
//! - [`clockham`]: the clock-register circuit-to-Hamiltonian construction and
//!   an exact history-state marginal oracle.
//! - [`histsim`]: the encoded verifier and the snapshot/interval/history
//!   simulators.
//! - [`cldm`]: consistency-of-local-density-matrices instances, the reduction
//!   from encoded verifiers, a tomography verifier and a feasibility oracle.
//! - [`simqma`]: locally verifiable proof systems with efficiently computable
//!   witness marginals.
//! - [`xi`]: bit commitments, the commit-challenge-open protocol, its
//!   zero-knowledge simulator and the knowledge extractors.
//! - [`nizk`]: the non-interactive protocol in the secret parameter model.
//!
//! Every simulator in the crate is paired with an independent dense oracle;
//! the integration suites compare the two routes at fixed tolerances.

pub mod circuits;
pub mod cldm;
pub mod clockham;
pub mod codesim;
pub mod error;
pub mod histsim;
pub mod nizk;
pub mod qecc;
pub mod qlinalg;
pub mod simqma;
pub mod xi;

pub use error::{Error, Result};

/// Tolerance for exact algebraic identities (single-shot double arithmetic).
pub const TOL_ALGEBRA: f64 = 1e-12;
/// Tolerance for positive-semidefiniteness checks.
pub const TOL_PSD: f64 = 1e-10;
/// Tolerance for multi-stage pipelines (thousands of accumulated operations).
pub const TOL_PIPELINE: f64 = 1e-8;

/// Hard cap on dense state vectors (2^24 amplitudes).
pub const MAX_STATE_QUBITS: usize = 24;
/// Hard cap on dense density matrices (2^13 x 2^13 entries).
pub const MAX_DENSITY_QUBITS: usize = 13;
