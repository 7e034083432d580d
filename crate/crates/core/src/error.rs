use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate qubit target {0}")]
    DuplicateTarget(usize),

    #[error("empty qubit subset is not allowed here")]
    EmptySubset,

    #[error("dense representation limit exceeded: {requested} qubits > {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("gate {0} is not Clifford")]
    NonClifford(String),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("simulation subset bound violated: {0}")]
    SimBound(String),

    #[error("schedule step {0} out of range")]
    StepOutOfRange(usize),

    #[error("missing marginal for support {0:?}")]
    MissingSupport(Vec<usize>),

    #[error("malformed commitment opening")]
    MalformedOpening,

    #[error("unsupported gate in this context: {0}")]
    UnsupportedGate(String),

    #[error("{0}")]
    Invalid(String),
}
