use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by simulator and benchmark operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit counts differ: {0} vs {1}")]
    QubitCountMismatch(usize, usize),
    #[error("qubit count {0} outside supported range 1..={max}", max = crate::MAX_QUBITS)]
    UnsupportedQubitCount(usize),
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("duplicate qubit {0} in target list")]
    DuplicateQubit(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("implementation fidelity {0} outside [0.25, 1]")]
    InvalidImplementationFidelity(f64),
    #[error("polarization {0} outside [-1, 1]")]
    InvalidPolarization(f64),
    #[error("channel term probabilities sum to {0}, expected 1")]
    ChannelNotNormalized(f64),
    #[error("Kraus completeness violated (deviation {0:.3e})")]
    IncompleteKraus(f64),
    #[error("partial trace must keep at least one qubit")]
    EmptyKeep,
    #[error("keep list must be strictly ascending")]
    KeepNotAscending,
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("encoder synthesis failed at generator {generator}: {reason}")]
    Synthesis { generator: usize, reason: String },
    #[error("engine disagreement for error {error} axis {axis}: dense {dense} vs pauli {pauli}")]
    EngineMismatch {
        error: String,
        axis: String,
        dense: f64,
        pauli: f64,
    },
    #[error("bin width {0} must be positive")]
    InvalidBinWidth(f64),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("numerical invariant violated: {0}")]
    Numeric(String),
    #[error("invalid benchmark report: {0}")]
    InvalidReport(String),
}
