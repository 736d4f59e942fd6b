use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("matrix has no unit diagonal entry")]
    NoUnitDiagonal,

    #[error("GF(2) Cholesky factorization failed: {0}")]
    DecompositionFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("qubit count {m} outside supported range 1..={max}")]
    BadQubitCount { m: usize, max: usize },

    #[error("invalid Pauli character {found:?} at position {position}")]
    BadCharacter { found: char, position: usize },

    #[error("Pauli string has length {found}, expected {expected}")]
    BadLength { found: usize, expected: usize },

    #[error("family id {id} out of range 0..={max}")]
    BadFamilyId { id: usize, max: usize },

    #[error("conjugated member {pauli} carries a non-real phase (exponent {exponent})")]
    PhaseNotReal { pauli: String, exponent: u8 },

    #[error("term {pauli} does not belong to family {family}")]
    TermNotInFamily { pauli: String, family: usize },

    #[error("duplicate Pauli term {0}")]
    DuplicateTerm(String),

    #[error("simulation of {m} qubits exceeds the cap of {max}")]
    TooManyQubits { m: usize, max: usize },

    #[error("unknown gate {0:?}")]
    UnknownGate(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix of dimension {dim} is too large for Pauli decomposition (max {max} qubits)")]
    TooLarge { dim: usize, max: usize },

    #[error("ansatz expects {expected} angles, got {found}")]
    AngleCountMismatch { expected: usize, found: usize },

    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("adjacency matrix needs {required} bytes, above the guard of {cap} bytes")]
    MemoryGuard { required: u64, cap: u64 },

    #[error("method {method} is limited to m <= {max} (requested m = {m})")]
    MethodCap { method: String, m: usize, max: usize },

    #[error("unknown grouping method {0:?}")]
    UnknownMethod(String),

    #[error("method {0} does not provide measurement circuits")]
    NoMeasurementCircuits(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
