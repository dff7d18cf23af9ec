use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} out of range for {qubits} qubits")]
    BasisIndexOutOfRange { index: u64, qubits: usize },

    #[error("qubit {qubit} out of range for width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("qubit {0} used more than once in a single operation")]
    DuplicateQubit(usize),

    #[error("qubit count mismatch: expected {expected}, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("{qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix dimension {actual} does not match {qubits} target qubits")]
    MatrixShape { actual: usize, qubits: usize },

    #[error("controlled gate requires a single-qubit inner gate")]
    BadControlledInner,

    #[error("malformed bitstring {0:?}")]
    BadBitstring(String),

    #[error("circuit syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid circuit op {index}: {message}")]
    InvalidOp { index: usize, message: String },

    #[error("unknown gate {0:?}")]
    UnknownGate(String),

    #[error("measurement op at {0} is followed by a unitary op")]
    MeasurementNotTrailing(usize),

    #[error("circuit contains measurements; only unitary circuits can be compared")]
    MeasurementPresent,

    #[error("oracle marker at {0} has no hidden string and no oracle was bound")]
    UnboundOracle(usize),

    #[error("rule {rule} does not match at position {position}")]
    NoMatch { rule: String, position: usize },

    #[error("circuit does not contain an oracle marker")]
    OracleAbsent,

    #[error("circuit is not of the expected shape: {0}")]
    UnexpectedShape(String),
}
