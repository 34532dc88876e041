use thiserror::Error;

/// Errors produced while building, checking or evaluating measurement plans.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: no Pauli terms found")]
    EmptyInput,
    #[error("line {line}: malformed coefficient {text:?}")]
    MalformedCoefficient { line: usize, text: String },
    #[error("line {line}: illegal Pauli letter {letter:?}")]
    IllegalLetter { line: usize, letter: char },
    #[error("line {line}: expected a word of length {expected}, found {found}")]
    InconsistentLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("invalid Pauli word {0:?}")]
    InvalidWord(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("Hamiltonian has no terms")]
    EmptyHamiltonian,
    #[error("word {word} is not in the compatible set of {basis}")]
    NotInCompatibleSet { basis: String, word: String },
    #[error("embedding map is not injective: physical qubit {0} used twice")]
    NotInjective(usize),
    #[error("embedding maps qubit {theoretical} to {physical}, outside a device of {n_physical} qubits")]
    ImageOutOfRange {
        theoretical: usize,
        physical: usize,
        n_physical: usize,
    },
    #[error("embedding has {found} entries but the Hamiltonian has {expected} qubits")]
    EmbeddingSize { expected: usize, found: usize },
    #[error("{needed} theoretical qubits do not fit on {available} physical qubits")]
    InsufficientQubits { needed: usize, available: usize },
    #[error("connectivity graph cannot host {needed} qubits as a connected subgraph")]
    DisconnectedConnectivity { needed: usize },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("invalid group {group}: {reason}")]
    InvalidGroup { group: usize, reason: String },
    #[error("missing histogram for group {0}")]
    MissingHistogram(usize),
    #[error("histogram for group {0} has zero shots")]
    ZeroShots(usize),
    #[error("qubits {0} and {1} are not connected on the device")]
    Unreachable(usize, usize),
    #[error("state has {0} qubits, the simulator supports at most {max}", max = crate::sim::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("plan error: {0}")]
    Plan(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
