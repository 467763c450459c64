use std::fmt;

/// One structural problem found while validating a circuit. `level` and
/// `op_index` are 1-based where present, matching the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitIssue {
    pub level: Option<usize>,
    pub op_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for CircuitIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.level, self.op_index) {
            (Some(l), Some(o)) => write!(f, "level {l}, op {o}: {}", self.message),
            (Some(l), None) => write!(f, "level {l}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

fn format_issues(issues: &[CircuitIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("qubit {qubit} out of range 1..={num_qubits}")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("slot {slot} out of range 0..={max_slot}")]
    SlotOutOfRange { slot: usize, max_slot: usize },
    #[error("outcome index {index} out of range 1..={num_outcomes}")]
    OutcomeOutOfRange { index: usize, num_outcomes: usize },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("circuit validation failed:\n{}", format_issues(.0))]
    InvalidCircuit(Vec<CircuitIssue>),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what} digest mismatch: artifact built from {artifact}, input is {input}")]
    DigestMismatch {
        what: &'static str,
        artifact: String,
        input: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("period mismatch: {0}")]
    PeriodMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
