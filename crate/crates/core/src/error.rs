use num_bigint::BigUint;
use thiserror::Error;

use crate::pipeline::ReconstructionResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed number: {0:?}")]
    MalformedNumber(String),
    #[error("{0:?} has no finite base-2 expansion")]
    NonDyadicFraction(String),
    #[error("negative operand {0:?} not allowed")]
    NegativeUnsupported(String),
    #[error("unsupported scale base {0:?} (expected 2 or 10)")]
    UnsupportedBase(String),
    #[error("zero operand has no exponent encoding")]
    ZeroOperand,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("squared amplitudes sum to {0}, expected 1")]
    NormViolation(f64),
    #[error("basis pattern {0:#b} listed twice")]
    DuplicatePattern(u64),
    #[error("pattern {pattern:#b} does not fit in {width} qubits")]
    WidthOverflow { pattern: u64, width: usize },
    #[error("qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("gate control {0} is also a target")]
    ControlIsTarget(usize),
    #[error("{requested} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid register widths k_b={k_b}, k_a={k_a} (need 1 <= k_b <= k_a)")]
    InvalidWidth { k_b: usize, k_a: usize },
    #[error("circuit dump line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("empty measurement histogram")]
    EmptyHistogram,
    #[error("reconstructed {got} but the classical product is {expected}")]
    ReconstructionMismatch {
        expected: BigUint,
        got: BigUint,
        result: Box<ReconstructionResult>,
    },
}
