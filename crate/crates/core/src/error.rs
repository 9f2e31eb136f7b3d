use thiserror::Error;

/// Errors raised across circuit construction, synthesis and simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wire {index}: dim {dim} unsupported (only 2 or 3)")]
    InvalidDimension { index: usize, dim: usize },

    #[error("empty register")]
    EmptyRegister,

    #[error("wire {wire} out of range for a {len}-wire register")]
    WireOutOfRange { wire: usize, len: usize },

    #[error("{gate} expects {expected} wire(s), got {got}")]
    Arity {
        gate: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("{gate} uses wire {wire} more than once")]
    DuplicateWire { gate: &'static str, wire: usize },

    #[error("{gate} requires wire {wire} to have dim 3, found dim {dim}")]
    NeedsQutrit {
        gate: &'static str,
        wire: usize,
        dim: usize,
    },

    #[error("{gate} is a reference primitive and cannot be appended to a synthesized circuit")]
    ReferenceInSynthesized { gate: &'static str },

    #[error("non-finite parameter for {gate}")]
    NonFiniteParameter { gate: &'static str },

    #[error("register mismatch: {0}")]
    RegisterMismatch(String),

    #[error("invalid basis input: {0}")]
    InvalidInput(String),

    #[error("state space of {size} amplitudes exceeds the limit of {limit}")]
    SizeGuard { size: usize, limit: usize },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("synthesis error: {0}")]
    Synthesis(String),

    #[error("noise model undefined: {0}")]
    NoiseModel(String),

    #[error("b must be odd (b0 = 1 is required), got b = {0}")]
    EvenConstant(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
