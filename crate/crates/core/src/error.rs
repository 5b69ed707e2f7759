use thiserror::Error;

pub type Result<T, E = IdmError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdmError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("agent index {index} out of range for {count} agents")]
    AgentOutOfRange { index: usize, count: usize },
    #[error("duplicate label `{label}` in `{space}`")]
    DuplicateLabel { space: String, label: String },
    #[error("finite space `{0}` has no elements")]
    EmptySpace(String),
    #[error("unknown element `{label}` in space `{space}`")]
    UnknownElement { space: String, label: String },
    #[error("configuration space has {size} configurations, above the cap of {cap}")]
    SpaceTooLarge { size: u128, cap: usize },
    #[error("too many agents ({0}); at most 64 are supported")]
    TooManyAgents(usize),
    #[error("objects live on different configuration spaces or domains")]
    SpaceMismatch,
    #[error("context set is empty")]
    EmptyContext,
    #[error("{what}: {value} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("agent sets overlap: {0}")]
    Overlap(String),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid policy for agent `{agent}`: {reason}")]
    InvalidPolicy { agent: String, reason: String },
    #[error("policy profile is not solvable (ω index {omega} has {multiplicity} solutions)")]
    Unsolvable { omega: usize, multiplicity: u32 },
    #[error("graph contains a self-loop on `{0}`")]
    SelfLoop(String),
    #[error("graph is not acyclic")]
    Cyclic,
    #[error("unknown built-in model `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
