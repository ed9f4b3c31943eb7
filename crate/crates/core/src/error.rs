use thiserror::Error;

/// Errors raised while loading, parsing or generating instances.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapfError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("free region of the map is disconnected")]
    DisconnectedMap,
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex label {0}")]
    DuplicateLabel(String),
    #[error("malformed map header: {0}")]
    MalformedHeader(String),
    #[error("map dimensions do not match header: {0}")]
    DimensionMismatch(String),
    #[error("bad scenario entry on line {line}: {reason}")]
    BadEntry { line: usize, reason: String },
    #[error("duplicate {kind} vertex {label}")]
    DuplicateEndpoint { kind: &'static str, label: String },
    #[error("malformed fixture line {line}: {reason}")]
    MalformedFixture { line: usize, reason: String },
    #[error("malformed solution line {line}: {reason}")]
    MalformedSolution { line: usize, reason: String },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error("instance has {agents} agents, enumeration limited to {limit}")]
    RefusedTooLarge { agents: usize, limit: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

/// Adding the pair would make the priority ordering cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("adding {lo} before {hi} creates a cycle")]
pub struct CycleError {
    pub lo: usize,
    pub hi: usize,
}
