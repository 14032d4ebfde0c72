use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("agent sets differ: {0:?} vs {1:?}")]
    AgentMismatch(Vec<String>, Vec<String>),
    #[error("invalid agent set: {0}")]
    InvalidAgents(String),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("frame is not proper: states {0} and {1} are indistinguishable to every agent")]
    NotProper(String, String),
    #[error("valuation is not agent-local: state {state} carries literals of {agent} that differ within its class")]
    NotAgentLocal { state: String, agent: String },
    #[error("inconsistent valuation for pair ({0}, {1})")]
    InconsistentValuation(String, String),
    #[error("atom {atom} has conflicting owners {first} and {second}")]
    OwnerConflict {
        atom: String,
        first: String,
        second: String,
    },
    #[error("atom {0} has no owner agent")]
    MissingOwner(String),
    #[error("map is not total: expected {expected} entries, got {got}")]
    NonTotalMap { expected: usize, got: usize },
    #[error("map sends {from} to {to}, outside a target of size {len}")]
    OutOfRange { from: usize, to: usize, len: usize },
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown action model {0}")]
    UnknownAction(String),
    #[error("product update is empty: no pair satisfies its precondition")]
    EmptyProduct,
    #[error("agent group is empty")]
    EmptyGroup,
    #[error("states {0} and {1} have identical valuations; cannot build state preconditions")]
    IndistinctValuations(String, String),
    #[error("complex has dimension {0}; at most 2 is supported")]
    DimensionTooHigh(usize),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("common knowledge mismatch at state {0}: fixpoint and component evaluation disagree")]
    CommonKnowledgeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
