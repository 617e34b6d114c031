use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has {n} vertices, limit is {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("invalid vertex {0}")]
    InvalidVertex(usize),
    #[error("edge {{{0}, {1}}} is not present")]
    MissingEdge(usize, usize),
    #[error("edge {{{0}, {0}}} is a loop")]
    LoopEdge(usize),
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("topology error: {0}")]
    Topology(String),
    #[error("strand never reaches a graph vertex")]
    DanglingStrand,
    #[error("diagram contains graph vertices")]
    NotALink,
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("vertex {vertex} has degree {degree}, expected 4")]
    WrongDegree { vertex: usize, degree: usize },
    #[error("cycles share a vertex")]
    CyclesShareVertex,
    #[error("components must be distinct")]
    SameComponent,
    #[error("diagram is not connected")]
    Disconnected,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
