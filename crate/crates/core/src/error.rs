use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("chords share an endpoint: ({0}, {1}) and ({2}, {3})")]
    SharedEndpoint(usize, usize, usize, usize),

    #[error("chords ({0}, {1}) and ({2}, {3}) do not interleave")]
    NotInterleaving(usize, usize, usize, usize),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),

    #[error("invalid medial graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is not an internal crossing")]
    NotACrossing(usize),

    #[error("move not applicable: {0}")]
    InapplicableMove(String),

    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),

    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),

    #[error("element id {0} out of range")]
    UnknownElement(usize),

    #[error("poset is not bounded")]
    Unbounded,

    #[error("edge ({0}, {1}) has no label")]
    UnlabeledEdge(usize, usize),

    #[error("labeling rule failed: {0}")]
    LabelingRule(String),

    #[error("position {i} is not in B of {matching}")]
    NotInB { matching: String, i: usize },

    #[error("unknown check {0:?}")]
    UnknownCheck(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
