use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("element {element} outside [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("bad scenario: {0}")]
    BadScenario(String),

    /// A member set is empty, so no transversal exists.
    #[error("set {index} is empty")]
    EmptyMemberSet { index: usize },

    #[error("hyperedge {index} is empty")]
    EmptyEdge { index: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("construction failed after {restarts} restart(s){}", if *.exhausted { " (search space exhausted: infeasible)" } else { "" })]
    ConstructionFailed { restarts: usize, exhausted: bool },

    #[error("search failed; best family size found was {best_found}")]
    SearchFailed { best_found: usize },

    #[error("no two disjoint NO-answered queries of size >= {needed}; n is too small for this strategy")]
    InsufficientNoPool { needed: usize },

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error("incomplete transcript: {0}")]
    IncompleteTranscript(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
