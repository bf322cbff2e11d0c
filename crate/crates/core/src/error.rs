use thiserror::Error;

use crate::logic::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size bound (atom count, world count, search bound) was exceeded.
    #[error("size bound exceeded: {what} is {got}, limit {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// A value lies outside the carrier it is supposed to live in.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// `up(b) ∩ D` has no least member, so `D` is not the closed set of any closure operator.
    #[error("no closure operator: the closed elements above {element} have no least member")]
    NoClosure { element: String },

    #[error("quotient by the top element would be the trivial algebra")]
    Trivial,

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("variable `{0}` is not assigned")]
    Binding(String),

    /// Brute-force search would visit more candidates than the configured budget.
    #[error("evaluation budget exceeded: 2^{log2_required} candidates, budget {budget}")]
    Budget { log2_required: u32, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn size(what: &'static str, got: usize, limit: usize) -> Self {
        Error::Size { what, got, limit }
    }
}
