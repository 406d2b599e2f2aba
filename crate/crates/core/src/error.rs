use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("edge {label} appears {count} times (expected exactly 2)")]
    LabelCount { label: u32, count: usize },

    #[error("edge label {label} out of range 1..={max}")]
    LabelRange { label: u32, max: u32 },

    #[error("invalid Gauss code: {0}")]
    Gauss(String),

    #[error("orientation: {0}")]
    Orientation(String),

    #[error("diagram has {crossings} crossings, limit is {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },

    #[error("invalid ring: {0}")]
    Ring(String),

    #[error("invalid Frobenius parameters: {0}")]
    Params(String),

    #[error("invalid request: {0}")]
    Request(String),

    #[error("polynomial {0} is not divisible by q + q^-1")]
    NotDivisible(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    /// True for failures of internal consistency checks, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
