use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{0}")]
    Range(String),

    #[error("relations contain a directed cycle through element {0}")]
    Cycle(usize),

    #[error("map is not a {expected} P-partition")]
    Flavor { expected: &'static str },

    #[error("{what} exceeds the configured cap of {cap}")]
    Explosion { what: &'static str, cap: u64 },

    #[error("poset is not naturally labelled")]
    Label,

    #[error("poset is not a forest with duplications")]
    NotFwd,

    #[error("exact division left a nonzero remainder dividing by {divisor}")]
    Remainder { divisor: String },

    #[error("numerator polynomial did not stabilise at truncation {order}")]
    Instability { order: u32 },

    #[error("invalid argument: {0}")]
    Arg(String),

    #[error("{what} has {size} entries, above the cap of {cap}")]
    Cap {
        what: &'static str,
        size: usize,
        cap: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
