use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the operation's domain (for example encoding zero).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    /// An operator without enough operands, or operands left over, in a
    /// prefix or postfix token stream.
    #[error("arity error at token {position}: {message}")]
    Arity { position: usize, message: String },

    /// A configured size, bit or entry budget would be exceeded.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A value adjoined as a prime turned out to be composite, or a generated
    /// set disagrees with an independent check.
    #[error("soundness failure: {0}")]
    Soundness(String),

    /// A windowed recursion step failed to cover its whole value range.
    #[error("completeness failure: {0}")]
    Completeness(String),
}
