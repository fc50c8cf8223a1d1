use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied something outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// Division by zero and friends.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// A mathematical guarantee did not hold; always a bug or a broken precondition upstream.
    #[error("internal error: {0}")]
    Internal(String),

    /// No τ-compatible bijection maps curve fingerprints onto order fingerprints.
    #[error("correspondence violated: {0}")]
    CorrespondenceViolated(String),

    /// More than one bijection fits; the chosen ℓ-set does not separate the orders.
    #[error("Λ insufficient: {matchings} admissible bijections")]
    LambdaInsufficient { matchings: usize },

    #[error("step {step} ({name}): {source}")]
    Step {
        step: u8,
        name: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// The innermost error under any step tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            e => e,
        }
    }

    pub(crate) fn at_step(self, step: u8, name: &'static str) -> Self {
        Error::Step {
            step,
            name,
            source: Box::new(self),
        }
    }
}
