use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    #[error("division by zero")]
    DivisionByZero,

    /// A precondition on user-supplied input was violated.
    #[error("{0}")]
    InvalidInput(String),

    #[error("direction {0} is not singular for the given formal data")]
    NotSingular(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("path comes within {distance:.3e} of the singular point {point}, below clearance {clearance:.3e}")]
    ClearanceViolation {
        point: String,
        distance: f64,
        clearance: f64,
    },

    #[error("step count exceeded {0} before reaching the requested tolerance")]
    StepExplosion(usize),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
}

impl Error {
    /// Errors caused by the shape of the input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnboundParameter(_)
                | Error::InvalidInput(_)
                | Error::NotSingular(_)
                | Error::UnknownEntry(_)
                | Error::DivisionByZero
        )
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
