use thiserror::Error;

/// Crate-wide error type.
///
/// Guard errors signal a refused computation (the input would exceed a
/// feasibility bound); they are never silent truncations. Verification
/// errors signal that an exact identity the construction promises did not
/// hold, which means a bug or an inconsistent input.
#[derive(Debug, Error)]
pub enum HmlError {
    #[error("feasibility guard: {what} needs {needed} raw elements, bound is {bound} (set HMLLAB_GUARD_OVERRIDE to raise)")]
    Guard {
        what: String,
        needed: u128,
        bound: u128,
    },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("window too small: cannot lift through i at degree {degree}")]
    Boundary { degree: i64 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HmlError>;
