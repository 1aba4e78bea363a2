use thiserror::Error;

/// Errors surfaced by the engine. Verification failures are not errors:
/// they are reported as residual certificates by the checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable {var} is not differentiable along the {derivation}-derivation")]
    IncompatibleDerivation { var: String, derivation: char },
    #[error("variable {0} has no assigned value")]
    Unassigned(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("jet order {requested} exceeds the configured maximum {max}")]
    JetOrderLimit { requested: u32, max: u32 },
    #[error("field prolonged to order {have} but order {need} is required")]
    InsufficientProlongation { need: u32, have: u32 },
    #[error("multiplier -(X S0)/(sigma S0) is not a polynomial")]
    NonPolynomialMultiplier,
    #[error("operation requires a relative invariant with polynomial expression, got {0}")]
    NotRelative(String),
    #[error("equation order {0} is outside the supported range")]
    UnsupportedOrder(u32),
    #[error("no admissible sample point found (all samples hit singularities)")]
    SamplingFailed,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("unknown invariant name: {0}")]
    UnknownName(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
