use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand must be a positive integer, got {0}")]
    InvalidRadicand(String),
    #[error("radicand {0} is too large to factor")]
    RadicandTooLarge(String),
    #[error("operands live in different fields: sqrt({0}) and sqrt({1})")]
    MixedRadicand(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expected a positive number, got {0}")]
    NonPositive(String),
    #[error("value is rational where an irrational number is required")]
    NotIrrational,
    #[error("sequence side is finite; no periodic tail")]
    NonPeriodicTail,
    #[error("index {0} lies outside the finite sequence")]
    IndexOutOfRange(i64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("not a normal form: {0}")]
    NotNormalForm(String),
    #[error("torus walk terminated at box {0}")]
    TerminatedWalk(i64),
    #[error("basis vectors are linearly dependent")]
    SingularBasis,
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("search window too small: {0}")]
    WindowTooSmall(String),
    #[error("work cap exceeded: {0}")]
    CapExceeded(String),
    #[error("interval refinement hit the 4096-bit cap without separating the operands")]
    RefinementCap,
    #[error("{0} is not a quadratic integer")]
    NotQuadraticInteger(String),
    #[error("{0} is not purely periodic")]
    NotPurelyPeriodic(String),
    #[error("coefficient does not fit in 64 bits")]
    CoefficientOverflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
