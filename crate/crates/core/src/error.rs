use thiserror::Error;

/// Coarse error classes, used by front ends to choose exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Properness,
    Schedule,
    Convergence,
    Precision,
    Input,
}

impl ErrorClass {
    pub fn tag(self) -> &'static str {
        match self {
            ErrorClass::Parse => "parse",
            ErrorClass::Properness => "properness",
            ErrorClass::Schedule => "schedule",
            ErrorClass::Convergence => "convergence",
            ErrorClass::Precision => "precision",
            ErrorClass::Input => "input",
        }
    }
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("denominator vanishes identically: {0}")]
    ZeroDenominator(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("improper intersection with a face: {0} (see check_face_proper)")]
    Improper(String),
    #[error("normalize requires ∂⁰-free input: {0}")]
    NotDeltaZeroFree(String),
    #[error("undecided at maximum precision: {0}")]
    Undecided(String),
    #[error("non-generic phase: {0}")]
    NonGenericPhase(String),
    #[error("non-generic schedule: {0}")]
    NonGenericSchedule(String),
    #[error("schedule underflow: {0}")]
    ScheduleUnderflow(String),
    #[error("no admissible schedule found: {0}")]
    ScheduleSearch(String),
    #[error("not admissible: {0}")]
    Inadmissible(String),
    #[error("value on a branch cut: {0}")]
    OnCut(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("schedule disagreement (probable sign or transversality bug): {0}")]
    Disagreement(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } => ErrorClass::Parse,
            Error::Improper(_) | Error::NotDeltaZeroFree(_) => ErrorClass::Properness,
            Error::NonGenericPhase(_)
            | Error::NonGenericSchedule(_)
            | Error::ScheduleUnderflow(_)
            | Error::ScheduleSearch(_)
            | Error::Inadmissible(_)
            | Error::OnCut(_) => ErrorClass::Schedule,
            Error::NonConvergence(_) | Error::Disagreement(_) => ErrorClass::Convergence,
            Error::Precision(_) | Error::Undecided(_) => ErrorClass::Precision,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
