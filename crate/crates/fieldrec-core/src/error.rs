use alloc::string::String;
use core::fmt;

/// Stage of the reconstruction pipeline that produced a failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    ResolvePower,
    PhiOnElement,
    PhiOnConstants,
    Assemble,
    Additivity,
    Multiplicativity,
    DegenerateGuard,
    DescendSign,
    Uniqueness,
    Verification,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::ResolvePower => "resolve_power",
            Stage::PhiOnElement => "phi_on_element",
            Stage::PhiOnConstants => "phi_on_constants",
            Stage::Assemble => "assemble",
            Stage::Additivity => "additivity",
            Stage::Multiplicativity => "multiplicativity",
            Stage::DegenerateGuard => "degenerate_guard",
            Stage::DescendSign => "descend_sign",
            Stage::Uniqueness => "uniqueness",
            Stage::Verification => "verification",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient `{0}` is not in the constant field")]
    CoefficientNotInField(String),
    #[error("exponent {0} exceeds the parser limit")]
    ExponentTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different function fields")]
    DescriptorMismatch,
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("zero input")]
    ZeroInput,
    #[error("constant input")]
    ConstantInput,
    #[error("empty input list")]
    EmptyInput,
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("d(x) vanishes")]
    ZeroDifferential,
    #[error("no f' with d(f) = f'·d(x): the elements are not dependent")]
    NotDependent,
    #[error("unsupported symbol degree {0}")]
    UnsupportedDegree(usize),
    #[error("constant field fits neither type: {0}")]
    NeitherType(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {0} attempts exhausted")]
    BudgetExhausted(usize),
    #[error("m = {0} is outside the admissible power range")]
    InvalidPower(i64),
    #[error("{stage}: {message}")]
    Reconstruction { stage: Stage, message: String, class: Option<String> },
}

impl Error {
    pub(crate) fn stage(stage: Stage, message: impl Into<String>) -> Self {
        Error::Reconstruction { stage, message: message.into(), class: None }
    }
    pub(crate) fn stage_at(stage: Stage, message: impl Into<String>, class: impl Into<String>) -> Self {
        Error::Reconstruction { stage, message: message.into(), class: Some(class.into()) }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
