use thiserror::Error;

/// An index in a guard or action that falls outside the store or letter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("register index {index} out of range (registers: {registers})")]
    Register { index: usize, registers: usize },
    #[error("letter component {index} out of range (arity: {arity})")]
    Component { index: usize, arity: usize },
}

/// One violated structural invariant of an automaton.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("initial state unknown: {0}")]
    UnknownInitial(String),
    #[error("final state unknown: {0}")]
    UnknownFinal(String),
    #[error("duplicate state: {0}")]
    DuplicateState(String),
    #[error("transition {transition}: endpoint {state} unknown")]
    UnknownEndpoint { transition: usize, state: String },
    #[error("initial store has length {found}, expected {expected}")]
    StoreLength { found: usize, expected: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("transition {transition}: {error}")]
    Index {
        transition: usize,
        error: IndexError,
    },
    #[error("transition {transition}: empty label sequence")]
    EmptyLabel { transition: usize },
}

impl Diagnostic {
    /// Short classification used in messages: "register index out of range", ...
    pub fn kind(&self) -> &'static str {
        match self {
            Diagnostic::UnknownInitial(_) => "initial state unknown",
            Diagnostic::UnknownFinal(_) => "final state unknown",
            Diagnostic::DuplicateState(_) => "duplicate state",
            Diagnostic::UnknownEndpoint { .. } => "transition endpoint unknown",
            Diagnostic::StoreLength { .. } => "wrong store length",
            Diagnostic::ZeroArity => "zero arity",
            Diagnostic::Index {
                error: IndexError::Register { .. },
                ..
            } => "register index out of range",
            Diagnostic::Index {
                error: IndexError::Component { .. },
                ..
            } => "letter index out of range",
            Diagnostic::EmptyLabel { .. } => "empty label",
        }
    }
}

/// Errors from the translations and decision procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("invalid automaton: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("transition {transition}: method-pattern guards have no register-automaton counterpart")]
    MethodGuard { transition: usize },
    #[error("transition {transition} is not a register-automaton label ({reason}); translate with topl_to_ra first")]
    NotRegisterAutomaton { transition: usize, reason: String },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("construction exceeded the limit of {limit} states")]
    TooLarge { limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn join(ds: &[Diagnostic]) -> String {
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
