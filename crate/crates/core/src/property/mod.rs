//! The textual property language: parsing, well-formedness and compilation
//! to high-level automata.
//!
//! A property describes the *violating* traces: the compiled automaton
//! accepts exactly when its `error` vertex is reached. Uppercase patterns
//! bind a variable, lowercase ones read it, `!v` requires a different
//! value, quoted strings are literals and `*` matches anything. Call values
//! occupy letter components 3 onwards with the receiver first; component 2
//! holds return values and component 1 the event id.

mod ast;
mod check;
mod compile;
mod parser;

pub use ast::{ArgsPattern, MethodRef, Pattern, PropLabel, PropTransition, PropertyAst};
pub use check::{check_well_formed, PropDiagnostic, ERROR, START};
pub use compile::{compile_property, compile_source, CompiledProperty, ConstantRegister, EventSchema};
pub use parser::{parse_label, parse_property};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("property is not well-formed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<PropDiagnostic>),
    #[error("line {line}: method `{method}` used with {second} values, but with {first} on line {first_line}")]
    ArityConflict {
        method: String,
        first: usize,
        first_line: usize,
        second: usize,
        line: usize,
    },
    #[error("internal error: {0}")]
    Internal(String),
}
