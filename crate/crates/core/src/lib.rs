//! Runtime verification with TOPL automata.
//!
//! The crate covers three layers:
//!
//! - the automata themselves: [`ToplAutomaton`] (one `(guard, action)` label per
//!   transition), [`HlAutomaton`] (label sequences plus skip semantics) and
//!   register automata, with membership and emptiness;
//! - translations between the three models and closure constructions
//!   ([`translate`]);
//! - a property language compiled to high-level automata ([`property`]) and an
//!   online monitor that checks recorded event traces ([`monitor`]).

pub mod automaton;
pub mod cli;
pub mod error;
pub mod guard;
pub mod hl;
pub mod json;
pub mod monitor;
pub mod property;
pub mod samples;
pub mod translate;
pub mod value;

pub use automaton::{accepts, step, validate_automaton, Configuration, ToplAutomaton, Transition};
pub use error::{Diagnostic, IndexError, TranslateError};
pub use guard::{apply_action, eval_guard, Action, Assign, Guard, Label, MethodPattern};
pub use hl::{hl_accepts, hl_successors, HlAutomaton, HlConfiguration};
pub use value::{EventKind, Letter, Store, Value, Word};
