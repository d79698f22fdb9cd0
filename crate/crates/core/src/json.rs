//! The JSON automaton file format.
//!
//! ```json
//! {"kind": "topl", "arity": 1, "registers": 2,
//!  "states": ["1", "2"], "initial": "1",
//!  "store": [{"bottom": true}, {"atom": "a"}], "final": ["2"],
//!  "transitions": [{"from": "1", "guard": {"neq": [1, 1]},
//!                   "action": [{"register": 2, "component": 1}], "to": "2"}]}
//! ```
//!
//! High-level automata use `"kind": "hl"` and carry a `"labels"` list of
//! `{"guard", "action"}` objects per transition instead. A missing `guard`
//! means `"true"`, a missing `action` means `nop`; state ids may be given as
//! numbers. Compiled properties add `"name"` and an `"events"` section
//! describing the letter layout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{AnyAutomaton, Automaton, ToplAutomaton, Transition};
use crate::error::{join, Diagnostic};
use crate::guard::{Action, Guard, Label};
use crate::hl::HlAutomaton;
use crate::property::{CompiledProperty, EventSchema};
use crate::value::{Letter, Store, Value, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(String),
    #[error("invalid automaton: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StateName {
    Text(String),
    Number(i64),
}

impl From<StateName> for String {
    fn from(s: StateName) -> String {
        match s {
            StateName::Text(s) => s,
            StateName::Number(n) => n.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    from: StateName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    guard: Option<Guard>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Action>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<RawLabel>>,
    to: StateName,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLabel {
    #[serde(default = "true_guard")]
    guard: Guard,
    #[serde(default)]
    action: Action,
}

fn true_guard() -> Guard {
    Guard::True
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomaton {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    arity: usize,
    registers: usize,
    states: Vec<StateName>,
    initial: StateName,
    store: Vec<Value>,
    #[serde(rename = "final")]
    finals: Vec<StateName>,
    transitions: Vec<RawTransition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    events: Option<EventSchema>,
}

/// The contents of an automaton file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonFile {
    pub automaton: AnyAutomaton,
    pub name: Option<String>,
    /// Present for compiled properties.
    pub schema: Option<EventSchema>,
}

/// Parses and validates an automaton file.
pub fn parse_automaton(text: &str) -> Result<AutomatonFile, JsonError> {
    let raw: RawAutomaton =
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    let hl = match raw.kind.as_deref() {
        Some("hl") => true,
        Some("topl") | Some("ra") => false,
        Some(other) => {
            return Err(JsonError::Shape(format!(
                "unknown kind `{other}` (expected topl, ra or hl)"
            )))
        }
        None => raw.transitions.iter().any(|t| t.labels.is_some()),
    };
    let states: Vec<String> = raw.states.into_iter().map(String::from).collect();
    let initial = String::from(raw.initial);
    let finals: Vec<String> = raw.finals.into_iter().map(String::from).collect();
    let store = Store::new(raw.store);
    let automaton = if hl {
        let transitions = raw
            .transitions
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                if t.guard.is_some() || t.action.is_some() {
                    return Err(JsonError::Shape(format!(
                        "transition {k}: high-level transitions use `labels`"
                    )));
                }
                let labels = t.labels.ok_or_else(|| {
                    JsonError::Shape(format!("transition {k}: missing `labels`"))
                })?;
                Ok(Transition {
                    from: t.from.into(),
                    label: labels
                        .into_iter()
                        .map(|l| Label::new(l.guard, l.action))
                        .collect(),
                    to: t.to.into(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        AnyAutomaton::Hl(Automaton {
            arity: raw.arity,
            registers: raw.registers,
            states,
            initial,
            store,
            finals,
            transitions,
        })
    } else {
        let transitions = raw
            .transitions
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                if t.labels.is_some() {
                    return Err(JsonError::Shape(format!(
                        "transition {k}: `labels` requires \"kind\": \"hl\""
                    )));
                }
                Ok(Transition {
                    from: t.from.into(),
                    label: Label::new(t.guard.unwrap_or(Guard::True), t.action.unwrap_or_default()),
                    to: t.to.into(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        AnyAutomaton::Topl(Automaton {
            arity: raw.arity,
            registers: raw.registers,
            states,
            initial,
            store,
            finals,
            transitions,
        })
    };
    automaton.validate().map_err(JsonError::Invalid)?;
    if let (Some(schema), AnyAutomaton::Hl(a)) = (&raw.events, &automaton) {
        if schema.width() != a.arity {
            return Err(JsonError::Shape(format!(
                "events section describes letters of width {}, automaton arity is {}",
                schema.width(),
                a.arity
            )));
        }
    }
    Ok(AutomatonFile {
        automaton,
        name: raw.name,
        schema: raw.events,
    })
}

fn raw<L>(
    a: &Automaton<L>,
    kind: &str,
    transition: impl Fn(&Transition<L>) -> RawTransition,
) -> RawAutomaton {
    RawAutomaton {
        kind: Some(kind.into()),
        name: None,
        arity: a.arity,
        registers: a.registers,
        states: a.states.iter().cloned().map(StateName::Text).collect(),
        initial: StateName::Text(a.initial.clone()),
        store: a.store.values().to_vec(),
        finals: a.finals.iter().cloned().map(StateName::Text).collect(),
        transitions: a.transitions.iter().map(transition).collect(),
        events: None,
    }
}

fn topl_raw(a: &ToplAutomaton, kind: &str) -> RawAutomaton {
    raw(a, kind, |t| RawTransition {
        from: StateName::Text(t.from.clone()),
        guard: Some(t.label.guard.clone()),
        action: Some(t.label.action.clone()),
        labels: None,
        to: StateName::Text(t.to.clone()),
    })
}

fn hl_raw(a: &HlAutomaton) -> RawAutomaton {
    raw(a, "hl", |t| RawTransition {
        from: StateName::Text(t.from.clone()),
        guard: None,
        action: None,
        labels: Some(
            t.label
                .iter()
                .map(|l| RawLabel {
                    guard: l.guard.clone(),
                    action: l.action.clone(),
                })
                .collect(),
        ),
        to: StateName::Text(t.to.clone()),
    })
}

fn pretty(r: &RawAutomaton) -> String {
    serde_json::to_string_pretty(r).expect("automata serialize") + "\n"
}

pub fn topl_to_json(a: &ToplAutomaton) -> String {
    pretty(&topl_raw(a, "topl"))
}

/// Like [`topl_to_json`], tagged as a register automaton.
pub fn ra_to_json(a: &ToplAutomaton) -> String {
    pretty(&topl_raw(a, "ra"))
}

pub fn hl_to_json(a: &HlAutomaton) -> String {
    pretty(&hl_raw(a))
}

pub fn automaton_to_json(a: &AnyAutomaton) -> String {
    match a {
        AnyAutomaton::Topl(a) => topl_to_json(a),
        AnyAutomaton::Hl(a) => hl_to_json(a),
    }
}

/// A compiled property: its automaton plus name and event layout.
pub fn compiled_to_json(c: &CompiledProperty) -> String {
    let mut r = hl_raw(&c.automaton);
    r.name = Some(c.name.clone());
    r.events = Some(c.schema.clone());
    pretty(&r)
}

/// Parses a word given as a JSON array of letters, each an array of
/// strings, with `null` for `Bottom`.
pub fn parse_word(text: &str) -> Result<Word, JsonError> {
    let raw: Vec<Vec<Option<String>>> =
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    Ok(raw
        .into_iter()
        .map(|l| {
            Letter::new(
                l.into_iter()
                    .map(|v| v.map_or(Value::Bottom, Value::atom))
                    .collect(),
            )
        })
        .collect())
}

/// The inverse of [`parse_word`]; event ids are written as `"call m"`.
pub fn word_to_json(w: &[Letter]) -> String {
    let raw: Vec<Vec<Option<String>>> = w
        .iter()
        .map(|l| {
            l.values()
                .iter()
                .map(|v| match v {
                    Value::Atom(s) => Some(s.to_string()),
                    Value::Bottom => None,
                    Value::EventId { kind, method } => Some(format!("{kind} {method}")),
                })
                .collect()
        })
        .collect();
    serde_json::to_string(&raw).expect("words serialize")
}
