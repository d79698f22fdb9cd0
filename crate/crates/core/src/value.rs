//! Values, letters and stores.
//!
//! Values are opaque: the only operation the automata ever apply to them is
//! equality. Letters and stores are fixed-length value sequences indexed from 1.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

/// Whether an observed event is a method call or a method return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Call,
    Ret,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventKind::Call => f.write_str("call"),
            EventKind::Ret => f.write_str("ret"),
        }
    }
}

/// An element of the infinite value universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    /// An ordinary data value, identified by its text.
    Atom(Arc<str>),
    /// The distinguished dummy value used for padding and void returns.
    Bottom,
    /// An event identifier, `call m` or `ret m`.
    EventId { kind: EventKind, method: Arc<str> },
}

impl Value {
    pub fn atom(s: impl AsRef<str>) -> Self {
        Value::Atom(Arc::from(s.as_ref()))
    }

    pub fn event(kind: EventKind, method: impl AsRef<str>) -> Self {
        Value::EventId {
            kind,
            method: Arc::from(method.as_ref()),
        }
    }

    pub fn is_event_id(&self) -> bool {
        matches!(self, Value::EventId { .. })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(s) => f.write_str(s),
            Value::Bottom => f.write_str("⊥"),
            Value::EventId { kind, method } => write!(f, "{kind} {method}"),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::atom(s)
    }
}

// {"atom":s} | {"bottom":true} | {"event":{"kind":"call","method":s}}
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            Value::Atom(s) => map.serialize_entry("atom", &**s)?,
            Value::Bottom => map.serialize_entry("bottom", &true)?,
            Value::EventId { kind, method } => {
                #[derive(Serialize)]
                struct Ev<'a> {
                    kind: EventKind,
                    method: &'a str,
                }
                map.serialize_entry("event", &Ev { kind: *kind, method })?
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Ev {
            kind: EventKind,
            method: String,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            atom: Option<String>,
            bottom: Option<bool>,
            event: Option<Ev>,
        }
        let raw = Raw::deserialize(deserializer)?;
        match (raw.atom, raw.bottom, raw.event) {
            (Some(a), None, None) => Ok(Value::atom(a)),
            (None, Some(true), None) => Ok(Value::Bottom),
            (None, None, Some(ev)) => Ok(Value::event(ev.kind, ev.method)),
            _ => Err(de::Error::custom(
                "a value is exactly one of {\"atom\":s}, {\"bottom\":true} or {\"event\":{..}}",
            )),
        }
    }
}

/// A letter `(v1, ..., vn)` of the alphabet `V^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub Vec<Value>);

impl Letter {
    pub fn new(values: Vec<Value>) -> Self {
        Letter(values)
    }

    /// Builds a letter of atoms.
    pub fn atoms<S: AsRef<str>>(values: &[S]) -> Self {
        Letter(values.iter().map(Value::atom).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Component `j`, 1-based.
    pub fn get(&self, j: usize) -> &Value {
        &self.0[j - 1]
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A register store `(u1, ..., um)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Store(pub Vec<Value>);

impl Store {
    pub fn new(values: Vec<Value>) -> Self {
        Store(values)
    }

    pub fn atoms<S: AsRef<str>>(values: &[S]) -> Self {
        Store(values.iter().map(Value::atom).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Register `i`, 1-based.
    pub fn get(&self, i: usize) -> &Value {
        &self.0[i - 1]
    }

    pub fn set(&mut self, i: usize, v: Value) {
        self.0[i - 1] = v;
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }
}

/// A word is a finite sequence of letters.
pub type Word = Vec<Letter>;

/// Builds a word over `V` (arity one) from atom names.
pub fn unary_word<S: AsRef<str>>(atoms: &[S]) -> Word {
    atoms.iter().map(|a| Letter(vec![Value::atom(a)])).collect()
}
