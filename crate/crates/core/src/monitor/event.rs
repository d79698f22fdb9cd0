use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::MonitorError;
use crate::property::EventSchema;
use crate::value::{EventKind, Letter, Value};

/// An observed call or return. Call values are the receiver (if any)
/// followed by the arguments; a return carries one value, `Bottom` if void.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    pub method: String,
    pub values: Vec<Value>,
}

impl Event {
    pub fn call<S: AsRef<str>>(method: &str, values: &[S]) -> Self {
        Event {
            kind: EventKind::Call,
            method: method.into(),
            values: values.iter().map(Value::atom).collect(),
        }
    }

    pub fn ret(method: &str, value: Option<&str>) -> Self {
        Event {
            kind: EventKind::Ret,
            method: method.into(),
            values: vec![value.map_or(Value::Bottom, Value::atom)],
        }
    }
}

/// Encodes an event as a letter of width `n + 2`:
/// `(kind method, return value, v1, …, vk, ⊥, …)`. Call values beyond the
/// first `n` are dropped: no guard of the property can see them.
pub fn encode_event(e: &Event, schema: &EventSchema) -> Result<Letter, MonitorError> {
    let n = schema.arity;
    let mut out = Vec::with_capacity(n + 2);
    out.push(Value::event(e.kind, &e.method));
    match e.kind {
        EventKind::Call => {
            out.push(Value::Bottom);
            out.extend(e.values.iter().take(n).cloned());
        }
        EventKind::Ret => {
            if e.values.len() > 1 {
                return Err(MonitorError::Arity {
                    method: e.method.clone(),
                    found: e.values.len(),
                    max: 1,
                });
            }
            out.push(e.values.first().cloned().unwrap_or(Value::Bottom));
        }
    }
    out.resize(n + 2, Value::Bottom);
    Ok(Letter::new(out))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    kind: EventKind,
    method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<Option<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<Option<String>>,
}

fn text(v: &Value) -> Option<String> {
    match v {
        Value::Atom(s) => Some(s.to_string()),
        _ => None,
    }
}

impl Event {
    /// One line of the trace format.
    pub fn to_json(&self) -> String {
        let raw = match self.kind {
            EventKind::Call => RawEvent {
                kind: self.kind,
                method: self.method.clone(),
                values: Some(self.values.iter().map(text).collect()),
                value: None,
            },
            EventKind::Ret => RawEvent {
                kind: self.kind,
                method: self.method.clone(),
                values: None,
                value: Some(self.values.first().and_then(text)),
            },
        };
        serde_json::to_string(&raw).expect("events serialize")
    }

    /// Parses one trace line; `null` values become `Bottom`.
    pub fn from_json(line: &str) -> Result<Event, String> {
        let raw: RawEvent = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let atom = |v: Option<String>| v.map_or(Value::Bottom, Value::atom);
        let values = match raw.kind {
            EventKind::Call => {
                if raw.value.is_some() {
                    return Err("call events carry `values`, not `value`".into());
                }
                raw.values.unwrap_or_default().into_iter().map(atom).collect()
            }
            EventKind::Ret => {
                if raw.values.is_some() {
                    return Err("return events carry `value`, not `values`".into());
                }
                vec![atom(raw.value.flatten())]
            }
        };
        Ok(Event {
            kind: raw.kind,
            method: raw.method,
            values,
        })
    }
}

/// A trace line that could not be parsed and was skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceWarning {
    pub line: usize,
    pub message: String,
}

/// Reads a JSON Lines trace, skipping blank lines. In strict mode the first
/// malformed line is an error; otherwise it is skipped with a warning.
pub struct TraceReader<R> {
    input: R,
    line: usize,
    strict: bool,
    pub warnings: Vec<TraceWarning>,
}

impl<R: BufRead> TraceReader<R> {
    pub fn new(input: R, strict: bool) -> Self {
        TraceReader {
            input,
            line: 0,
            strict,
            warnings: Vec::new(),
        }
    }
}

impl<R: BufRead> Iterator for TraceReader<R> {
    type Item = Result<Event, MonitorError>;

    fn next(&mut self) -> Option<Self::Item> {
        let mut buf = String::new();
        loop {
            buf.clear();
            self.line += 1;
            match self.input.read_line(&mut buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(MonitorError::Io(e.to_string()))),
            }
            let text = buf.trim();
            if text.is_empty() {
                continue;
            }
            match Event::from_json(text) {
                Ok(e) => return Some(Ok(e)),
                Err(message) if self.strict => {
                    return Some(Err(MonitorError::Trace {
                        line: self.line,
                        message,
                    }))
                }
                Err(message) => self.warnings.push(TraceWarning {
                    line: self.line,
                    message,
                }),
            }
        }
    }
}

/// Parses a whole trace held in memory.
pub fn parse_trace(text: &str, strict: bool) -> Result<(Vec<Event>, Vec<TraceWarning>), MonitorError> {
    let mut reader = TraceReader::new(text.as_bytes(), strict);
    let events = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok((events, reader.warnings))
}
