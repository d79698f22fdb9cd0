//! Online monitoring of event traces against compiled properties.

mod event;
mod state;

pub use event::{encode_event, parse_trace, Event, TraceReader, TraceWarning};
pub use state::{replay_path, Monitor, MonitorOptions, MonitorStats, PathEntry, Verdict};

use std::io::BufRead;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::error::{join, Diagnostic};
use crate::hl::HlAutomaton;
use crate::property::EventSchema;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MonitorError {
    #[error("event `{method}` carries {found} values, at most {max} allowed")]
    Arity {
        method: String,
        found: usize,
        max: usize,
    },
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid automaton: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("{0}")]
    Options(String),
}

/// Outcome of monitoring one trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
    pub stats: MonitorStats,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<TraceWarning>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl Report {
    pub fn violated(&self) -> bool {
        !self.verdicts.is_empty()
    }

    /// The report as JSON. Wall time is left out unless `timing` is set,
    /// so that identical runs give identical output.
    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if timing {
            v["stats"]["wall_time_ms"] = serde_json::json!(self.wall_time.as_secs_f64() * 1000.0);
        }
        v
    }
}

/// Streams a JSON Lines trace through a monitor for `aut`.
pub fn run_trace(
    aut: &HlAutomaton,
    schema: &EventSchema,
    trace: impl BufRead,
    options: &MonitorOptions,
    strict: bool,
) -> Result<Report, MonitorError> {
    let start = Instant::now();
    let mut monitor = Monitor::with_schema(aut.clone(), schema.clone(), options.clone())?;
    let mut reader = TraceReader::new(trace, strict);
    let mut verdicts = Vec::new();
    for e in reader.by_ref() {
        verdicts.extend(monitor.feed(&e?)?);
    }
    verdicts.extend(monitor.finish());
    Ok(Report {
        verdicts,
        stats: monitor.stats(),
        warnings: reader.warnings,
        wall_time: start.elapsed(),
    })
}

/// [`run_trace`] over events already in memory.
pub fn run_events(
    aut: &HlAutomaton,
    schema: &EventSchema,
    events: &[Event],
    options: &MonitorOptions,
) -> Result<Report, MonitorError> {
    let start = Instant::now();
    let mut monitor = Monitor::with_schema(aut.clone(), schema.clone(), options.clone())?;
    let mut verdicts = Vec::new();
    for e in events {
        verdicts.extend(monitor.feed(e)?);
    }
    verdicts.extend(monitor.finish());
    Ok(Report {
        verdicts,
        stats: monitor.stats(),
        warnings: Vec::new(),
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::compile_source;
    use crate::samples::{HAS_NEXT_PROPERTY, ITERATOR_PROPERTY, TAINT_PROPERTY};

    fn taint_trace() -> Vec<Event> {
        let get = "javax.servlet.http.HttpServletRequest.getParameter";
        vec![
            Event::call(get, &["req", "p"]),
            Event::ret(get, Some("v1")),
            Event::call("java.sql.Statement.executeQuery", &["stmt", "v1"]),
        ]
    }

    #[test]
    fn taint_verdict_at_third_event() {
        let c = compile_source(TAINT_PROPERTY).unwrap();
        let opts = MonitorOptions {
            record_paths: true,
            ..MonitorOptions::default()
        };
        let r = run_events(&c.automaton, &c.schema, &taint_trace(), &opts).unwrap();
        assert_eq!(r.verdicts.len(), 1);
        assert_eq!(r.verdicts[0].matched_at, 3);
        assert!(r.stats.peak_active >= 2);
        let path = r.verdicts[0].path.as_ref().unwrap();
        let spans: Vec<(usize, usize)> =
            path.iter().map(|e| (e.first_event, e.last_event)).collect();
        assert_eq!(spans, vec![(1, 2), (3, 3)]);
        let letters: Vec<_> = taint_trace()
            .iter()
            .map(|e| encode_event(e, &c.schema).unwrap())
            .collect();
        replay_path(&c.automaton, &letters, path).unwrap();
    }

    #[test]
    fn iterator_invalidation() {
        let c = compile_source(ITERATOR_PROPERTY).unwrap();
        let mut t = vec![
            Event::call("iterator", &["c"]),
            Event::ret("iterator", Some("x")),
            Event::call("iterator", &["c"]),
            Event::ret("iterator", Some("y")),
            Event::call("remove", &["y"]),
            Event::ret("remove", None),
        ];
        let opts = MonitorOptions::default();
        let ok = run_events(&c.automaton, &c.schema, &t, &opts).unwrap();
        assert!(ok.verdicts.is_empty());
        t.push(Event::call("next", &["x"]));
        let bad = run_events(&c.automaton, &c.schema, &t, &opts).unwrap();
        assert_eq!(
            bad.verdicts.iter().map(|v| v.matched_at).collect::<Vec<_>>(),
            vec![7]
        );
        t.pop();
        t.push(Event::call("next", &["y"]));
        let fine = run_events(&c.automaton, &c.schema, &t, &opts).unwrap();
        assert!(fine.verdicts.is_empty());
    }

    #[test]
    fn has_next_compliant_trace() {
        let c = compile_source(HAS_NEXT_PROPERTY).unwrap();
        let mut t = vec![
            Event::call("iterator", &["list"]),
            Event::ret("iterator", Some("it")),
        ];
        for _ in 0..3 {
            t.push(Event::call("hasNext", &["it"]));
            t.push(Event::ret("hasNext", Some("true")));
            t.push(Event::call("next", &["it"]));
            t.push(Event::ret("next", Some("e")));
        }
        let opts = MonitorOptions::default();
        assert!(run_events(&c.automaton, &c.schema, &t, &opts)
            .unwrap()
            .verdicts
            .is_empty());
        t.push(Event::call("next", &["it"]));
        let r = run_events(&c.automaton, &c.schema, &t, &opts).unwrap();
        assert_eq!(r.verdicts.len(), 1);
    }

    #[test]
    fn jsonl_report() {
        let c = compile_source(TAINT_PROPERTY).unwrap();
        let text: String = taint_trace().iter().map(|e| e.to_json() + "\n").collect();
        let r = run_trace(
            &c.automaton,
            &c.schema,
            text.as_bytes(),
            &MonitorOptions::default(),
            true,
        )
        .unwrap();
        let json = r.to_json(false);
        assert_eq!(json["verdicts"][0]["matched_at"], 3);
        assert_eq!(json["stats"]["events"], 3);
        assert!(json["stats"].get("wall_time_ms").is_none());
        assert!(r.to_json(true)["stats"]["wall_time_ms"].is_number());
    }
}
