use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;

use super::event::{encode_event, Event};
use super::MonitorError;
use crate::automaton::StateIndex;
use crate::hl::{match_prefix, successors, HlAutomaton, PathStep};
use crate::property::EventSchema;
use crate::value::{Letter, Store};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonitorOptions {
    /// Bound on active configurations; `None` keeps all of them.
    pub max_configs: Option<usize>,
    pub record_paths: bool,
    /// Stop emitting verdicts after the first one.
    pub stop_at_first: bool,
}

/// One standard transition of a reported path, with the 1-based events it
/// consumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub transition: usize,
    pub from: String,
    pub to: String,
    pub first_event: usize,
    pub last_event: usize,
}

/// The automaton accepts the trace prefix ending at event `matched_at`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub matched_at: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<PathEntry>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonitorStats {
    pub events: usize,
    pub peak_active: usize,
    pub dropped: usize,
}

/// Persistent list of standard steps, newest first.
#[derive(Debug)]
struct PathNode {
    step: PathStep,
    prev: Option<Arc<PathNode>>,
}

type Tag = Option<Arc<PathNode>>;

fn push(tag: &Tag, step: PathStep) -> Tag {
    Some(Arc::new(PathNode {
        step,
        prev: tag.clone(),
    }))
}

fn unwind(tag: &Tag) -> Vec<PathStep> {
    let mut out = Vec::new();
    let mut cur = tag.as_deref();
    while let Some(node) = cur {
        out.push(node.step.clone());
        cur = node.prev.as_deref();
    }
    out.reverse();
    out
}

/// `(state, store, position)`: a configuration that has consumed the events
/// before `position` (0-based).
type Key = (usize, Store, usize);

/// Online evaluation of a high-level automaton.
///
/// A configuration is advanced only once `d` letters past its position are
/// known, so that the skip rule (which depends on whether any transition
/// of length up to `d` starts) is decided exactly. Verdicts are computed
/// eagerly: after each event a copy of the pending letters is flushed from
/// every active configuration as if the trace ended there.
pub struct Monitor {
    aut: HlAutomaton,
    index: StateIndex,
    schema: Option<EventSchema>,
    options: MonitorOptions,
    d: usize,
    /// Letters from position `base` onwards.
    letters: VecDeque<Letter>,
    base: usize,
    active: IndexMap<Key, Tag>,
    stats: MonitorStats,
    /// States from which some final state is reachable.
    live: Vec<bool>,
    done: bool,
}

impl Monitor {
    pub fn new(aut: HlAutomaton, options: MonitorOptions) -> Result<Self, MonitorError> {
        aut.validate().map_err(MonitorError::Invalid)?;
        if options.max_configs == Some(0) {
            return Err(MonitorError::Options("max_configs must be at least 1".into()));
        }
        let index = aut.index();
        let mut live = index.is_final.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for (t, tr) in aut.transitions.iter().enumerate() {
                let (from, to) = (index.pos[&tr.from], index.target[t]);
                if live[to] && !live[from] {
                    live[from] = true;
                    changed = true;
                }
            }
        }
        let mut active = IndexMap::new();
        active.insert((index.initial, aut.store.clone(), 0), None);
        Ok(Monitor {
            d: aut.max_label_len(),
            stats: MonitorStats {
                peak_active: 1,
                ..MonitorStats::default()
            },
            aut,
            index,
            schema: None,
            options,
            letters: VecDeque::new(),
            base: 0,
            active,
            live,
            done: false,
        })
    }

    /// A monitor that accepts [`Event`]s, encoded with `schema`.
    pub fn with_schema(
        aut: HlAutomaton,
        schema: EventSchema,
        options: MonitorOptions,
    ) -> Result<Self, MonitorError> {
        if schema.width() != aut.arity {
            return Err(MonitorError::Options(format!(
                "schema letters have width {}, automaton arity is {}",
                schema.width(),
                aut.arity
            )));
        }
        let mut m = Monitor::new(aut, options)?;
        m.schema = Some(schema);
        Ok(m)
    }

    pub fn automaton(&self) -> &HlAutomaton {
        &self.aut
    }

    pub fn stats(&self) -> MonitorStats {
        self.stats
    }

    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    /// Encodes and feeds one event.
    pub fn feed(&mut self, e: &Event) -> Result<Vec<Verdict>, MonitorError> {
        let schema = self.schema.as_ref().ok_or_else(|| {
            MonitorError::Options("events need a schema; use feed_letter".into())
        })?;
        let l = encode_event(e, schema)?;
        Ok(self.feed_letter(l))
    }

    /// Feeds one letter; returns the verdict for the prefix ending here, if
    /// the automaton accepts it.
    pub fn feed_letter(&mut self, l: Letter) -> Vec<Verdict> {
        assert_eq!(l.arity(), self.aut.arity, "letter width must match the automaton");
        self.letters.push_back(l);
        self.stats.events += 1;
        let k = self.stats.events;

        let mut next: IndexMap<Key, Tag> = IndexMap::with_capacity(self.active.len());
        let active = std::mem::take(&mut self.active);
        for ((q, s, pos), tag) in active {
            if !self.live[q] {
                continue;
            }
            if k - pos < self.d {
                next.entry((q, s, pos)).or_insert(tag);
                continue;
            }
            let pending = self.pending(pos, k);
            for st in successors(&self.aut, &self.index, q, &s, &pending) {
                let end = pos + st.consumed;
                let key = (st.state, st.store, end);
                if !self.live[key.0] || next.contains_key(&key) {
                    continue;
                }
                let tag = match (st.transition, self.options.record_paths) {
                    (Some(t), true) => push(
                        &tag,
                        PathStep {
                            transition: Some(t),
                            start: pos,
                            end,
                        },
                    ),
                    _ => tag.clone(),
                };
                next.insert(key, tag);
            }
        }
        if let Some(max) = self.options.max_configs {
            if next.len() > max {
                self.stats.dropped += next.len() - max;
                next.truncate(max);
            }
        }
        self.stats.peak_active = self.stats.peak_active.max(next.len());
        self.active = next;

        let min_pos = self.active.keys().map(|(_, _, p)| *p).min().unwrap_or(k);
        while self.base < min_pos {
            self.letters.pop_front();
            self.base += 1;
        }

        if self.done {
            return Vec::new();
        }
        match self.accepting_now(k) {
            Some(path) => {
                if self.options.stop_at_first {
                    self.done = true;
                }
                vec![Verdict {
                    matched_at: k,
                    path,
                }]
            }
            None => Vec::new(),
        }
    }

    /// Ends the trace. Acceptance at the last event was already reported by
    /// [`Monitor::feed_letter`], so this only releases the buffer.
    pub fn finish(&mut self) -> Vec<Verdict> {
        self.letters.clear();
        self.base = self.stats.events;
        self.active.clear();
        Vec::new()
    }

    fn pending(&self, pos: usize, k: usize) -> Vec<Letter> {
        self.letters
            .range(pos - self.base..k - self.base)
            .cloned()
            .collect()
    }

    /// Whether the prefix of length `k` is accepted, with the path if paths
    /// are recorded (otherwise `Some(None)`).
    fn accepting_now(&self, k: usize) -> Option<Option<Vec<PathEntry>>> {
        for ((q, s, pos), tag) in &self.active {
            if !self.live[*q] {
                continue;
            }
            if let Some(tail) = self.flush(*q, s, *pos, k) {
                if !self.options.record_paths {
                    return Some(None);
                }
                let mut steps = unwind(tag);
                steps.extend(tail);
                return Some(Some(self.entries(&steps)));
            }
        }
        None
    }

    /// Breadth-first search to a final state consuming exactly the letters
    /// `pos..k`; returns the standard steps taken.
    fn flush(&self, q: usize, s: &Store, pos: usize, k: usize) -> Option<Vec<PathStep>> {
        if pos == k {
            return self.index.is_final[q].then(Vec::new);
        }
        let pending = self.pending(pos, k);
        let mut seen: HashSet<Key> = HashSet::new();
        let mut queue: VecDeque<(Key, Vec<PathStep>)> = VecDeque::new();
        queue.push_back(((q, s.clone(), pos), Vec::new()));
        while let Some(((q, s, p), path)) = queue.pop_front() {
            if p == k {
                if self.index.is_final[q] {
                    return Some(path);
                }
                continue;
            }
            for st in successors(&self.aut, &self.index, q, &s, &pending[p - pos..]) {
                let end = p + st.consumed;
                let key = (st.state, st.store, end);
                if !self.live[key.0] || !seen.insert(key.clone()) {
                    continue;
                }
                let mut path = path.clone();
                if let Some(t) = st.transition {
                    path.push(PathStep {
                        transition: Some(t),
                        start: p,
                        end,
                    });
                }
                queue.push_back((key, path));
            }
        }
        None
    }

    fn entries(&self, steps: &[PathStep]) -> Vec<PathEntry> {
        steps
            .iter()
            .filter_map(|st| {
                let t = st.transition?;
                let tr = &self.aut.transitions[t];
                Some(PathEntry {
                    transition: t,
                    from: tr.from.clone(),
                    to: tr.to.clone(),
                    first_event: st.start + 1,
                    last_event: st.end,
                })
            })
            .collect()
    }
}

/// Checks a reported path against the trace prefix `w`: every listed
/// transition must match its span, every letter between them must be a
/// legal skip, and the walk must end in a final state.
pub fn replay_path(aut: &HlAutomaton, w: &[Letter], path: &[PathEntry]) -> Result<(), String> {
    let index = aut.index();
    let k = w.len();
    let mut q = index.initial;
    let mut s = aut.store.clone();
    let mut pos = 0;
    let skip_to = |q: usize, s: &Store, pos: &mut usize, until: usize| -> Result<(), String> {
        while *pos < until {
            let succ = successors(aut, &index, q, s, &w[*pos..]);
            if succ.iter().any(|st| st.transition.is_some()) {
                return Err(format!(
                    "event {} cannot be skipped in state {}",
                    *pos + 1,
                    aut.states[q]
                ));
            }
            *pos += 1;
        }
        Ok(())
    };
    for e in path {
        if e.first_event == 0 || e.first_event - 1 < pos || e.last_event > k {
            return Err(format!("transition {} has an invalid span", e.transition));
        }
        skip_to(q, &s, &mut pos, e.first_event - 1)?;
        let tr = aut
            .transitions
            .get(e.transition)
            .ok_or_else(|| format!("unknown transition {}", e.transition))?;
        if tr.from != aut.states[q] {
            return Err(format!(
                "transition {} leaves {}, not {}",
                e.transition, tr.from, aut.states[q]
            ));
        }
        if tr.label.len() != e.last_event + 1 - e.first_event {
            return Err(format!("transition {} spans the wrong number of events", e.transition));
        }
        s = match_prefix(&s, &tr.label, &w[pos..e.last_event])
            .ok_or_else(|| format!("transition {} does not match its events", e.transition))?;
        q = index.pos[&tr.to];
        pos = e.last_event;
    }
    skip_to(q, &s, &mut pos, k)?;
    if index.is_final[q] {
        Ok(())
    } else {
        Err(format!("path ends in non-final state {}", aut.states[q]))
    }
}
