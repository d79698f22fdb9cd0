//! High-level TOPL automata: transitions consume label sequences, and a
//! letter is skipped only when no standard transition starts.

use std::collections::VecDeque;

use indexmap::IndexMap;

use crate::automaton::{Automaton, Configuration, StateIndex, ToplAutomaton, Transition};
use crate::error::IndexError;
use crate::guard::Label;
use crate::value::{Letter, Store, Word};

pub type HlAutomaton = Automaton<Vec<Label>>;

/// `((q, s), w)`: a configuration together with the word yet to be read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HlConfiguration {
    pub config: Configuration,
    pub pending: Word,
}

impl HlConfiguration {
    pub fn is_final(&self, a: &HlAutomaton) -> bool {
        self.pending.is_empty() && a.is_final(&self.config.state)
    }
}

/// The linear automaton `T(s, λ1..λd)`: states `0..=d`, initial `0`, final
/// `d`, and one transition `(i-1, λi, i)` per label.
pub fn build_seq_matcher(arity: usize, s: &Store, labels: &[Label]) -> ToplAutomaton {
    let d = labels.len();
    ToplAutomaton {
        arity,
        registers: s.len(),
        states: (0..=d).map(|i| i.to_string()).collect(),
        initial: "0".into(),
        store: s.clone(),
        finals: vec![d.to_string()],
        transitions: labels
            .iter()
            .enumerate()
            .map(|(i, l)| Transition {
                from: i.to_string(),
                label: l.clone(),
                to: (i + 1).to_string(),
            })
            .collect(),
    }
}

/// The store with which the label chain accepts `w`, if it does.
///
/// The chain is deterministic, so there is at most one such store. Words of
/// the wrong length never match; see [`match_prefix_checked`] to tell that
/// case apart.
pub fn match_prefix(s: &Store, labels: &[Label], w: &[Letter]) -> Option<Store> {
    if labels.len() != w.len() {
        return None;
    }
    let mut store = s.clone();
    for (l, letter) in labels.iter().zip(w) {
        if !l.guard.holds(&store, letter) {
            return None;
        }
        l.action.apply_in_place(letter, &mut store);
    }
    Some(store)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchError {
    LengthMismatch { labels: usize, word: usize },
    Index(IndexError),
}

/// Like [`match_prefix`] but reports length mismatches and bad indices.
pub fn match_prefix_checked(
    s: &Store,
    labels: &[Label],
    w: &[Letter],
) -> Result<Option<Store>, MatchError> {
    if labels.len() != w.len() {
        return Err(MatchError::LengthMismatch {
            labels: labels.len(),
            word: w.len(),
        });
    }
    for (l, letter) in labels.iter().zip(w) {
        l.check_bounds(s.len(), letter.arity())
            .map_err(MatchError::Index)?;
    }
    Ok(match_prefix(s, labels, w))
}

/// One edge of the hl-configuration graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HlStep {
    /// `None` for a skip.
    pub transition: Option<usize>,
    pub consumed: usize,
    pub state: usize,
    pub store: Store,
}

/// Standard successors of `(q, s)` on the pending letters, or the single
/// skip successor when none exists. Successors come in transition order.
pub(crate) fn successors(
    a: &HlAutomaton,
    index: &StateIndex,
    q: usize,
    s: &Store,
    pending: &[Letter],
) -> Vec<HlStep> {
    let mut out = Vec::new();
    for &t in &index.outgoing[q] {
        let labels = &a.transitions[t].label;
        if labels.len() > pending.len() {
            continue;
        }
        if let Some(store) = match_prefix(s, labels, &pending[..labels.len()]) {
            out.push(HlStep {
                transition: Some(t),
                consumed: labels.len(),
                state: index.target[t],
                store,
            });
        }
    }
    if out.is_empty() && !pending.is_empty() {
        out.push(HlStep {
            transition: None,
            consumed: 1,
            state: q,
            store: s.clone(),
        });
    }
    out
}

/// All edges leaving `y`, each paired with the word it consumes.
pub fn hl_successors(a: &HlAutomaton, y: &HlConfiguration) -> Vec<(Word, HlConfiguration)> {
    let index = a.index();
    let q = index.pos[&y.config.state];
    successors(a, &index, q, &y.config.store, &y.pending)
        .into_iter()
        .map(|st| {
            (
                y.pending[..st.consumed].to_vec(),
                HlConfiguration {
                    config: Configuration {
                        state: a.states[st.state].clone(),
                        store: st.store,
                    },
                    pending: y.pending[st.consumed..].to_vec(),
                },
            )
        })
        .collect()
}

/// A step of an accepting hl path: the transition taken (or a skip) and the
/// 0-based half-open span of letters it consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub transition: Option<usize>,
    pub start: usize,
    pub end: usize,
}

/// Reusable hl simulator.
pub struct HlRunner<'a> {
    aut: &'a HlAutomaton,
    index: StateIndex,
}

impl<'a> HlRunner<'a> {
    pub fn new(aut: &'a HlAutomaton) -> Self {
        HlRunner {
            index: aut.index(),
            aut,
        }
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accepting_path(w).is_some()
    }

    /// Breadth-first search for an accepting path; the returned path has
    /// the fewest steps, ties broken by transition order with skips last.
    pub fn accepting_path(&self, w: &[Letter]) -> Option<Vec<PathStep>> {
        type Key = (usize, Store, usize);
        let start: Key = (self.index.initial, self.aut.store.clone(), 0);
        let mut parent: IndexMap<Key, Option<(usize, PathStep)>> = IndexMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            let (q, s, pos) = parent.get_index(node).unwrap().0.clone();
            if pos == w.len() && self.index.is_final[q] {
                let mut path = Vec::new();
                let mut cur = node;
                while let Some((prev, step)) = parent.get_index(cur).unwrap().1.clone() {
                    path.push(step);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            for st in successors(self.aut, &self.index, q, &s, &w[pos..]) {
                let key = (st.state, st.store, pos + st.consumed);
                if !parent.contains_key(&key) {
                    let step = PathStep {
                        transition: st.transition,
                        start: pos,
                        end: pos + st.consumed,
                    };
                    let (idx, _) = parent.insert_full(key, Some((node, step)));
                    queue.push_back(idx);
                }
            }
        }
        None
    }
}

/// Membership for the high-level semantics. The empty word is accepted iff
/// the initial state is final.
pub fn hl_accepts(a: &HlAutomaton, w: &[Letter]) -> bool {
    HlRunner::new(a).accepts(w)
}

/// Reads a TOPL automaton as a high-level one with singleton labels. The
/// language generally changes, since letters may now be skipped.
pub fn singleton_labels(a: &ToplAutomaton) -> HlAutomaton {
    HlAutomaton {
        arity: a.arity,
        registers: a.registers,
        states: a.states.clone(),
        initial: a.initial.clone(),
        store: a.store.clone(),
        finals: a.finals.clone(),
        transitions: a
            .transitions
            .iter()
            .map(|t| Transition {
                from: t.from.clone(),
                label: vec![t.label.clone()],
                to: t.to.clone(),
            })
            .collect(),
    }
}
