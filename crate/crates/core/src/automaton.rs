//! TOPL automata and their configuration-graph semantics.
//!
//! [`Automaton`] is shared by the low-level model (one `(guard, action)`
//! label per transition, [`ToplAutomaton`]) and the high-level one (a
//! non-empty label sequence per transition, [`HlAutomaton`](crate::hl::HlAutomaton)).

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::error::Diagnostic;
use crate::guard::Label;
use crate::value::{Letter, Store};

pub type StateId = String;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition<L> {
    pub from: StateId,
    pub label: L,
    pub to: StateId,
}

/// Label types carried by transitions.
pub trait TransitionLabel {
    fn labels(&self) -> &[Label];
}

impl TransitionLabel for Label {
    fn labels(&self) -> &[Label] {
        std::slice::from_ref(self)
    }
}

impl TransitionLabel for Vec<Label> {
    fn labels(&self) -> &[Label] {
        self
    }
}

/// `⟨Q, q0, s0, δ, F⟩` over `n`-tuples with `m` registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton<L> {
    pub arity: usize,
    pub registers: usize,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub store: Store,
    pub finals: Vec<StateId>,
    pub transitions: Vec<Transition<L>>,
}

pub type ToplAutomaton = Automaton<Label>;

/// A `(state, store)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub store: Store,
}

impl<L: TransitionLabel> Automaton<L> {
    /// Reports every violated structural invariant.
    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut seen = IndexSet::new();
        for q in &self.states {
            if !seen.insert(q.as_str()) {
                diags.push(Diagnostic::DuplicateState(q.clone()));
            }
        }
        if self.arity == 0 {
            diags.push(Diagnostic::ZeroArity);
        }
        if !seen.contains(self.initial.as_str()) {
            diags.push(Diagnostic::UnknownInitial(self.initial.clone()));
        }
        for f in &self.finals {
            if !seen.contains(f.as_str()) {
                diags.push(Diagnostic::UnknownFinal(f.clone()));
            }
        }
        if self.store.len() != self.registers {
            diags.push(Diagnostic::StoreLength {
                found: self.store.len(),
                expected: self.registers,
            });
        }
        for (k, t) in self.transitions.iter().enumerate() {
            for q in [&t.from, &t.to] {
                if !seen.contains(q.as_str()) {
                    diags.push(Diagnostic::UnknownEndpoint {
                        transition: k,
                        state: q.clone(),
                    });
                }
            }
            if t.label.labels().is_empty() {
                diags.push(Diagnostic::EmptyLabel { transition: k });
            }
            for l in t.label.labels() {
                if let Err(error) = l.check_bounds(self.registers, self.arity) {
                    diags.push(Diagnostic::Index {
                        transition: k,
                        error,
                    });
                }
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }

    pub fn is_final(&self, q: &str) -> bool {
        self.finals.iter().any(|f| f == q)
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.initial.clone(),
            store: self.store.clone(),
        }
    }

    /// Longest label sequence among the transitions (at least 1).
    pub fn max_label_len(&self) -> usize {
        self.transitions
            .iter()
            .map(|t| t.label.labels().len())
            .max()
            .unwrap_or(1)
            .max(1)
    }

    pub fn has_method_guards(&self) -> Option<usize> {
        self.transitions
            .iter()
            .position(|t| t.label.labels().iter().any(|l| l.guard.has_method_match()))
    }

    pub(crate) fn index(&self) -> StateIndex {
        StateIndex::new(self)
    }
}

/// Dense state numbering with per-state outgoing transition lists.
#[derive(Clone, Debug)]
pub(crate) struct StateIndex {
    pub pos: HashMap<StateId, usize>,
    pub outgoing: Vec<Vec<usize>>,
    pub target: Vec<usize>,
    pub is_final: Vec<bool>,
    pub initial: usize,
}

impl StateIndex {
    fn new<L: TransitionLabel>(a: &Automaton<L>) -> Self {
        let pos: HashMap<StateId, usize> = a
            .states
            .iter()
            .enumerate()
            .map(|(k, q)| (q.clone(), k))
            .collect();
        let mut outgoing = vec![Vec::new(); a.states.len()];
        let mut target = Vec::with_capacity(a.transitions.len());
        for (k, t) in a.transitions.iter().enumerate() {
            outgoing[pos[&t.from]].push(k);
            target.push(pos[&t.to]);
        }
        let mut is_final = vec![false; a.states.len()];
        for f in &a.finals {
            is_final[pos[f]] = true;
        }
        StateIndex {
            initial: pos[&a.initial],
            pos,
            outgoing,
            target,
            is_final,
        }
    }
}

/// Reusable simulator for a validated TOPL automaton.
///
/// Configurations are kept as `(state number, store)` sets in discovery
/// order, so runs are deterministic.
pub struct ToplRunner<'a> {
    aut: &'a ToplAutomaton,
    index: StateIndex,
}

pub type ConfigSet = IndexSet<(usize, Store)>;

impl<'a> ToplRunner<'a> {
    pub fn new(aut: &'a ToplAutomaton) -> Self {
        ToplRunner {
            index: aut.index(),
            aut,
        }
    }

    pub fn start(&self) -> ConfigSet {
        let mut set = ConfigSet::new();
        set.insert((self.index.initial, self.aut.store.clone()));
        set
    }

    pub fn advance(&self, configs: &ConfigSet, l: &Letter) -> ConfigSet {
        let mut next = ConfigSet::new();
        for (q, s) in configs {
            for &t in &self.index.outgoing[*q] {
                if let Some(s2) = self.aut.transitions[t].label.fire(s, l) {
                    next.insert((self.index.target[t], s2));
                }
            }
        }
        next
    }

    pub fn any_final(&self, configs: &ConfigSet) -> bool {
        configs.iter().any(|(q, _)| self.index.is_final[*q])
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        let mut configs = self.start();
        for l in w {
            if configs.is_empty() {
                return false;
            }
            configs = self.advance(&configs, l);
        }
        self.any_final(&configs)
    }

    pub fn state_name(&self, q: usize) -> &StateId {
        &self.aut.states[q]
    }
}

/// All configurations reachable from `c` by reading `l`, in transition order.
///
/// The automaton must be valid and `c.state` one of its states.
pub fn step(a: &ToplAutomaton, c: &Configuration, l: &Letter) -> Vec<Configuration> {
    let mut out: IndexSet<Configuration> = IndexSet::new();
    for t in a.transitions.iter().filter(|t| t.from == c.state) {
        if let Some(store) = t.label.fire(&c.store, l) {
            out.insert(Configuration {
                state: t.to.clone(),
                store,
            });
        }
    }
    out.into_iter().collect()
}

/// Membership by breadth-first simulation of configuration sets.
pub fn accepts(a: &ToplAutomaton, w: &[Letter]) -> bool {
    ToplRunner::new(a).accepts(w)
}

pub fn validate_automaton<L: TransitionLabel>(a: &Automaton<L>) -> Result<(), Vec<Diagnostic>> {
    a.validate()
}

/// Either kind of automaton, as read from an automaton file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAutomaton {
    Topl(ToplAutomaton),
    Hl(crate::hl::HlAutomaton),
}

impl AnyAutomaton {
    pub fn arity(&self) -> usize {
        match self {
            AnyAutomaton::Topl(a) => a.arity,
            AnyAutomaton::Hl(a) => a.arity,
        }
    }

    pub fn registers(&self) -> usize {
        match self {
            AnyAutomaton::Topl(a) => a.registers,
            AnyAutomaton::Hl(a) => a.registers,
        }
    }

    pub fn states_len(&self) -> usize {
        match self {
            AnyAutomaton::Topl(a) => a.states.len(),
            AnyAutomaton::Hl(a) => a.states.len(),
        }
    }

    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        match self {
            AnyAutomaton::Topl(a) => a.validate(),
            AnyAutomaton::Hl(a) => a.validate(),
        }
    }

    /// Membership under the automaton's own semantics.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        match self {
            AnyAutomaton::Topl(a) => accepts(a, w),
            AnyAutomaton::Hl(a) => crate::hl::hl_accepts(a, w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::guard::{Action, Guard};
    use crate::value::{unary_word, Word};

    #[test]
    fn three_letter_language() {
        let a = samples::three_letter();
        assert!(accepts(&a, &unary_word(&["1", "2", "3"])));
        assert!(!accepts(&a, &unary_word(&["1", "2", "1"])));
        assert!(!accepts(&a, &unary_word(&["1", "2", "2"])));
        assert!(!accepts(&a, &unary_word(&["1", "2"])));
        assert!(!accepts(&a, &unary_word(&["1", "2", "3", "4"])));
    }

    #[test]
    fn step_three_letter() {
        let a = samples::three_letter();
        let c = Configuration {
            state: "3".into(),
            store: Store::atoms(&["1", "2"]),
        };
        assert_eq!(
            step(&a, &c, &Letter::atoms(&["3"])),
            vec![Configuration {
                state: "4".into(),
                store: Store::atoms(&["1", "2"])
            }]
        );
        assert!(step(&a, &c, &Letter::atoms(&["1"])).is_empty());
    }

    #[test]
    fn step_list_cycle() {
        let a = samples::list_cycle();
        let c = Configuration {
            state: "q0".into(),
            store: Store::atoms(&["next", "v0", "v0"]),
        };
        let got = step(&a, &c, &Letter::atoms(&["next", "v0", "v1"]));
        let store = Store::atoms(&["next", "v0", "v1"]);
        assert_eq!(got.len(), 2);
        assert!(got.contains(&Configuration {
            state: "q0".into(),
            store: store.clone()
        }));
        assert!(got.contains(&Configuration {
            state: "q1".into(),
            store
        }));
    }

    #[test]
    fn list_cycle_language() {
        let a = samples::list_cycle();
        let w = |rows: &[[&str; 3]]| -> Word { rows.iter().map(|r| Letter::atoms(r)).collect() };
        assert!(accepts(&a, &w(&[["next", "v0", "v1"], ["next", "v1", "v0"]])));
        assert!(!accepts(&a, &w(&[["next", "v0", "v1"], ["next", "v1", "v2"]])));
        assert!(accepts(&a, &w(&[["next", "v0", "v0"]])));
        assert!(accepts(&a, &w(&[
            ["next", "v0", "v1"],
            ["next", "v1", "v2"],
            ["next", "v2", "v1"]
        ])));
        // The chain must start at v0.
        assert!(!accepts(&a, &w(&[["next", "v1", "v1"]])));
    }

    #[test]
    fn validation() {
        assert_eq!(samples::three_letter().validate(), Ok(()));
        let mut a = samples::three_letter();
        a.initial = "nowhere".into();
        let diags = a.validate().unwrap_err();
        assert_eq!(diags[0].kind(), "initial state unknown");

        let mut a = samples::three_letter();
        a.transitions[2].label = Label::new(Guard::Eq(3, 1), Action::nop());
        let diags = a.validate().unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].kind(), "register index out of range");

        let mut a = samples::three_letter();
        a.store = Store::atoms(&["x"]);
        a.transitions[0].to = "9".into();
        let diags = a.validate().unwrap_err();
        assert_eq!(diags.len(), 2);
    }
}
