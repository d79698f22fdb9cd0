use indexmap::IndexSet;

use super::{literals, Lit};
use crate::automaton::{ToplAutomaton, Transition};
use crate::error::TranslateError;
use crate::guard::{Action, Guard, Label};
use crate::hl::HlAutomaton;

/// Translates a TOPL automaton into a high-level one with the same language.
///
/// Every transition becomes a one-label sequence. A fresh non-final sink
/// state absorbs the letters on which no transition is enabled, so the
/// high-level skip rule never fires: for each state, the negation of the
/// disjunction of its outgoing guards is added in disjunctive normal form
/// as parallel transitions into the sink.
pub fn topl_to_hl(a: &ToplAutomaton) -> Result<HlAutomaton, TranslateError> {
    a.validate().map_err(TranslateError::Invalid)?;
    let mut stuck = String::from("stuck");
    while a.states.contains(&stuck) {
        stuck.push('\'');
    }
    let mut guards: Vec<Vec<Vec<Lit>>> = vec![Vec::new(); a.states.len()];
    let index = a.index();
    for (k, t) in a.transitions.iter().enumerate() {
        guards[index.pos[&t.from]].push(literals(&t.label.guard, k)?);
    }

    let mut transitions: Vec<Transition<Vec<Label>>> = a
        .transitions
        .iter()
        .map(|t| Transition {
            from: t.from.clone(),
            label: vec![t.label.clone()],
            to: t.to.clone(),
        })
        .collect();
    for (q, gs) in a.states.iter().zip(&guards) {
        for clause in negated_dnf(gs) {
            let guard = Guard::all(clause.into_iter().map(Lit::to_guard));
            transitions.push(Transition {
                from: q.clone(),
                label: vec![Label::new(guard, Action::nop())],
                to: stuck.clone(),
            });
        }
    }
    let mut states = a.states.clone();
    states.push(stuck);
    Ok(HlAutomaton {
        arity: a.arity,
        registers: a.registers,
        states,
        initial: a.initial.clone(),
        store: a.store.clone(),
        finals: a.finals.clone(),
        transitions,
    })
}

/// `¬(g1 ∨ … ∨ gd)` as a list of satisfiable conjunctions of literals.
fn negated_dnf(guards: &[Vec<Lit>]) -> Vec<Vec<Lit>> {
    let mut clauses: IndexSet<Vec<Lit>> = IndexSet::new();
    clauses.insert(Vec::new());
    for g in guards {
        let mut next = IndexSet::new();
        for clause in &clauses {
            for lit in g {
                let neg = lit.negate();
                if clause.contains(lit) {
                    continue;
                }
                let mut c = clause.clone();
                if !c.contains(&neg) {
                    c.push(neg);
                    c.sort_by_key(|l| (l.register, l.component, l.eq));
                }
                next.insert(c);
            }
        }
        clauses = next;
        if clauses.is_empty() {
            break;
        }
    }
    clauses.into_iter().collect()
}
