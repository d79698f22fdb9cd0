//! Union, intersection and concatenation of TOPL automata of equal arity.
//!
//! The result places the registers of the left operand first and those of
//! the right operand after them; states are prefixed `a:` and `b:`.

use std::collections::VecDeque;

use indexmap::IndexMap;

use crate::automaton::{ToplAutomaton, Transition};
use crate::error::TranslateError;
use crate::guard::{Action, Assign, Guard, Label};
use crate::value::Store;

fn check(a: &ToplAutomaton, b: &ToplAutomaton) -> Result<(), TranslateError> {
    a.validate().map_err(TranslateError::Invalid)?;
    b.validate().map_err(TranslateError::Invalid)?;
    if a.arity != b.arity {
        return Err(TranslateError::ArityMismatch {
            left: a.arity,
            right: b.arity,
        });
    }
    Ok(())
}

fn shift_guard(g: &Guard, offset: usize) -> Guard {
    match g {
        Guard::Eq(i, j) => Guard::Eq(i + offset, *j),
        Guard::Neq(i, j) => Guard::Neq(i + offset, *j),
        Guard::And(x, y) => Guard::And(
            Box::new(shift_guard(x, offset)),
            Box::new(shift_guard(y, offset)),
        ),
        other => other.clone(),
    }
}

fn shift_label(l: &Label, offset: usize) -> Label {
    Label::new(
        shift_guard(&l.guard, offset),
        Action(
            l.action
                .0
                .iter()
                .map(|a| Assign {
                    register: a.register + offset,
                    component: a.component,
                })
                .collect(),
        ),
    )
}

fn joined_store(a: &ToplAutomaton, b: &ToplAutomaton) -> Store {
    let mut v = a.store.values().to_vec();
    v.extend_from_slice(b.store.values());
    Store::new(v)
}

fn tag(side: &str, q: &str) -> String {
    format!("{side}:{q}")
}

/// Both automata side by side, state names tagged, registers of `b` shifted.
fn disjoint(a: &ToplAutomaton, b: &ToplAutomaton) -> ToplAutomaton {
    let mut states: Vec<String> = a.states.iter().map(|q| tag("a", q)).collect();
    states.extend(b.states.iter().map(|q| tag("b", q)));
    let mut transitions: Vec<Transition<Label>> = a
        .transitions
        .iter()
        .map(|t| Transition {
            from: tag("a", &t.from),
            label: t.label.clone(),
            to: tag("a", &t.to),
        })
        .collect();
    transitions.extend(b.transitions.iter().map(|t| Transition {
        from: tag("b", &t.from),
        label: shift_label(&t.label, a.registers),
        to: tag("b", &t.to),
    }));
    ToplAutomaton {
        arity: a.arity,
        registers: a.registers + b.registers,
        states,
        initial: tag("a", &a.initial),
        store: joined_store(a, b),
        finals: Vec::new(),
        transitions,
    }
}

/// `L(A) ∪ L(B)`, through a new initial state that starts either run.
pub fn union(a: &ToplAutomaton, b: &ToplAutomaton) -> Result<ToplAutomaton, TranslateError> {
    check(a, b)?;
    let mut u = disjoint(a, b);
    let start = "u0".to_string();
    let starts: Vec<Transition<Label>> = u
        .transitions
        .iter()
        .filter(|t| t.from == tag("a", &a.initial) || t.from == tag("b", &b.initial))
        .map(|t| Transition {
            from: start.clone(),
            label: t.label.clone(),
            to: t.to.clone(),
        })
        .collect();
    u.transitions.extend(starts);
    u.finals = a.finals.iter().map(|q| tag("a", q)).collect();
    u.finals.extend(b.finals.iter().map(|q| tag("b", q)));
    if a.is_final(&a.initial) || b.is_final(&b.initial) {
        u.finals.push(start.clone());
    }
    u.states.insert(0, start.clone());
    u.initial = start;
    Ok(u)
}

/// `L(A) ∩ L(B)` by the reachable synchronous product.
pub fn intersection(a: &ToplAutomaton, b: &ToplAutomaton) -> Result<ToplAutomaton, TranslateError> {
    check(a, b)?;
    let (ia, ib) = (a.index(), b.index());
    let name = |p: usize, q: usize| format!("({},{})", a.states[p], b.states[q]);
    let mut ids: IndexMap<(usize, usize), String> = IndexMap::new();
    let start = (ia.initial, ib.initial);
    ids.insert(start, name(start.0, start.1));
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();
    while let Some((p, q)) = queue.pop_front() {
        let from = ids[&(p, q)].clone();
        for &s in &ia.outgoing[p] {
            for &t in &ib.outgoing[q] {
                let next = (ia.target[s], ib.target[t]);
                let to = ids
                    .entry(next)
                    .or_insert_with(|| {
                        queue.push_back(next);
                        name(next.0, next.1)
                    })
                    .clone();
                let lb = shift_label(&b.transitions[t].label, a.registers);
                let la = &a.transitions[s].label;
                transitions.push(Transition {
                    from: from.clone(),
                    label: Label::new(
                        la.guard.clone().and(lb.guard),
                        la.action.clone().then(lb.action),
                    ),
                    to,
                });
            }
        }
    }
    let finals = ids
        .iter()
        .filter(|((p, q), _)| ia.is_final[*p] && ib.is_final[*q])
        .map(|(_, n)| n.clone())
        .collect();
    Ok(ToplAutomaton {
        arity: a.arity,
        registers: a.registers + b.registers,
        initial: ids[&start].clone(),
        states: ids.into_values().collect(),
        store: joined_store(a, b),
        finals,
        transitions,
    })
}

/// `L(A) · L(B)`: every transition of `A` into a final state may also
/// continue as the first transition of `B`.
pub fn concat(a: &ToplAutomaton, b: &ToplAutomaton) -> Result<ToplAutomaton, TranslateError> {
    check(a, b)?;
    let mut c = disjoint(a, b);
    let b0 = tag("b", &b.initial);
    let b_empty = b.is_final(&b.initial);
    let mut extra = Vec::new();
    for t in &a.transitions {
        if a.is_final(&t.to) {
            extra.push(Transition {
                from: tag("a", &t.from),
                label: t.label.clone(),
                to: b0.clone(),
            });
        }
    }
    if a.is_final(&a.initial) {
        for t in c.transitions.iter().filter(|t| t.from == b0) {
            extra.push(Transition {
                from: tag("a", &a.initial),
                label: t.label.clone(),
                to: t.to.clone(),
            });
        }
    }
    c.transitions.extend(extra);
    c.finals = b.finals.iter().map(|q| tag("b", q)).collect();
    if b_empty {
        c.finals.extend(a.finals.iter().map(|q| tag("a", q)));
    }
    Ok(c)
}
