//! Register automata: unary TOPL automata whose labels are either
//! `(eq i, nop)` or `(fresh, set i)`, where `fresh` asserts the letter differs
//! from every register.

use std::collections::{HashSet, VecDeque};

use indexmap::IndexMap;

use super::{literals, Emptiness};
use crate::automaton::{accepts, ToplAutomaton, Transition};
use crate::error::TranslateError;
use crate::guard::{Action, Guard, Label};
use crate::value::{Letter, Store, Value};

/// A [`ToplAutomaton`] whose labels all lie in the register-automaton
/// fragment. Construct with [`topl_to_ra`] or `TryFrom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterAutomaton(ToplAutomaton);

/// Classified register-automaton label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RaLabel {
    Eq(usize),
    Fresh(usize),
}

impl RegisterAutomaton {
    pub fn as_topl(&self) -> &ToplAutomaton {
        &self.0
    }

    pub fn into_inner(self) -> ToplAutomaton {
        self.0
    }

    pub fn registers(&self) -> usize {
        self.0.registers
    }
}

impl AsRef<ToplAutomaton> for RegisterAutomaton {
    fn as_ref(&self) -> &ToplAutomaton {
        &self.0
    }
}

impl TryFrom<ToplAutomaton> for RegisterAutomaton {
    type Error = TranslateError;

    fn try_from(a: ToplAutomaton) -> Result<Self, TranslateError> {
        a.validate().map_err(TranslateError::Invalid)?;
        if a.arity != 1 {
            return Err(TranslateError::NotRegisterAutomaton {
                transition: 0,
                reason: format!("arity {} is not 1", a.arity),
            });
        }
        for k in 0..a.transitions.len() {
            classify(&a, k)?;
        }
        Ok(RegisterAutomaton(a))
    }
}

fn classify(a: &ToplAutomaton, k: usize) -> Result<RaLabel, TranslateError> {
    let label = &a.transitions[k].label;
    let bad = |reason: &str| TranslateError::NotRegisterAutomaton {
        transition: k,
        reason: reason.to_string(),
    };
    let lits = literals(&label.guard, k)?;
    if let [lit] = lits.as_slice() {
        if lit.eq {
            return if label.action.is_nop() {
                Ok(RaLabel::Eq(lit.register))
            } else {
                Err(bad("eq label with a non-nop action"))
            };
        }
    }
    let regs: HashSet<usize> = lits
        .iter()
        .filter(|l| !l.eq)
        .map(|l| l.register)
        .collect();
    if lits.iter().any(|l| l.eq) || regs.len() != a.registers {
        return Err(bad("guard is neither eq i nor fresh"));
    }
    match label.action.0.as_slice() {
        [assign] => Ok(RaLabel::Fresh(assign.register)),
        _ => Err(bad("fresh label must set exactly one register")),
    }
}

fn fresh_guard(registers: usize) -> Guard {
    Guard::all((1..=registers).map(|i| Guard::Neq(i, 1)))
}

/// Per-transition data used by [`topl_to_ra`]: for each letter component the
/// registers it must equal, must differ from, and the registers whose final
/// value comes from it.
struct Prepared {
    from: usize,
    to: usize,
    eq: Vec<Vec<usize>>,
    neq: Vec<Vec<usize>>,
    writes: Vec<Vec<usize>>,
}

fn prepare(a: &ToplAutomaton) -> Result<Vec<Prepared>, TranslateError> {
    let index = a.index();
    let n = a.arity;
    a.transitions
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let mut p = Prepared {
                from: index.pos[&t.from],
                to: index.pos[&t.to],
                eq: vec![Vec::new(); n],
                neq: vec![Vec::new(); n],
                writes: vec![Vec::new(); n],
            };
            for lit in literals(&t.label.guard, k)? {
                let side = if lit.eq { &mut p.eq } else { &mut p.neq };
                side[lit.component - 1].push(lit.register - 1);
            }
            for (reg, src) in t.label.action.effect(a.registers).into_iter().enumerate() {
                if let Some(j) = src {
                    p.writes[j - 1].push(reg);
                }
            }
            Ok(p)
        })
        .collect()
}

fn fmt_map(r: &[usize]) -> String {
    let parts: Vec<String> = r.iter().map(|x| (x + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

struct RaBuilder<'a> {
    a: &'a ToplAutomaton,
    prep: Vec<Prepared>,
    outgoing: Vec<Vec<usize>>,
    big: usize,
    states: IndexMap<String, ()>,
    mains: IndexMap<(usize, Vec<usize>), String>,
    queue: VecDeque<(usize, Vec<usize>)>,
    transitions: Vec<Transition<Label>>,
}

impl RaBuilder<'_> {
    fn main_state(&mut self, q: usize, r: Vec<usize>) -> String {
        if let Some(name) = self.mains.get(&(q, r.clone())) {
            return name.clone();
        }
        let name = format!("({},{})", self.a.states[q], fmt_map(&r));
        self.states.insert(name.clone(), ());
        self.mains.insert((q, r.clone()), name.clone());
        self.queue.push_back((q, r));
        name
    }

    fn smallest_outside(&self, taken: &HashSet<usize>) -> usize {
        (0..self.big)
            .find(|x| !taken.contains(x))
            .expect("2m+1 registers leave one free")
    }

    /// Reads component `j` (0-based) of transition `t` from state `src`.
    fn expand(&mut self, t: usize, j: usize, src: &str, main: &str, r0: &[usize], prev: &[usize]) {
        let p = &self.prep[t];
        let a0: Vec<usize> = {
            let mut v: Vec<usize> = p.eq[j].iter().map(|&i| r0[i]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let a1: HashSet<usize> = p.neq[j].iter().map(|&i| r0[i]).collect();
        if a0.len() >= 2 || a0.iter().any(|x| a1.contains(x)) {
            return;
        }
        let mut branches: Vec<Option<usize>> = Vec::new();
        if let [x] = a0.as_slice() {
            branches.push(Some(*x));
        } else {
            branches.push(None);
            branches.extend((0..self.big).filter(|x| !a1.contains(x)).map(Some));
        }
        let writes = p.writes[j].clone();
        let to = p.to;
        let last = j + 1 == self.a.arity;
        for branch in branches {
            let (label, k) = match branch {
                Some(x) => (Label::new(Guard::Eq(x + 1, 1), Action::nop()), x),
                None => {
                    let mut taken: HashSet<usize> = r0.iter().copied().collect();
                    taken.extend(
                        prev.iter()
                            .enumerate()
                            .filter(|(i, _)| !writes.contains(i))
                            .map(|(_, &x)| x),
                    );
                    let k = self.smallest_outside(&taken);
                    (Label::new(fresh_guard(self.big), Action::set(k + 1, 1)), k)
                }
            };
            let mut next = prev.to_vec();
            for &i in &writes {
                next[i] = k;
            }
            let dst = if last {
                self.main_state(to, next.clone())
            } else {
                format!("{main}/{t}.{}{}", j + 1, fmt_map(&next))
            };
            let new = !last && self.states.insert(dst.clone(), ()).is_none();
            self.transitions.push(Transition {
                from: src.to_string(),
                label,
                to: dst.clone(),
            });
            if new {
                self.expand(t, j + 1, &dst, main, r0, &next);
            }
        }
    }
}

/// Translates a TOPL automaton over `n`-tuples with `m` registers into a
/// register automaton with `2m+1` registers accepting `f(L)`, the flattened
/// language.
///
/// All `2m+1` registers hold pairwise distinct values at every point; main
/// states `(q, r)` record which register simulates each original register.
pub fn topl_to_ra(a: &ToplAutomaton) -> Result<RegisterAutomaton, TranslateError> {
    a.validate().map_err(TranslateError::Invalid)?;
    let prep = prepare(a)?;
    let m = a.registers;
    let big = 2 * m + 1;

    let mut distinct: Vec<Value> = Vec::new();
    let mut r_init = Vec::with_capacity(m);
    for v in a.store.values() {
        let pos = match distinct.iter().position(|d| d == v) {
            Some(p) => p,
            None => {
                distinct.push(v.clone());
                distinct.len() - 1
            }
        };
        r_init.push(pos);
    }
    let mut store = distinct;
    let mut junk = 0usize;
    while store.len() < big {
        let v = Value::atom(format!("#{junk}"));
        junk += 1;
        if !store.contains(&v) {
            store.push(v);
        }
    }

    let mut outgoing = vec![Vec::new(); a.states.len()];
    for (k, p) in prep.iter().enumerate() {
        outgoing[p.from].push(k);
    }
    let index = a.index();
    let mut b = RaBuilder {
        a,
        prep,
        outgoing,
        big,
        states: IndexMap::new(),
        mains: IndexMap::new(),
        queue: VecDeque::new(),
        transitions: Vec::new(),
    };
    let initial = b.main_state(index.initial, r_init);
    while let Some((q, r)) = b.queue.pop_front() {
        let name = b.mains[&(q, r.clone())].clone();
        for t in b.outgoing[q].clone() {
            b.expand(t, 0, &name, &name, &r, &r);
        }
    }
    let finals = b
        .mains
        .iter()
        .filter(|((q, _), _)| index.is_final[*q])
        .map(|(_, name)| name.clone())
        .collect();
    Ok(RegisterAutomaton(ToplAutomaton {
        arity: 1,
        registers: big,
        states: b.states.into_keys().collect(),
        initial,
        store: Store::new(store),
        finals,
        transitions: b.transitions,
    }))
}

/// Decides emptiness by reachability of a final state; any path is
/// realizable because fresh values are always available. The witness is
/// replayed through the automaton before being returned.
pub fn ra_emptiness(ra: &RegisterAutomaton) -> Result<Emptiness, TranslateError> {
    let a = &ra.0;
    let index = a.index();
    let mut parent: IndexMap<usize, Option<usize>> = IndexMap::new();
    parent.insert(index.initial, None);
    let mut queue = VecDeque::from([index.initial]);
    let mut goal = None;
    while let Some(q) = queue.pop_front() {
        if index.is_final[q] {
            goal = Some(q);
            break;
        }
        for &t in &index.outgoing[q] {
            let to = index.target[t];
            if !parent.contains_key(&to) {
                parent.insert(to, Some(t));
                queue.push_back(to);
            }
        }
    }
    let Some(mut q) = goal else {
        return Ok(Emptiness::Empty);
    };
    let mut path = Vec::new();
    while let Some(Some(t)) = parent.get(&q) {
        path.push(*t);
        q = index.pos[&a.transitions[*t].from];
    }
    path.reverse();

    let mut store = a.store.clone();
    let mut counter = 0usize;
    let mut word = Vec::with_capacity(path.len());
    for t in path {
        let v = match classify(a, t)? {
            RaLabel::Eq(i) => store.get(i).clone(),
            RaLabel::Fresh(_) => loop {
                let v = Value::atom(format!("w{counter}"));
                counter += 1;
                if !store.values().contains(&v) {
                    break v;
                }
            },
        };
        let letter = Letter::new(vec![v]);
        a.transitions[t].label.action.apply_in_place(&letter, &mut store);
        word.push(letter);
    }
    if !accepts(a, &word) {
        return Err(TranslateError::Internal(
            "register-automaton witness rejected on replay".into(),
        ));
    }
    Ok(Emptiness::NonEmpty(word))
}
