//! Random automata and brute-force reference semantics shared by the
//! integration tests. The oracles evaluate guards and actions themselves and
//! enumerate every run, so they share no code with the library's simulators.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use topl::automaton::Automaton;
use topl::translate::RegisterAutomaton;
use topl::{Action, Assign, Guard, HlAutomaton, Label, Letter, Store, ToplAutomaton, Transition, Value, Word};

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

pub fn universe() -> Vec<Value> {
    ATOMS.iter().map(Value::atom).collect()
}

/// Every word of length at most `max_len` whose letters have `arity`
/// components drawn from `values`.
pub fn all_words(arity: usize, max_len: usize, values: &[Value]) -> Vec<Word> {
    let mut letters: Vec<Vec<Value>> = vec![Vec::new()];
    for _ in 0..arity {
        letters = letters
            .into_iter()
            .flat_map(|l| {
                values.iter().map(move |v| {
                    let mut l = l.clone();
                    l.push(v.clone());
                    l
                })
            })
            .collect();
    }
    let letters: Vec<Letter> = letters.into_iter().map(Letter::new).collect();
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn random_word(rng: &mut StdRng, arity: usize, len: usize) -> Word {
    let u = universe();
    (0..len)
        .map(|_| Letter::new((0..arity).map(|_| u.choose(rng).unwrap().clone()).collect()))
        .collect()
}

fn random_value(rng: &mut StdRng) -> Value {
    if rng.gen_bool(0.25) {
        Value::Bottom
    } else {
        Value::atom(ATOMS[rng.gen_range(0..ATOMS.len())])
    }
}

fn random_guard(rng: &mut StdRng, registers: usize, arity: usize) -> Guard {
    if registers == 0 {
        return Guard::True;
    }
    let k = rng.gen_range(0..=2);
    Guard::all((0..k).map(|_| {
        let i = rng.gen_range(1..=registers);
        let j = rng.gen_range(1..=arity);
        if rng.gen_bool(0.5) {
            Guard::Eq(i, j)
        } else {
            Guard::Neq(i, j)
        }
    }))
}

fn random_action(rng: &mut StdRng, registers: usize, arity: usize) -> Action {
    let mut assigns = Vec::new();
    for r in 1..=registers {
        if rng.gen_bool(0.35) {
            assigns.push(Assign {
                register: r,
                component: rng.gen_range(1..=arity),
            });
        }
    }
    assigns.shuffle(rng);
    Action(assigns)
}

fn random_label(rng: &mut StdRng, registers: usize, arity: usize) -> Label {
    Label::new(
        random_guard(rng, registers, arity),
        random_action(rng, registers, arity),
    )
}

fn skeleton<L>(
    rng: &mut StdRng,
    registers: usize,
    arity: usize,
    mut label: impl FnMut(&mut StdRng) -> L,
) -> Automaton<L> {
    let q = rng.gen_range(1..=4);
    let states: Vec<String> = (0..q).map(|i| format!("q{i}")).collect();
    let mut finals: Vec<String> = states.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    if finals.is_empty() && rng.gen_bool(0.8) {
        finals.push(states[rng.gen_range(0..q)].clone());
    }
    let t = rng.gen_range(0..=6);
    let transitions = (0..t)
        .map(|_| Transition {
            from: states[rng.gen_range(0..q)].clone(),
            label: label(rng),
            to: states[rng.gen_range(0..q)].clone(),
        })
        .collect();
    Automaton {
        arity,
        registers,
        initial: states[0].clone(),
        states,
        store: Store::new((0..registers).map(|_| random_value(rng)).collect()),
        finals,
        transitions,
    }
}

/// |Q| ≤ 4, m ≤ 2, n ≤ 2.
pub fn random_topl(rng: &mut StdRng) -> ToplAutomaton {
    let m = rng.gen_range(0..=2);
    let n = rng.gen_range(1..=2);
    skeleton(rng, m, n, |rng| random_label(rng, m, n))
}

/// |Q| ≤ 4, m ≤ 2, n ≤ 2, labels of length at most `d`.
pub fn random_hl(rng: &mut StdRng, d: usize) -> HlAutomaton {
    let m = rng.gen_range(0..=2);
    let n = rng.gen_range(1..=2);
    random_hl_shaped(rng, m, n, d)
}

pub fn random_hl_shaped(rng: &mut StdRng, m: usize, n: usize, d: usize) -> HlAutomaton {
    skeleton(rng, m, n, |rng| {
        let len = rng.gen_range(1..=d);
        (0..len).map(|_| random_label(rng, m, n)).collect()
    })
}

/// A register automaton with 1 or 2 registers: each label is `eq i` or
/// `fresh; set i`.
pub fn random_ra(rng: &mut StdRng) -> RegisterAutomaton {
    let m = rng.gen_range(1..=2);
    let a = skeleton(rng, m, 1, |rng| {
        let i = rng.gen_range(1..=m);
        if rng.gen_bool(0.5) {
            Label::new(Guard::Eq(i, 1), Action::nop())
        } else {
            Label::new(
                Guard::all((1..=m).map(|r| Guard::Neq(r, 1))),
                Action::set(i, 1),
            )
        }
    });
    RegisterAutomaton::try_from(a).expect("generated labels are register-automaton labels")
}

fn holds(g: &Guard, s: &[Value], l: &[Value]) -> bool {
    match g {
        Guard::Eq(i, j) => s[i - 1] == l[j - 1],
        Guard::Neq(i, j) => s[i - 1] != l[j - 1],
        Guard::True => true,
        Guard::And(a, b) => holds(a, s, l) && holds(b, s, l),
        Guard::MethodMatch { .. } => panic!("oracle does not handle method guards"),
    }
}

fn apply(a: &Action, s: &[Value], l: &[Value]) -> Vec<Value> {
    let mut out = s.to_vec();
    for x in &a.0 {
        out[x.register - 1] = l[x.component - 1].clone();
    }
    out
}

/// Runs `labels` on the front of `w` from store `s`, requiring exactly
/// `labels.len()` letters.
fn run_labels(labels: &[Label], s: &[Value], w: &[Letter]) -> Option<Vec<Value>> {
    if labels.len() > w.len() {
        return None;
    }
    let mut s = s.to_vec();
    for (lab, l) in labels.iter().zip(w) {
        if !holds(&lab.guard, &s, l.values()) {
            return None;
        }
        s = apply(&lab.action, &s, l.values());
    }
    Some(s)
}

/// TOPL membership by enumerating every run, with transitions indexed by
/// source state so that large translated automata stay cheap to query.
pub struct ToplOracle<'a> {
    a: &'a ToplAutomaton,
    out: HashMap<&'a str, Vec<&'a Transition<Label>>>,
    finals: HashSet<&'a str>,
}

impl<'a> ToplOracle<'a> {
    pub fn new(a: &'a ToplAutomaton) -> Self {
        let mut out: HashMap<&str, Vec<_>> = HashMap::new();
        for t in &a.transitions {
            out.entry(t.from.as_str()).or_default().push(t);
        }
        let finals = a.finals.iter().map(String::as_str).collect();
        ToplOracle { a, out, finals }
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.go(&self.a.initial, self.a.store.values(), w)
    }

    fn go(&self, q: &str, s: &[Value], w: &[Letter]) -> bool {
        let Some((l, rest)) = w.split_first() else {
            return self.finals.contains(q);
        };
        self.out.get(q).is_some_and(|ts| {
            ts.iter().any(|t| {
                holds(&t.label.guard, s, l.values())
                    && self.go(&t.to, &apply(&t.label.action, s, l.values()), rest)
            })
        })
    }
}

pub fn topl_oracle(a: &ToplAutomaton, w: &[Letter]) -> bool {
    ToplOracle::new(a).accepts(w)
}

/// High-level membership: standard transitions consume their whole label
/// sequence; a letter is skipped only when no standard transition applies.
pub fn hl_oracle(a: &HlAutomaton, w: &[Letter]) -> bool {
    fn go(a: &HlAutomaton, q: &str, s: &[Value], w: &[Letter]) -> bool {
        if w.is_empty() {
            return a.finals.iter().any(|f| f == q);
        }
        let moves: Vec<(&str, usize, Vec<Value>)> = a
            .transitions
            .iter()
            .filter(|t| t.from == q)
            .filter_map(|t| run_labels(&t.label, s, w).map(|s2| (t.to.as_str(), t.label.len(), s2)))
            .collect();
        if moves.is_empty() {
            return go(a, q, s, &w[1..]);
        }
        moves.iter().any(|(to, k, s2)| go(a, to, s2, &w[*k..]))
    }
    go(a, &a.initial, a.store.values(), w)
}

/// Register-automaton non-emptiness by trying every word of length at most
/// |Q| over the initial register values plus m+1 fresh atoms.
pub fn ra_small_model_nonempty(ra: &RegisterAutomaton) -> bool {
    let a = ra.as_topl();
    let mut values: Vec<Value> = Vec::new();
    for v in a.store.values() {
        if !values.contains(v) {
            values.push(v.clone());
        }
    }
    values.extend((0..=a.registers).map(|k| Value::atom(format!("fresh{k}"))));
    let oracle = ToplOracle::new(a);
    all_words(1, a.states.len(), &values)
        .iter()
        .any(|w| oracle.accepts(w))
}

pub fn is_prefix_accepted(a: &HlAutomaton, w: &[Letter]) -> Vec<usize> {
    (1..=w.len()).filter(|&k| hl_oracle(a, &w[..k])).collect()
}
