//! High-level automata into TOPL automata.
//!
//! A high-level transition may need up to `d` letters before it can be
//! tested, so the TOPL automaton buffers the last `d - 1` letters in extra
//! registers and decides a step once `d` letters are known. Guards of the
//! buffered transitions can then no longer be evaluated against the letter
//! directly, so the construction tracks equalities symbolically: every
//! TOPL state knows, for each high-level register and each buffered letter
//! component, which TOPL register holds its value. Registers hold pairwise
//! distinct values except for a recorded set of pairs whose equality is
//! unknown; such pairs arise when two components of one letter are both
//! fresh, since TOPL guards only compare a component against a register.
//!
//! Each incoming letter is split, by parallel transitions with mutually
//! exclusive guards, into every possible equality pattern against the live
//! registers. With the pattern known, a high-level step is a static
//! computation over register identities.

use std::collections::{HashSet, VecDeque};

use indexmap::IndexMap;

use super::{literals, Lit};
use crate::automaton::{ToplAutomaton, Transition};
use crate::error::TranslateError;
use crate::guard::{Action, Assign, Guard, Label};
use crate::hl::HlAutomaton;
use crate::value::{Store, Value};

type Reg = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Sym {
    q: usize,
    /// Number of buffered letters.
    h: usize,
    /// Ring position of the oldest buffered letter.
    k: usize,
    /// Slot contents: `m` high-level registers then `d * n` buffer
    /// components. Registers are 0-based; `None` means unused.
    r: Vec<Option<Reg>>,
    /// Pairs `(a, b)`, `a < b`, of registers that may hold equal values.
    unknown: Vec<(Reg, Reg)>,
}

/// How one letter component relates to the live registers.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Typing {
    Fresh,
    Match(Vec<Reg>),
}

struct PreparedStep {
    lits: Vec<Lit>,
    assigns: Vec<Assign>,
}

struct Ctx<'a> {
    a: &'a HlAutomaton,
    m: usize,
    n: usize,
    d: usize,
    real: usize,
    outgoing: Vec<Vec<usize>>,
    target: Vec<usize>,
    is_final: Vec<bool>,
    labels: Vec<Vec<PreparedStep>>,
    /// Per state, the high-level registers some run may still read.
    live: Vec<Vec<bool>>,
    /// Letter components read by some guard or action.
    read: Vec<bool>,
}

/// Registers that may be read by a guard before being overwritten, per
/// state. A register that is not live can be forgotten.
fn liveness(m: usize, outgoing: &[Vec<usize>], target: &[usize], labels: &[Vec<PreparedStep>]) -> Vec<Vec<bool>> {
    let mut live = vec![vec![false; m]; outgoing.len()];
    loop {
        let mut changed = false;
        for q in 0..outgoing.len() {
            for &t in &outgoing[q] {
                let mut l = live[target[t]].clone();
                for step in labels[t].iter().rev() {
                    for a in &step.assigns {
                        l[a.register - 1] = false;
                    }
                    for lit in &step.lits {
                        l[lit.register - 1] = true;
                    }
                }
                for i in 0..m {
                    if l[i] && !live[q][i] {
                        live[q][i] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return live;
        }
    }
}

fn pair(a: Reg, b: Reg) -> (Reg, Reg) {
    (a.min(b), a.max(b))
}

impl Ctx<'_> {
    fn slot(&self, pos: usize, c: usize) -> usize {
        self.m + pos * self.n + c
    }

    /// All standard steps from a buffer holding `h` letters, or the skip of
    /// the oldest letter if none applies.
    fn steps(&self, s: &Sym) -> Result<Vec<Sym>, TranslateError> {
        let mut out = Vec::new();
        for &t in &self.outgoing[s.q] {
            let seq = &self.labels[t];
            if seq.len() > s.h {
                continue;
            }
            let mut r = s.r.clone();
            let mut ok = true;
            'labels: for (i, step) in seq.iter().enumerate() {
                let pos = (s.k + i) % self.d;
                for lit in &step.lits {
                    let x = r[lit.register - 1];
                    let y = r[self.slot(pos, lit.component - 1)];
                    let equal = match (x, y) {
                        (Some(x), Some(y)) if x == y => true,
                        (Some(x), Some(y)) if s.unknown.contains(&pair(x, y)) => {
                            return Err(TranslateError::Internal(format!(
                                "undetermined equality between registers {} and {}",
                                x + 1,
                                y + 1
                            )));
                        }
                        _ => false,
                    };
                    if equal != lit.eq {
                        ok = false;
                        break 'labels;
                    }
                }
                for a in &step.assigns {
                    r[a.register - 1] = r[self.slot(pos, a.component - 1)];
                }
            }
            if ok {
                for i in 0..seq.len() {
                    self.clear(&mut r, (s.k + i) % self.d);
                }
                out.push(Sym {
                    q: self.target[t],
                    h: s.h - seq.len(),
                    k: (s.k + seq.len()) % self.d,
                    r,
                    unknown: s.unknown.clone(),
                });
            }
        }
        if out.is_empty() && s.h > 0 {
            let mut r = s.r.clone();
            self.clear(&mut r, s.k);
            out.push(Sym {
                q: s.q,
                h: s.h - 1,
                k: (s.k + 1) % self.d,
                r,
                unknown: s.unknown.clone(),
            });
        }
        Ok(out)
    }

    /// Forgets registers that can no longer be read.
    fn forget(&self, s: &mut Sym) {
        for i in 0..self.m {
            if !self.live[s.q][i] {
                s.r[i] = None;
            }
        }
    }

    fn clear(&self, r: &mut [Option<Reg>], pos: usize) {
        for c in 0..self.n {
            r[self.slot(pos, c)] = None;
        }
    }

    /// Whether the input may end here: some run consuming the buffer
    /// reaches a final state.
    fn accepting(&self, s: &Sym) -> Result<bool, TranslateError> {
        let mut seen = HashSet::new();
        let mut stack = vec![s.clone()];
        while let Some(s) = stack.pop() {
            if s.h == 0 && self.is_final[s.q] {
                return Ok(true);
            }
            if s.h == 0 {
                continue;
            }
            for next in self.steps(&s)? {
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        Ok(false)
    }

    /// Every consistent equality pattern of a letter against `used`.
    fn typings(&self, used: &[Reg], unknown: &[(Reg, Reg)]) -> Vec<Vec<Typing>> {
        let mut options = vec![Typing::Fresh];
        for mask in 1u64..(1u64 << used.len()) {
            let set: Vec<Reg> = (0..used.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| used[i])
                .collect();
            let clique = set
                .iter()
                .enumerate()
                .all(|(i, &x)| set[i + 1..].iter().all(|&y| unknown.contains(&pair(x, y))));
            if clique {
                options.push(Typing::Match(set));
            }
        }
        let mut out: Vec<Vec<Typing>> = vec![Vec::new()];
        for c in 0..self.n {
            let options = if self.read[c] { &options[..] } else { &options[..1] };
            let mut next = Vec::new();
            for prefix in &out {
                for opt in options {
                    let compatible = match opt {
                        Typing::Fresh => true,
                        Typing::Match(s) => prefix.iter().all(|p| match p {
                            Typing::Fresh => true,
                            Typing::Match(t) => t == s || t.iter().all(|x| !s.contains(x)),
                        }),
                    };
                    if compatible {
                        let mut p = prefix.clone();
                        p.push(opt.clone());
                        next.push(p);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Moves values held in virtual registers (`>= real`) into the
    /// smallest free real registers, returning the assignments that do so.
    fn materialize(&self, s: &mut Sym) -> Result<Vec<Assign>, TranslateError> {
        self.forget(s);
        let live: HashSet<Reg> = s.r.iter().flatten().copied().collect();
        s.unknown
            .retain(|(a, b)| live.contains(a) && live.contains(b));
        let mut free = (0..self.real).filter(|x| !live.contains(x));
        let mut assigns = Vec::new();
        let mut rename = IndexMap::new();
        for c in 0..self.n {
            let v = self.real + c;
            if live.contains(&v) {
                let x = free.next().ok_or_else(|| {
                    TranslateError::Internal("out of buffer registers".into())
                })?;
                rename.insert(v, x);
                assigns.push(Assign {
                    register: x + 1,
                    component: c + 1,
                });
            }
        }
        for slot in s.r.iter_mut().flatten() {
            if let Some(&x) = rename.get(slot) {
                *slot = x;
            }
        }
        let mut unknown: Vec<(Reg, Reg)> = s
            .unknown
            .iter()
            .map(|&(a, b)| {
                let f = |x: Reg| *rename.get(&x).unwrap_or(&x);
                pair(f(a), f(b))
            })
            .collect();
        unknown.sort_unstable();
        unknown.dedup();
        s.unknown = unknown;
        Ok(assigns)
    }

    /// All TOPL transitions leaving `s`: one per letter typing and
    /// resulting high-level step.
    fn successors(&self, s: &Sym) -> Result<Vec<(Label, Sym)>, TranslateError> {
        let mut used: Vec<Reg> = s.r.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let mut out = Vec::new();
        for typing in self.typings(&used, &s.unknown) {
            let mut guard = Vec::new();
            let mut r = s.r.clone();
            let mut unknown = s.unknown.clone();
            let mut regs = Vec::with_capacity(self.n);
            for (c, ty) in typing.iter().enumerate() {
                let j = c + 1;
                match ty {
                    Typing::Fresh if !self.read[c] => regs.push(self.real + c),
                    Typing::Fresh => {
                        guard.extend(used.iter().map(|&x| Guard::Neq(x + 1, j)));
                        regs.push(self.real + c);
                    }
                    Typing::Match(set) => {
                        for &x in &used {
                            guard.push(if set.contains(&x) {
                                Guard::Eq(x + 1, j)
                            } else {
                                Guard::Neq(x + 1, j)
                            });
                        }
                        let rep = set[0];
                        for slot in r.iter_mut().flatten() {
                            if set.contains(slot) {
                                *slot = rep;
                            }
                        }
                        unknown.retain(|(a, b)| !set.contains(a) && !set.contains(b));
                        regs.push(rep);
                    }
                }
            }
            for c1 in 0..self.n {
                for c2 in c1 + 1..self.n {
                    let both_fresh = typing[c1] == Typing::Fresh && typing[c2] == Typing::Fresh;
                    if both_fresh && self.read[c1] && self.read[c2] {
                        unknown.push(pair(self.real + c1, self.real + c2));
                    }
                }
            }
            let pos = (s.k + s.h) % self.d;
            for (c, &x) in regs.iter().enumerate() {
                if self.read[c] {
                    r[self.slot(pos, c)] = Some(x);
                }
            }
            let filled = Sym {
                q: s.q,
                h: s.h + 1,
                k: s.k,
                r,
                unknown,
            };
            let nexts = if filled.h < self.d {
                vec![filled]
            } else {
                self.steps(&filled)?
            };
            for mut next in nexts {
                let assigns = self.materialize(&mut next)?;
                let label = Label::new(Guard::all(guard.iter().cloned()), Action(assigns));
                out.push((label, next));
            }
        }
        Ok(out)
    }

    fn name(&self, s: &Sym) -> String {
        let r: Vec<String> = s
            .r
            .iter()
            .map(|x| x.map_or("_".to_string(), |x| (x + 1).to_string()))
            .collect();
        let mut name = format!("({},{},{},[{}])", self.a.states[s.q], s.h, s.k, r.join(","));
        if !s.unknown.is_empty() {
            let u: Vec<String> = s
                .unknown
                .iter()
                .map(|(a, b)| format!("{}~{}", a + 1, b + 1))
                .collect();
            name.push_str(&format!("{{{}}}", u.join(",")));
        }
        name
    }
}

/// Translates a high-level automaton with `m` registers over `n`-tuples,
/// with label sequences of length at most `d`, into a TOPL automaton with
/// `m + (d-1)n` registers accepting the same language.
pub fn hl_to_topl(a: &HlAutomaton) -> Result<ToplAutomaton, TranslateError> {
    hl_to_topl_limited(a, usize::MAX)
}

/// [`hl_to_topl`], giving up with [`TranslateError::TooLarge`] once more
/// than `max_states` states are built. The construction is exponential in
/// `m + (d-1)n` in the worst case.
pub fn hl_to_topl_limited(a: &HlAutomaton, max_states: usize) -> Result<ToplAutomaton, TranslateError> {
    a.validate().map_err(TranslateError::Invalid)?;
    let index = a.index();
    let (m, n, d) = (a.registers, a.arity, a.max_label_len());
    let real = m + (d - 1) * n;
    let labels = a
        .transitions
        .iter()
        .enumerate()
        .map(|(k, t)| {
            t.label
                .iter()
                .map(|l| {
                    Ok(PreparedStep {
                        lits: literals(&l.guard, k)?,
                        assigns: l.action.0.clone(),
                    })
                })
                .collect::<Result<Vec<_>, TranslateError>>()
        })
        .collect::<Result<Vec<_>, TranslateError>>()?;
    let mut read = vec![false; n];
    for step in labels.iter().flatten() {
        for lit in &step.lits {
            read[lit.component - 1] = true;
        }
        for a in &step.assigns {
            read[a.component - 1] = true;
        }
    }
    let ctx = Ctx {
        a,
        m,
        n,
        d,
        real,
        live: liveness(m, &index.outgoing, &index.target, &labels),
        outgoing: index.outgoing.clone(),
        target: index.target.clone(),
        is_final: index.is_final.clone(),
        labels,
        read,
    };

    let mut distinct: Vec<Value> = Vec::new();
    let mut r = vec![None; m + d * n];
    for (i, v) in a.store.values().iter().enumerate() {
        let x = match distinct.iter().position(|u| u == v) {
            Some(x) => x,
            None => {
                distinct.push(v.clone());
                distinct.len() - 1
            }
        };
        r[i] = Some(x);
    }
    let mut store = distinct;
    store.resize(real, Value::Bottom);
    let mut start = Sym {
        q: index.initial,
        h: 0,
        k: 0,
        r,
        unknown: Vec::new(),
    };
    ctx.forget(&mut start);

    let mut ids: IndexMap<Sym, String> = IndexMap::new();
    let mut queue = VecDeque::new();
    let initial = ctx.name(&start);
    ids.insert(start.clone(), initial.clone());
    queue.push_back(start);
    let mut transitions = Vec::new();
    let mut finals = Vec::new();
    while let Some(s) = queue.pop_front() {
        let from = ids[&s].clone();
        if ctx.accepting(&s)? {
            finals.push(from.clone());
        }
        for (label, next) in ctx.successors(&s)? {
            let to = match ids.get(&next) {
                Some(id) => id.clone(),
                None => {
                    if ids.len() >= max_states {
                        return Err(TranslateError::TooLarge { limit: max_states });
                    }
                    let id = ctx.name(&next);
                    ids.insert(next.clone(), id.clone());
                    queue.push_back(next);
                    id
                }
            };
            transitions.push(Transition { from: from.clone(), label, to });
        }
    }
    Ok(ToplAutomaton {
        arity: n,
        registers: real,
        states: ids.into_values().collect(),
        initial,
        store: Store::new(store),
        finals,
        transitions,
    })
}
