//! Guards, actions and method-name patterns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::IndexError;
use crate::value::{EventKind, Letter, Store, Value};

/// A glob over fully qualified method names.
///
/// `*` matches any (possibly empty) run of characters, dots included. A
/// pattern holds one alternative per prefix expansion; it matches a name when
/// any alternative does, or when none does if `negated` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MethodPattern {
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
}

impl MethodPattern {
    pub fn exact(name: impl Into<String>) -> Self {
        MethodPattern {
            names: vec![name.into()],
            negated: false,
        }
    }

    pub fn any() -> Self {
        Self::exact("*")
    }

    pub fn matches(&self, method: &str) -> bool {
        self.names.iter().any(|p| glob_match(p, method)) != self.negated
    }
}

impl fmt::Display for MethodPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        f.write_str(&self.names.join("|"))
    }
}

fn glob_match(pattern: &str, text: &str) -> bool {
    if !pattern.contains('*') {
        return pattern == text;
    }
    let p = pattern.as_bytes();
    let t = text.as_bytes();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == b'*')
}

/// Guard formulas over a store and the current letter. Indices are 1-based:
/// `Eq(i, j)` compares register `i` with letter component `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    Eq(usize, usize),
    Neq(usize, usize),
    True,
    And(Box<Guard>, Box<Guard>),
    /// Holds when component `component` is the event id `kind m` for some
    /// method `m` matching `pattern`. Only emitted by the property compiler.
    MethodMatch {
        component: usize,
        kind: EventKind,
        pattern: MethodPattern,
    },
}

impl Guard {
    pub fn and(self, other: Guard) -> Guard {
        match (self, other) {
            (Guard::True, g) | (g, Guard::True) => g,
            (a, b) => Guard::And(Box::new(a), Box::new(b)),
        }
    }

    /// Conjunction of all guards, `True` when empty. Nested left to right.
    pub fn all(guards: impl IntoIterator<Item = Guard>) -> Guard {
        guards.into_iter().fold(Guard::True, Guard::and)
    }

    /// The atomic conjuncts of this guard (`True` contributes nothing).
    pub fn conjuncts(&self) -> Vec<&Guard> {
        let mut out = Vec::new();
        self.collect_conjuncts(&mut out);
        out
    }

    fn collect_conjuncts<'a>(&'a self, out: &mut Vec<&'a Guard>) {
        match self {
            Guard::True => {}
            Guard::And(a, b) => {
                a.collect_conjuncts(out);
                b.collect_conjuncts(out);
            }
            g => out.push(g),
        }
    }

    pub fn has_method_match(&self) -> bool {
        self.conjuncts()
            .iter()
            .any(|g| matches!(g, Guard::MethodMatch { .. }))
    }

    /// Evaluates the guard, reporting out-of-range indices as errors.
    pub fn eval(&self, s: &Store, l: &Letter) -> Result<bool, IndexError> {
        self.check_bounds(s.len(), l.arity())?;
        Ok(self.holds(s, l))
    }

    /// Evaluates a guard whose indices are known to be in range.
    pub fn holds(&self, s: &Store, l: &Letter) -> bool {
        match self {
            Guard::Eq(i, j) => s.get(*i) == l.get(*j),
            Guard::Neq(i, j) => s.get(*i) != l.get(*j),
            Guard::True => true,
            Guard::And(a, b) => a.holds(s, l) && b.holds(s, l),
            Guard::MethodMatch {
                component,
                kind,
                pattern,
            } => match l.get(*component) {
                Value::EventId { kind: k, method } => k == kind && pattern.matches(method),
                _ => false,
            },
        }
    }

    pub fn check_bounds(&self, registers: usize, arity: usize) -> Result<(), IndexError> {
        let letter = |j: usize| {
            if j == 0 || j > arity {
                Err(IndexError::Component { index: j, arity })
            } else {
                Ok(())
            }
        };
        let register = |i: usize| {
            if i == 0 || i > registers {
                Err(IndexError::Register { index: i, registers })
            } else {
                Ok(())
            }
        };
        match self {
            Guard::Eq(i, j) | Guard::Neq(i, j) => {
                register(*i)?;
                letter(*j)
            }
            Guard::True => Ok(()),
            Guard::And(a, b) => {
                a.check_bounds(registers, arity)?;
                b.check_bounds(registers, arity)
            }
            Guard::MethodMatch { component, .. } => letter(*component),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Eq(i, j) => write!(f, "eq {i} {j}"),
            Guard::Neq(i, j) => write!(f, "neq {i} {j}"),
            Guard::True => f.write_str("true"),
            Guard::And(a, b) => write!(f, "{a} and {b}"),
            Guard::MethodMatch {
                component,
                kind,
                pattern,
            } => write!(f, "{kind} {pattern} @{component}"),
        }
    }
}

/// `set register := component`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assign {
    pub register: usize,
    pub component: usize,
}

/// A sequence of assignments applied left to right; the empty action is `nop`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Action(pub Vec<Assign>);

impl Action {
    pub fn nop() -> Self {
        Action(Vec::new())
    }

    pub fn set(register: usize, component: usize) -> Self {
        Action(vec![Assign {
            register,
            component,
        }])
    }

    pub fn is_nop(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ; other`.
    pub fn then(mut self, other: Action) -> Action {
        self.0.extend(other.0);
        self
    }

    pub fn apply(&self, l: &Letter, s: &Store) -> Result<Store, IndexError> {
        self.check_bounds(s.len(), l.arity())?;
        Ok(self.apply_unchecked(l, s))
    }

    pub fn apply_unchecked(&self, l: &Letter, s: &Store) -> Store {
        let mut out = s.clone();
        self.apply_in_place(l, &mut out);
        out
    }

    pub fn apply_in_place(&self, l: &Letter, s: &mut Store) {
        for a in &self.0 {
            s.set(a.register, l.get(a.component).clone());
        }
    }

    /// Final source component of every register written by this action.
    pub fn effect(&self, registers: usize) -> Vec<Option<usize>> {
        let mut eff = vec![None; registers];
        for a in &self.0 {
            eff[a.register - 1] = Some(a.component);
        }
        eff
    }

    pub fn check_bounds(&self, registers: usize, arity: usize) -> Result<(), IndexError> {
        for a in &self.0 {
            if a.register == 0 || a.register > registers {
                return Err(IndexError::Register {
                    index: a.register,
                    registers,
                });
            }
            if a.component == 0 || a.component > arity {
                return Err(IndexError::Component {
                    index: a.component,
                    arity,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("nop");
        }
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "set {}:={}", a.register, a.component)?;
        }
        Ok(())
    }
}

/// A transition label `(guard, action)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub guard: Guard,
    pub action: Action,
}

impl Label {
    pub fn new(guard: Guard, action: Action) -> Self {
        Label { guard, action }
    }

    /// Fires the label on `l` from `s`: `Some(s')` when the guard holds.
    pub fn fire(&self, s: &Store, l: &Letter) -> Option<Store> {
        if self.guard.holds(s, l) {
            Some(self.action.apply_unchecked(l, s))
        } else {
            None
        }
    }

    pub fn check_bounds(&self, registers: usize, arity: usize) -> Result<(), IndexError> {
        self.guard.check_bounds(registers, arity)?;
        self.action.check_bounds(registers, arity)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.guard, self.action)
    }
}

/// Free-function form of [`Guard::eval`].
pub fn eval_guard(g: &Guard, s: &Store, l: &Letter) -> Result<bool, IndexError> {
    g.eval(s, l)
}

/// Free-function form of [`Action::apply`].
pub fn apply_action(a: &Action, l: &Letter, s: &Store) -> Result<Store, IndexError> {
    a.apply(l, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq_identity() {
        let s = Store::atoms(&["a"]);
        let l = Letter::atoms(&["a"]);
        assert_eq!(eval_guard(&Guard::Eq(1, 1), &s, &l), Ok(true));
        assert_eq!(eval_guard(&Guard::Neq(1, 1), &s, &l), Ok(false));
    }

    #[test]
    fn final_guard_of_three_letter_example() {
        let g = Guard::Neq(1, 1).and(Guard::Neq(2, 1));
        let s = Store::atoms(&["a", "b"]);
        assert_eq!(eval_guard(&g, &s, &Letter::atoms(&["c"])), Ok(true));
        assert_eq!(eval_guard(&g, &s, &Letter::atoms(&["b"])), Ok(false));
    }

    #[test]
    fn out_of_range_is_structural() {
        let s = Store::atoms(&["a", "b"]);
        let l = Letter::atoms(&["a"]);
        assert!(matches!(
            eval_guard(&Guard::Eq(3, 1), &s, &l),
            Err(IndexError::Register { index: 3, .. })
        ));
        assert!(matches!(
            eval_guard(&Guard::Eq(1, 2), &s, &l),
            Err(IndexError::Component { index: 2, .. })
        ));
        assert!(apply_action(&Action::set(0, 1), &l, &s).is_err());
    }

    #[test]
    fn actions() {
        let s = Store::atoms(&["a", "b"]);
        assert_eq!(
            apply_action(&Action::nop(), &Letter::atoms(&["x"]), &s),
            Ok(s.clone())
        );
        let a = Action::set(2, 2).then(Action::set(3, 3));
        assert_eq!(
            apply_action(
                &a,
                &Letter::atoms(&["next", "v0", "v1"]),
                &Store::atoms(&["next", "v0", "v0"])
            ),
            Ok(Store::atoms(&["next", "v0", "v1"]))
        );
        let twice = Action::set(1, 1).then(Action::set(1, 1));
        assert_eq!(
            apply_action(&twice, &Letter::atoms(&["x"]), &Store::atoms(&["a"])),
            Ok(Store::atoms(&["x"]))
        );
    }

    #[test]
    fn later_assignment_wins() {
        let a = Action::set(1, 1).then(Action::set(1, 2));
        let out = a.apply_unchecked(&Letter::atoms(&["x", "y"]), &Store::atoms(&["a"]));
        assert_eq!(out, Store::atoms(&["y"]));
        assert_eq!(a.effect(1), vec![Some(2)]);
    }

    #[test]
    fn method_match() {
        let g = Guard::MethodMatch {
            component: 1,
            kind: EventKind::Call,
            pattern: MethodPattern {
                names: vec!["get*".into(), "java.util.*.get*".into()],
                negated: false,
            },
        };
        let s = Store::new(vec![]);
        let call = |m: &str| Letter::new(vec![Value::event(EventKind::Call, m)]);
        assert!(g.holds(&s, &call("getParameter")));
        assert!(g.holds(&s, &call("java.util.Map.get")));
        assert!(!g.holds(&s, &call("put")));
        assert!(!g.holds(&s, &Letter::new(vec![Value::event(EventKind::Ret, "get")])));
        assert!(!g.holds(&s, &Letter::atoms(&["get"])));
    }

    #[test]
    fn glob() {
        assert!(glob_match("*", ""));
        assert!(glob_match("a*c", "abbbc"));
        assert!(glob_match("a*c", "ac"));
        assert!(!glob_match("a*c", "acb"));
        assert!(glob_match("*.next", "java.util.Iterator.next"));
        assert!(!glob_match("next", "java.util.Iterator.next"));
        let neg = MethodPattern {
            names: vec!["sanitize".into()],
            negated: true,
        };
        assert!(!neg.matches("sanitize"));
        assert!(neg.matches("input"));
    }

    #[test]
    fn guard_json() {
        let g = Guard::Eq(1, 1).and(Guard::Neq(2, 3));
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"and":[{"eq":[1,1]},{"neq":[2,3]}]}"#);
        assert_eq!(serde_json::to_string(&Guard::True).unwrap(), r#""true""#);
        assert_eq!(serde_json::from_str::<Guard>(&text).unwrap(), g);
    }
}
