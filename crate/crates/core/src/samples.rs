//! Small reference automata used throughout the tests, examples and docs.

use crate::automaton::{ToplAutomaton, Transition};
use crate::guard::{Action, Guard, Label};
use crate::hl::HlAutomaton;
use crate::value::{Store, Value};

fn t<L>(from: &str, label: L, to: &str) -> Transition<L> {
    Transition {
        from: from.into(),
        label,
        to: to.into(),
    }
}

fn names(qs: &[&str]) -> Vec<String> {
    qs.iter().map(|q| q.to_string()).collect()
}

/// Two registers over `V`, accepting `{abc | a≠c and b≠c}`.
pub fn three_letter() -> ToplAutomaton {
    ToplAutomaton {
        arity: 1,
        registers: 2,
        states: names(&["1", "2", "3", "4"]),
        initial: "1".into(),
        store: Store::new(vec![Value::Bottom, Value::Bottom]),
        finals: names(&["4"]),
        transitions: vec![
            t("1", Label::new(Guard::True, Action::set(1, 1)), "2"),
            t("2", Label::new(Guard::True, Action::set(2, 1)), "3"),
            t(
                "3",
                Label::new(Guard::Neq(1, 1).and(Guard::Neq(2, 1)), Action::nop()),
                "4",
            ),
        ],
    }
}

/// Detects a cycle in a `next`-linked list starting at `v0`.
///
/// Letters are `(next, node, successor)`; register 1 holds the constant
/// `next`, register 3 the current node, register 2 a guessed node that the
/// list later returns to.
pub fn list_cycle() -> ToplAutomaton {
    let chained = || Guard::Eq(1, 1).and(Guard::Eq(3, 2));
    ToplAutomaton {
        arity: 3,
        registers: 3,
        states: names(&["q0", "q1", "q2"]),
        initial: "q0".into(),
        store: Store::atoms(&["next", "v0", "v0"]),
        finals: names(&["q2"]),
        transitions: vec![
            t(
                "q0",
                Label::new(chained(), Action::set(2, 2).then(Action::set(3, 3))),
                "q1",
            ),
            t("q0", Label::new(chained(), Action::set(3, 3)), "q0"),
            t("q1", Label::new(chained(), Action::set(3, 3)), "q1"),
            t(
                "q1",
                Label::new(chained().and(Guard::Eq(2, 3)), Action::nop()),
                "q2",
            ),
            t("q2", Label::new(Guard::True, Action::nop()), "q2"),
            t(
                "q0",
                Label::new(chained().and(Guard::Eq(3, 3)), Action::nop()),
                "q2",
            ),
        ],
    }
}

/// Over `{A, B}`: words whose first `A` is not surrounded by two `B`s.
pub fn ab_hl() -> HlAutomaton {
    let eq = |i| Label::new(Guard::Eq(i, 1), Action::nop());
    HlAutomaton {
        arity: 1,
        registers: 2,
        states: names(&["1", "2", "3"]),
        initial: "1".into(),
        store: Store::atoms(&["A", "B"]),
        finals: names(&["3"]),
        transitions: vec![t("1", vec![eq(2), eq(1), eq(2)], "2"), t("1", vec![eq(1)], "3")],
    }
}

/// One `eq 1` transition from the initial to the final state, register 1
/// holding `v`. As a TOPL automaton it accepts only the word `v`.
pub fn remark_topl() -> ToplAutomaton {
    ToplAutomaton {
        arity: 1,
        registers: 1,
        states: names(&["q0", "q1"]),
        initial: "q0".into(),
        store: Store::atoms(&["v"]),
        finals: names(&["q1"]),
        transitions: vec![t("q0", Label::new(Guard::Eq(1, 1), Action::nop()), "q1")],
    }
}

/// [`remark_topl`] read as a high-level automaton: every word containing `v`.
pub fn remark_hl() -> HlAutomaton {
    crate::hl::singleton_labels(&remark_topl())
}

/// Taint tracking from `getParameter` through `concat` into `executeQuery`.
pub const TAINT_PROPERTY: &str = "\
property Taint
  prefix <javax.servlet.http.HttpServletRequest>
  prefix <java.lang.String>
  prefix <java.sql.Statement>
  start -> start:       *
  start -> tracking:    X := *.getParameter[*]
  tracking -> tracking: *
  tracking -> tracking: X := x.concat(*)
  tracking -> tracking: X := *.concat(x)
  tracking -> error:    *.executeQuery(x)
";

/// Two iterators over one collection: once either removes an element, the
/// other must not be used.
pub const ITERATOR_PROPERTY: &str = "\
property UnsafeIterators
  start -> start: *
  start -> one:   X := C.iterator()
  one -> one:     *
  one -> two:     Y := c.iterator()
  two -> xBad:    y.remove()
  two -> yBad:    x.remove()
  xBad -> error:  call x.*[*]
  yBad -> error:  call y.*[*]
";

/// Like [`ITERATOR_PROPERTY`], but the second iterator may belong to a rope
/// built from the first collection.
pub const ROPE_PROPERTY: &str = "\
property RopeIterators
  start -> start: *
  start -> a:     I := S.iterator()
  a -> a:         *
  a -> a:         S := make(s, *)
  a -> a:         S := make(*, s)
  a -> b:         J := s.iterator()
  b -> c:         i.set(*)
  b -> d:         j.set(*)
  c -> error:     j.next()
  d -> error:     i.next()
";

/// Input values, and values made from them, must be sanitized before
/// reaching `sink`.
pub const SANITIZE_PROPERTY: &str = "\
property Sanitize
  start -> start: *
  start -> a:     X := input()
  a -> a:         (!sanitize)(*)
  a -> a:         X := make(x, *)
  a -> a:         X := make(*, x)
  a -> b:         sanitize(x)
  a -> error:     sink(x)
";

/// An iterator is advanced only after a `hasNext` check.
pub const HAS_NEXT_PROPERTY: &str = "\
property HasNext
  start -> start:   *
  start -> fresh:   I := *.iterator[*]
  fresh -> checked: call i.hasNext()
  checked -> fresh: call i.next()
  fresh -> error:   call i.next()
";
