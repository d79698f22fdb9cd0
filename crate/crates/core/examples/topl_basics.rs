//! Builds the two-register automaton for `{abc | a≠c and b≠c}` by hand and
//! checks a few words.

use topl::{accepts, Action, Guard, Label, Store, ToplAutomaton, Transition, Value};
use topl::value::unary_word;

fn main() {
    let t = |from: &str, label, to: &str| Transition {
        from: from.into(),
        label,
        to: to.into(),
    };
    let a = ToplAutomaton {
        arity: 1,
        registers: 2,
        states: vec!["1".into(), "2".into(), "3".into(), "4".into()],
        initial: "1".into(),
        store: Store::new(vec![Value::Bottom, Value::Bottom]),
        finals: vec!["4".into()],
        transitions: vec![
            t("1", Label::new(Guard::True, Action::set(1, 1)), "2"),
            t("2", Label::new(Guard::True, Action::set(2, 1)), "3"),
            t("3", Label::new(Guard::Neq(1, 1).and(Guard::Neq(2, 1)), Action::nop()), "4"),
        ],
    };
    a.validate().expect("well-formed automaton");

    for w in [["1", "2", "3"], ["1", "2", "1"], ["x", "x", "y"], ["x", "y", "y"]] {
        let verdict = if accepts(&a, &unary_word(&w)) { "accept" } else { "reject" };
        println!("{:<12} {verdict}", w.join(" "));
    }
    println!("\n{}", topl::json::topl_to_json(&a));
}
