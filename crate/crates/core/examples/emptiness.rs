//! Emptiness checks with witnesses, plus the closure constructions.

use topl::automaton::AnyAutomaton;
use topl::json::word_to_json;
use topl::translate::{emptiness, intersection, union, Emptiness};
use topl::{samples, Guard};

fn show(name: &str, a: AnyAutomaton) {
    match emptiness(&a).unwrap() {
        Emptiness::Empty => println!("{name}: empty"),
        Emptiness::NonEmpty(w) => println!("{name}: witness {}", word_to_json(&w)),
    }
}

fn main() {
    show("three letters", AnyAutomaton::Topl(samples::three_letter()));
    show("list cycle", AnyAutomaton::Topl(samples::list_cycle()));
    show("A/B", AnyAutomaton::Hl(samples::ab_hl()));

    // The last letter must both differ from and equal the first.
    let a = samples::three_letter();
    let mut b = samples::three_letter();
    b.transitions[2].label.guard = Guard::Eq(1, 1);
    show("a≠c and a=c", AnyAutomaton::Topl(intersection(&a, &b).unwrap()));
    show("a≠c or a=c", AnyAutomaton::Topl(union(&a, &b).unwrap()));
}
