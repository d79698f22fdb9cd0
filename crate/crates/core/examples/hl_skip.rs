//! The same automaton read with TOPL and with high-level semantics: under
//! the latter, letters that start no transition are skipped.

use topl::hl::singleton_labels;
use topl::value::unary_word;
use topl::{accepts, hl_accepts, samples};

fn main() {
    let t = samples::remark_topl();
    let h = singleton_labels(&t);
    println!("word     topl   hl");
    for w in [vec!["v"], vec!["u", "v"], vec!["u", "u"], vec!["v", "v", "u"]] {
        let word = unary_word(&w);
        println!("{:<8} {:<6} {}", w.join(""), accepts(&t, &word), hl_accepts(&h, &word));
    }

    // Label sequences: the first `A` must not sit between two `B`s.
    let ab = samples::ab_hl();
    println!();
    for w in ["A", "AAB", "BAB", "BBAB", "BA"] {
        let word = unary_word(&w.chars().map(String::from).collect::<Vec<_>>());
        println!("{w:<5} {}", if hl_accepts(&ab, &word) { "accept" } else { "reject" });
    }
}
