//! Moves between the three models and shows the sizes each translation
//! produces.

use topl::translate::{flatten, hl_to_topl, topl_to_hl, topl_to_ra};
use topl::{accepts, hl_accepts, samples, Letter};

fn main() {
    let a = samples::list_cycle();
    let ra = topl_to_ra(&a).unwrap();
    println!(
        "list cycle: {} states, {} registers, arity {}",
        a.states.len(),
        a.registers,
        a.arity
    );
    println!(
        "  as register automaton: {} states, {} registers",
        ra.as_topl().states.len(),
        ra.registers()
    );
    let l = |x: [&str; 3]| Letter::atoms(&x);
    let cyclic = vec![l(["next", "v0", "v1"]), l(["next", "v1", "v0"])];
    println!(
        "  cyclic list accepted: {} (flattened: {})",
        accepts(&a, &cyclic),
        accepts(ra.as_topl(), &flatten(&cyclic))
    );

    let h = topl_to_hl(&a).unwrap();
    println!(
        "  as hl automaton: {} states, accepts cyclic list: {}",
        h.states.len(),
        hl_accepts(&h, &cyclic)
    );

    let ab = samples::ab_hl();
    let back = hl_to_topl(&ab).unwrap();
    println!(
        "A/B hl automaton: {} registers, d = {}; as TOPL: {} states, {} registers",
        ab.registers,
        ab.max_label_len(),
        back.states.len(),
        back.registers
    );
}
