//! Register automata and the translations between the three automaton
//! models, with the decision procedures and closure constructions built on
//! top of them.
//!
//! ```text
//!   HlAutomaton ──hl_to_topl──▶ ToplAutomaton ──topl_to_ra──▶ RegisterAutomaton
//!        ▲                            │
//!        └─────────topl_to_hl─────────┘
//! ```
//!
//! All constructions explore only the reachable part of the target
//! automaton, in a fixed order, so their output is deterministic.

mod closure;
mod emptiness;
mod from_hl;
mod ra;
mod to_hl;

pub use closure::{concat, intersection, union};
pub use emptiness::{emptiness, emptiness_hl, emptiness_topl, Emptiness};
pub use from_hl::{hl_to_topl, hl_to_topl_limited};
pub use ra::{ra_emptiness, topl_to_ra, RegisterAutomaton};
pub use to_hl::topl_to_hl;

use crate::error::TranslateError;
use crate::guard::Guard;
use crate::value::{Letter, Word};

/// `f((v1..vn)(..)..) = v1..vn..`: unpacks every letter into single values.
pub fn flatten(w: &[Letter]) -> Word {
    w.iter()
        .flat_map(|l| l.values().iter().map(|v| Letter::new(vec![v.clone()])))
        .collect()
}

/// Inverse of [`flatten`] for words whose length is a multiple of `arity`.
pub fn unflatten(w: &[Letter], arity: usize) -> Option<Word> {
    if arity == 0 || !w.len().is_multiple_of(arity) || w.iter().any(|l| l.arity() != 1) {
        return None;
    }
    Some(
        w.chunks(arity)
            .map(|c| Letter::new(c.iter().map(|l| l.get(1).clone()).collect()))
            .collect(),
    )
}

/// An atomic `eq`/`neq` conjunct, 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Lit {
    pub eq: bool,
    pub register: usize,
    pub component: usize,
}

impl Lit {
    pub fn negate(self) -> Lit {
        Lit { eq: !self.eq, ..self }
    }

    pub fn to_guard(self) -> Guard {
        if self.eq {
            Guard::Eq(self.register, self.component)
        } else {
            Guard::Neq(self.register, self.component)
        }
    }
}

/// Normalizes a guard to its list of `eq`/`neq` conjuncts.
pub(crate) fn literals(g: &Guard, transition: usize) -> Result<Vec<Lit>, TranslateError> {
    g.conjuncts()
        .into_iter()
        .map(|c| match c {
            Guard::Eq(i, j) => Ok(Lit {
                eq: true,
                register: *i,
                component: *j,
            }),
            Guard::Neq(i, j) => Ok(Lit {
                eq: false,
                register: *i,
                component: *j,
            }),
            Guard::MethodMatch { .. } => Err(TranslateError::MethodGuard { transition }),
            Guard::True | Guard::And(..) => unreachable!("conjuncts are atomic"),
        })
        .collect()
}
