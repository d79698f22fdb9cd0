use super::{hl_to_topl, ra_emptiness, topl_to_ra, unflatten};
use crate::automaton::{accepts, AnyAutomaton, ToplAutomaton};
use crate::error::TranslateError;
use crate::hl::{hl_accepts, HlAutomaton};
use crate::value::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    /// A word accepted by the automaton.
    NonEmpty(Word),
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Emptiness::Empty => None,
            Emptiness::NonEmpty(w) => Some(w),
        }
    }
}

/// Emptiness of a TOPL automaton via its register automaton. A witness is
/// checked against the original automaton before being returned.
pub fn emptiness_topl(a: &ToplAutomaton) -> Result<Emptiness, TranslateError> {
    let ra = topl_to_ra(a)?;
    match ra_emptiness(&ra)? {
        Emptiness::Empty => Ok(Emptiness::Empty),
        Emptiness::NonEmpty(flat) => {
            let w = unflatten(&flat, a.arity).ok_or_else(|| {
                TranslateError::Internal("witness length is not a multiple of the arity".into())
            })?;
            if !accepts(a, &w) {
                return Err(TranslateError::Internal(
                    "witness rejected by the original automaton".into(),
                ));
            }
            Ok(Emptiness::NonEmpty(w))
        }
    }
}

/// Emptiness of a high-level automaton through its TOPL translation.
pub fn emptiness_hl(a: &HlAutomaton) -> Result<Emptiness, TranslateError> {
    let t = hl_to_topl(a)?;
    let result = emptiness_topl(&t)?;
    if let Emptiness::NonEmpty(w) = &result {
        if !hl_accepts(a, w) {
            return Err(TranslateError::Internal(
                "witness rejected by the high-level automaton".into(),
            ));
        }
    }
    Ok(result)
}

pub fn emptiness(a: &AnyAutomaton) -> Result<Emptiness, TranslateError> {
    match a {
        AnyAutomaton::Topl(a) => emptiness_topl(a),
        AnyAutomaton::Hl(a) => emptiness_hl(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn samples_are_nonempty() {
        let w = emptiness_topl(&samples::list_cycle()).unwrap();
        assert!(accepts(&samples::list_cycle(), w.witness().unwrap()));
        let w = emptiness_hl(&samples::ab_hl()).unwrap();
        assert!(hl_accepts(&samples::ab_hl(), w.witness().unwrap()));
    }

    #[test]
    fn unreachable_final_is_empty() {
        let mut a = samples::three_letter();
        a.transitions.pop();
        assert_eq!(emptiness_topl(&a).unwrap(), Emptiness::Empty);
        let mut h = samples::ab_hl();
        h.transitions.pop();
        assert!(emptiness_hl(&h).unwrap().is_empty());
    }
}
