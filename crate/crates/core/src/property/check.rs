use std::collections::BTreeSet;
use std::fmt;

use super::ast::{PropLabel, PropertyAst};

pub const START: &str = "start";
pub const ERROR: &str = "error";

/// A well-formedness problem, tied to a transition where there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropDiagnostic {
    /// Index into the property's transitions.
    pub transition: Option<usize>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for PropDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn binds(label: &PropLabel) -> Vec<&str> {
    label
        .patterns()
        .into_iter()
        .filter(|p| p.is_bind())
        .filter_map(|p| p.variable())
        .collect()
}

/// Checks that no label contains the same uppercase pattern twice and that every
/// variable is bound on all paths from `start` before it is read.
///
/// Returns the warnings on success (an `error` vertex with outgoing
/// transitions) and every violation otherwise.
pub fn check_well_formed(ast: &PropertyAst) -> Result<Vec<PropDiagnostic>, Vec<PropDiagnostic>> {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let vertices = ast.vertices();
    for v in [START, ERROR] {
        if !vertices.contains(&v) {
            errors.push(PropDiagnostic {
                transition: None,
                line: None,
                message: format!("missing `{v}` vertex"),
            });
        }
    }
    for (k, t) in ast.transitions.iter().enumerate() {
        let bs = binds(&t.label);
        let mut repeated: Vec<&str> = bs
            .iter()
            .copied()
            .filter(|v| bs.iter().filter(|u| *u == v).count() > 1)
            .collect();
        repeated.sort_unstable();
        repeated.dedup();
        for v in repeated {
            errors.push(PropDiagnostic {
                transition: Some(k),
                line: Some(t.line),
                message: format!(
                    "uppercase pattern `{}` occurs more than once in one label",
                    v.to_uppercase()
                ),
            });
        }
        if t.source == ERROR {
            warnings.push(PropDiagnostic {
                transition: Some(k),
                line: Some(t.line),
                message: "transition leaves the `error` vertex".into(),
            });
        }
    }

    // Must-bound variables on entry to each vertex; `None` is the top
    // element (vertex not reached yet).
    let index = |v: &str| vertices.iter().position(|u| *u == v).expect("known vertex");
    let mut bound: Vec<Option<BTreeSet<&str>>> = vec![None; vertices.len()];
    if vertices.contains(&START) {
        bound[index(START)] = Some(BTreeSet::new());
    }
    let mut changed = true;
    while changed {
        changed = false;
        for t in &ast.transitions {
            let Some(src) = bound[index(&t.source)].clone() else {
                continue;
            };
            let mut out = src;
            out.extend(binds(&t.label));
            let dst = &mut bound[index(&t.target)];
            let next = match dst {
                None => out,
                Some(cur) => cur.intersection(&out).copied().collect(),
            };
            if dst.as_ref() != Some(&next) {
                *dst = Some(next);
                changed = true;
            }
        }
    }

    for (k, t) in ast.transitions.iter().enumerate() {
        let Some(avail) = &bound[index(&t.source)] else {
            continue;
        };
        // The return part of a call-return label sees the call part's binding.
        let call_binds: Vec<&str> = t
            .label
            .call_patterns()
            .into_iter()
            .filter(|p| p.is_bind())
            .filter_map(|p| p.variable())
            .collect();
        let mut reads: Vec<(&str, bool)> = t
            .label
            .call_patterns()
            .into_iter()
            .filter(|p| p.is_read())
            .filter_map(|p| p.variable())
            .map(|v| (v, false))
            .collect();
        if let Some(p) = t.label.result_pattern() {
            if let (true, Some(v)) = (p.is_read(), p.variable()) {
                reads.push((v, true));
            }
        }
        for (v, in_ret) in reads {
            let ok = avail.contains(v) || (in_ret && call_binds.contains(&v));
            if !ok {
                errors.push(PropDiagnostic {
                    transition: Some(k),
                    line: Some(t.line),
                    message: format!(
                        "variable `{v}` is read before it is bound on every path from `start`"
                    ),
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(warnings)
    } else {
        Err(errors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::parse_property;
    use crate::samples::{ITERATOR_PROPERTY as FIG_ITERATORS, TAINT_PROPERTY as TAINT};

    #[test]
    fn listings_are_well_formed() {
        assert_eq!(check_well_formed(&parse_property(TAINT).unwrap()), Ok(vec![]));
        assert_eq!(
            check_well_formed(&parse_property(FIG_ITERATORS).unwrap()),
            Ok(vec![])
        );
    }

    #[test]
    fn repeated_bind_in_one_label() {
        let ast = parse_property("start -> error: X := *.concat(X)").unwrap();
        let errs = check_well_formed(&ast).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("`X` occurs more than once"));
    }

    #[test]
    fn read_before_bind() {
        let ast = parse_property("start -> error: *.sink(x)").unwrap();
        let errs = check_well_formed(&ast).unwrap_err();
        assert_eq!(errs[0].transition, Some(0));
        assert!(errs[0].message.contains("`x`"));
    }

    #[test]
    fn bind_must_hold_on_all_paths() {
        let src = "start -> a: X := f()\nstart -> a: g()\na -> error: h(x)";
        let errs = check_well_formed(&parse_property(src).unwrap()).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].line, Some(3));
        let src = "start -> a: X := f()\nstart -> a: Y := g()\na -> error: h(!x)";
        assert!(check_well_formed(&parse_property(src).unwrap()).is_err());
        let src = "start -> a: X := f()\na -> a: X := g(x)\na -> error: h(x)";
        assert!(check_well_formed(&parse_property(src).unwrap()).is_ok());
    }

    #[test]
    fn missing_vertices_and_warnings() {
        let errs = check_well_formed(&parse_property("a -> b: *").unwrap()).unwrap_err();
        assert_eq!(errs.len(), 2);
        let warns =
            check_well_formed(&parse_property("start -> error: *\nerror -> start: *").unwrap())
                .unwrap();
        assert_eq!(warns.len(), 1);
    }
}
