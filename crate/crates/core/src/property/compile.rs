use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::ast::{ArgsPattern, MethodRef, Pattern, PropLabel, PropertyAst};
use super::check::{check_well_formed, PropDiagnostic, ERROR, START};
use super::PropertyError;
use crate::automaton::Transition;
use crate::guard::{Action, Guard, Label, MethodPattern};
use crate::hl::HlAutomaton;
use crate::value::{EventKind, Store, Value};

/// Letter layout of a compiled property: component 1 is the event id,
/// component 2 the return value, components `3..=arity+2` the call values
/// (receiver first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSchema {
    /// Number of value slots `n`; letters have width `n + 2`.
    pub arity: usize,
    /// Register of each property variable (1-based).
    pub variables: IndexMap<String, usize>,
    /// Registers preloaded with literal values; never written.
    pub constants: Vec<ConstantRegister>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRegister {
    pub register: usize,
    pub value: Value,
}

impl EventSchema {
    pub fn width(&self) -> usize {
        self.arity + 2
    }

    pub fn is_constant(&self, register: usize) -> bool {
        self.constants.iter().any(|c| c.register == register)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledProperty {
    pub name: String,
    pub automaton: HlAutomaton,
    pub schema: EventSchema,
    pub warnings: Vec<PropDiagnostic>,
}

struct Registers {
    variables: IndexMap<String, usize>,
    constants: Vec<(Value, usize)>,
}

impl Registers {
    fn new(ast: &PropertyAst) -> Self {
        let mut variables = IndexMap::new();
        let mut literals: Vec<Value> = Vec::new();
        for t in &ast.transitions {
            for p in t.label.patterns() {
                match p {
                    Pattern::Literal(v) => {
                        if !literals.contains(v) {
                            literals.push(v.clone());
                        }
                    }
                    p => {
                        if let Some(v) = p.variable() {
                            let next = variables.len() + 1;
                            variables.entry(v.to_string()).or_insert(next);
                        }
                    }
                }
            }
        }
        let base = variables.len();
        let constants = literals
            .into_iter()
            .enumerate()
            .map(|(k, v)| (v, base + k + 1))
            .collect();
        Registers {
            variables,
            constants,
        }
    }

    fn len(&self) -> usize {
        self.variables.len() + self.constants.len()
    }

    fn constant(&self, v: &Value) -> usize {
        self.constants
            .iter()
            .find(|(c, _)| c == v)
            .map(|(_, r)| *r)
            .expect("literal registered")
    }

    /// Guard and action of a pattern at letter component `j`.
    fn pattern(&self, p: &Pattern, j: usize) -> (Guard, Action) {
        match p {
            Pattern::Bind(v) => (Guard::True, Action::set(self.variables[v.as_str()], j)),
            Pattern::Read(v) => (Guard::Eq(self.variables[v.as_str()], j), Action::nop()),
            Pattern::NotRead(v) => (Guard::Neq(self.variables[v.as_str()], j), Action::nop()),
            Pattern::Literal(c) => (Guard::Eq(self.constant(c), j), Action::nop()),
            Pattern::Wildcard => (Guard::True, Action::nop()),
        }
    }
}

fn expand(m: &MethodPattern, prefixes: &[String]) -> MethodPattern {
    let mut names = m.names.clone();
    for p in prefixes {
        for n in &m.names {
            names.push(format!("{p}.{n}"));
        }
    }
    MethodPattern {
        names,
        negated: m.negated,
    }
}

fn method_guard(kind: EventKind, target: &MethodRef, prefixes: &[String]) -> Guard {
    Guard::MethodMatch {
        component: 1,
        kind,
        pattern: expand(&target.method, prefixes),
    }
}

fn call_label(regs: &Registers, target: &MethodRef, args: &ArgsPattern, prefixes: &[String]) -> Label {
    let mut guard = method_guard(EventKind::Call, target, prefixes);
    let mut action = Action::nop();
    for (k, p) in target.receiver.iter().chain(args.patterns()).enumerate() {
        let (g, a) = regs.pattern(p, k + 3);
        guard = guard.and(g);
        action = action.then(a);
    }
    Label::new(guard, action)
}

fn ret_label(regs: &Registers, result: &Pattern, target: &MethodRef, prefixes: &[String]) -> Label {
    let (g, a) = regs.pattern(result, 2);
    Label::new(method_guard(EventKind::Ret, target, prefixes).and(g), a)
}

/// Rejects one method name used with two different fixed value counts.
fn check_arities(ast: &PropertyAst) -> Result<(), PropertyError> {
    let mut seen: IndexMap<String, (usize, usize)> = IndexMap::new();
    for t in &ast.transitions {
        let (target, args) = match &t.label {
            PropLabel::Call { target, args } | PropLabel::CallRet { target, args, .. } => {
                (target, args)
            }
            _ => continue,
        };
        if *args == ArgsPattern::Any {
            continue;
        }
        let arity = t.label.call_patterns().len();
        let key = target.method.to_string();
        match seen.get(&key) {
            Some(&(a, line)) if a != arity => {
                return Err(PropertyError::ArityConflict {
                    method: key,
                    first: a,
                    first_line: line,
                    second: arity,
                    line: t.line,
                });
            }
            Some(_) => {}
            None => {
                seen.insert(key, (arity, t.line));
            }
        }
    }
    Ok(())
}

/// Compiles a well-formed property into a high-level automaton whose only
/// final state is `error`.
///
/// Registers hold the variables in order of first use, then one preloaded
/// register per distinct literal. Method names become method-match guards
/// on the event-id component, expanded with every prefix.
pub fn compile_property(ast: &PropertyAst) -> Result<CompiledProperty, PropertyError> {
    let warnings = check_well_formed(ast).map_err(PropertyError::IllFormed)?;
    check_arities(ast)?;
    let regs = Registers::new(ast);
    let arity = ast
        .transitions
        .iter()
        .map(|t| t.label.call_patterns().len())
        .max()
        .unwrap_or(0);
    let prefixes = &ast.prefixes;
    let transitions = ast
        .transitions
        .iter()
        .map(|t| {
            let label = match &t.label {
                PropLabel::AnyEvent => vec![Label::new(Guard::True, Action::nop())],
                PropLabel::Call { target, args } => vec![call_label(&regs, target, args, prefixes)],
                PropLabel::Ret { result, target } => {
                    vec![ret_label(&regs, result, target, prefixes)]
                }
                PropLabel::CallRet {
                    result,
                    target,
                    args,
                } => vec![
                    call_label(&regs, target, args, prefixes),
                    ret_label(&regs, result, target, prefixes),
                ],
            };
            Transition {
                from: t.source.clone(),
                label,
                to: t.target.clone(),
            }
        })
        .collect();
    let mut states = vec![START.to_string()];
    states.extend(
        ast.vertices()
            .into_iter()
            .filter(|v| *v != START)
            .map(str::to_string),
    );
    let mut store = vec![Value::Bottom; regs.variables.len()];
    store.extend(regs.constants.iter().map(|(v, _)| v.clone()));
    let automaton = HlAutomaton {
        arity: arity + 2,
        registers: regs.len(),
        states,
        initial: START.into(),
        store: Store::new(store),
        finals: vec![ERROR.into()],
        transitions,
    };
    automaton
        .validate()
        .map_err(|ds| PropertyError::Internal(crate::error::join(&ds)))?;
    Ok(CompiledProperty {
        name: ast.name.clone(),
        automaton,
        schema: EventSchema {
            arity,
            variables: regs.variables,
            constants: regs
                .constants
                .into_iter()
                .map(|(value, register)| ConstantRegister { register, value })
                .collect(),
        },
        warnings,
    })
}

/// Parses and compiles a property file.
pub fn compile_source(text: &str) -> Result<CompiledProperty, PropertyError> {
    compile_property(&super::parse_property(text)?)
}
