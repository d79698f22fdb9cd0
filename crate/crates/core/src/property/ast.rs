use std::fmt;

use crate::guard::MethodPattern;
use crate::value::Value;

/// A value pattern. Variable names are stored lowercased, so `X`, `x` and
/// `!x` all refer to one variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Uppercase name: matches anything and stores it.
    Bind(String),
    /// Lowercase name: matches the stored value.
    Read(String),
    /// `!v`: matches anything but the stored value.
    NotRead(String),
    /// Quoted literal.
    Literal(Value),
    /// `*`
    Wildcard,
}

impl Pattern {
    pub fn variable(&self) -> Option<&str> {
        match self {
            Pattern::Bind(v) | Pattern::Read(v) | Pattern::NotRead(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_bind(&self) -> bool {
        matches!(self, Pattern::Bind(_))
    }

    pub fn is_read(&self) -> bool {
        matches!(self, Pattern::Read(_) | Pattern::NotRead(_))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Bind(v) => f.write_str(&v.to_uppercase()),
            Pattern::Read(v) => f.write_str(v),
            Pattern::NotRead(v) => write!(f, "!{v}"),
            Pattern::Literal(v) => write!(f, "{:?}", v.to_string()),
            Pattern::Wildcard => f.write_str("*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArgsPattern {
    /// `(p1, …, pk)`: exactly these positions.
    Fixed(Vec<Pattern>),
    /// `[*]`: any arguments.
    Any,
}

impl ArgsPattern {
    pub fn patterns(&self) -> &[Pattern] {
        match self {
            ArgsPattern::Fixed(ps) => ps,
            ArgsPattern::Any => &[],
        }
    }
}

/// `receiver.method`; a missing receiver denotes a static call whose
/// arguments start at the first value slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MethodRef {
    pub receiver: Option<Pattern>,
    pub method: MethodPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropLabel {
    /// `call recv.m(args)`, or just `recv.m(args)`.
    Call { target: MethodRef, args: ArgsPattern },
    /// `ret R := m`
    Ret { result: Pattern, target: MethodRef },
    /// `R := recv.m(args)`: the call immediately followed by its return.
    CallRet {
        result: Pattern,
        target: MethodRef,
        args: ArgsPattern,
    },
    /// `*`: any single event.
    AnyEvent,
}

impl PropLabel {
    /// Patterns of the call part in letter order (receiver, then arguments).
    pub fn call_patterns(&self) -> Vec<&Pattern> {
        match self {
            PropLabel::Call { target, args } | PropLabel::CallRet { target, args, .. } => {
                target.receiver.iter().chain(args.patterns()).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn result_pattern(&self) -> Option<&Pattern> {
        match self {
            PropLabel::Ret { result, .. } | PropLabel::CallRet { result, .. } => Some(result),
            _ => None,
        }
    }

    /// Every pattern of the label, call part first.
    pub fn patterns(&self) -> Vec<&Pattern> {
        let mut ps = self.call_patterns();
        ps.extend(self.result_pattern());
        ps
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropTransition {
    pub source: String,
    pub target: String,
    pub label: PropLabel,
    /// 1-based source line.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAst {
    pub name: String,
    /// Qualified prefixes, applied at compile time.
    pub prefixes: Vec<String>,
    pub transitions: Vec<PropTransition>,
}

impl PropertyAst {
    /// Vertices in order of first appearance.
    pub fn vertices(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.transitions {
            for v in [t.source.as_str(), t.target.as_str()] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}
