//! Line-oriented parser for property files.
//!
//! ```text
//! property NAME
//! prefix <qualified.name>
//! SOURCE -> TARGET: LABEL
//! ```
//!
//! Labels are `*`, `call M ARGS`, `ret P := M`, `P := M ARGS` or `M ARGS`,
//! where `M` is `recv.method`, `method`, or `(!method)` with an optional
//! receiver, and `ARGS` is `(p, …)` or `[*]`. `#` starts a comment.

use super::ast::{ArgsPattern, MethodRef, Pattern, PropLabel, PropTransition, PropertyAst};
use super::PropertyError;
use crate::guard::MethodPattern;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Arrow,
    Colon,
    Assign,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    Lt,
    Gt,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of line".into(),
        Some(Tok::Word(w)) => format!("`{w}`"),
        Some(Tok::Str(s)) => format!("string {s:?}"),
        Some(t) => format!(
            "`{}`",
            match t {
                Tok::Arrow => "->",
                Tok::Colon => ":",
                Tok::Assign => ":=",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Comma => ",",
                Tok::Bang => "!",
                Tok::Lt => "<",
                Tok::Gt => ">",
                Tok::Word(_) | Tok::Str(_) => unreachable!(),
            }
        ),
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '*' | '$')
}

fn is_ident(w: &str) -> bool {
    let mut cs = w.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

fn is_glob(w: &str) -> bool {
    !w.is_empty()
        && !w.starts_with('.')
        && !w.ends_with('.')
        && !w.contains("..")
        && w.chars().all(is_word_char)
}

fn lex(line_no: usize, line: &str) -> Result<Vec<(Tok, usize)>, PropertyError> {
    let err = |column: usize, message: String| PropertyError::Syntax {
        line: line_no,
        column,
        message,
    };
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(col, "unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(err(i + 1, "invalid escape".into())),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push((Tok::Str(s), col));
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2;
            }
            ':' if chars.get(i + 1) == Some(&'=') => {
                out.push((Tok::Assign, col));
                i += 2;
            }
            c if is_word_char(c) => {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                out.push((Tok::Word(chars[start..i].iter().collect()), col));
            }
            _ => {
                let t = match c {
                    ':' => Tok::Colon,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '!' => Tok::Bang,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    _ => return Err(err(col, format!("unexpected character {c:?}"))),
                };
                out.push((t, col));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

type PResult<T> = Result<T, PropertyError>;

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(PropertyError::Syntax {
            line: self.line,
            column: self.col(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.error(format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> PResult<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn word(&mut self, wanted: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.unexpected(wanted),
        }
    }

    fn end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            _ => self.unexpected("end of line"),
        }
    }

    fn pattern_word(&self, w: &str) -> PResult<Pattern> {
        if w == "*" {
            Ok(Pattern::Wildcard)
        } else if is_ident(w) {
            let v = w.to_lowercase();
            if w.starts_with(|c: char| c.is_uppercase()) {
                Ok(Pattern::Bind(v))
            } else {
                Ok(Pattern::Read(v))
            }
        } else {
            self.error(format!("`{w}` is not a pattern"))
        }
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                let w = self.word("a variable after `!`")?;
                if !is_ident(&w) {
                    self.pos -= 1;
                    return self.error(format!("`{w}` is not a variable"));
                }
                Ok(Pattern::NotRead(w.to_lowercase()))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Pattern::Literal(Value::atom(s)))
            }
            Some(Tok::Word(w)) => {
                let p = self.pattern_word(&w)?;
                self.pos += 1;
                Ok(p)
            }
            _ => self.unexpected("a pattern"),
        }
    }

    fn glob(&self, w: &str) -> PResult<String> {
        if is_glob(w) {
            Ok(w.to_string())
        } else {
            self.error(format!("`{w}` is not a method name"))
        }
    }

    /// `(!name)`
    fn negated_method(&mut self) -> PResult<MethodPattern> {
        self.expect(Tok::LParen, "`(`")?;
        self.expect(Tok::Bang, "`!`")?;
        let w = self.word("a method name")?;
        let name = self.glob(&w)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(MethodPattern {
            names: vec![name],
            negated: true,
        })
    }

    /// Method part after the receiver's dot: a glob, or `(!glob)` when
    /// `rest` is empty.
    fn method_rest(&mut self, rest: &str) -> PResult<MethodPattern> {
        if rest.is_empty() {
            self.negated_method()
        } else {
            Ok(MethodPattern::exact(self.glob(rest)?))
        }
    }

    fn method_ref(&mut self) -> PResult<MethodRef> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                let w = self.word("a receiver variable")?;
                let Some((recv, rest)) = w.split_once('.') else {
                    self.pos -= 1;
                    return self.error("expected `!receiver.method`");
                };
                if !is_ident(recv) {
                    self.pos -= 1;
                    return self.error(format!("`{recv}` is not a variable"));
                }
                let method = self.method_rest(rest)?;
                Ok(MethodRef {
                    receiver: Some(Pattern::NotRead(recv.to_lowercase())),
                    method,
                })
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                let w = self.word("`.method` after a literal receiver")?;
                let Some(rest) = w.strip_prefix('.') else {
                    self.pos -= 1;
                    return self.error("expected `.method` after a literal receiver");
                };
                let method = self.method_rest(rest)?;
                Ok(MethodRef {
                    receiver: Some(Pattern::Literal(Value::atom(s))),
                    method,
                })
            }
            Some(Tok::LParen) => Ok(MethodRef {
                receiver: None,
                method: self.negated_method()?,
            }),
            Some(Tok::Word(w)) => {
                let receiver = match w.split_once('.') {
                    Some((recv, rest)) => {
                        let recv = self.pattern_word(recv)?;
                        self.pos += 1;
                        return Ok(MethodRef {
                            receiver: Some(recv),
                            method: self.method_rest(rest)?,
                        });
                    }
                    None => None,
                };
                let name = self.glob(&w)?;
                self.pos += 1;
                Ok(MethodRef {
                    receiver,
                    method: MethodPattern::exact(name),
                })
            }
            _ => self.unexpected("a method"),
        }
    }

    fn args(&mut self) -> PResult<ArgsPattern> {
        match self.peek() {
            Some(Tok::LBracket) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Word(w)) if w == "*" => self.pos += 1,
                    _ => return self.unexpected("`*` in `[*]`"),
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(ArgsPattern::Any)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut ps = Vec::new();
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    return Ok(ArgsPattern::Fixed(ps));
                }
                loop {
                    ps.push(self.pattern()?);
                    match self.bump() {
                        Some(Tok::Comma) => {}
                        Some(Tok::RParen) => break,
                        _ => {
                            self.pos -= 1;
                            return self.unexpected("`,` or `)`");
                        }
                    }
                }
                Ok(ArgsPattern::Fixed(ps))
            }
            _ => self.unexpected("an argument list `(…)` or `[*]`"),
        }
    }

    fn label(&mut self) -> PResult<PropLabel> {
        let keyword = |c: &Cursor, k: &str| {
            matches!(c.peek(), Some(Tok::Word(w)) if w == k) && c.peek_at(1) != Some(&Tok::Assign)
        };
        let label = if matches!(self.peek(), Some(Tok::Word(w)) if w == "*")
            && self.peek_at(1).is_none()
        {
            self.pos += 1;
            PropLabel::AnyEvent
        } else if keyword(self, "call") {
            self.pos += 1;
            let target = self.method_ref()?;
            let args = self.args()?;
            PropLabel::Call { target, args }
        } else if keyword(self, "ret") {
            self.pos += 1;
            let result = self.pattern()?;
            self.expect(Tok::Assign, "`:=`")?;
            let col = self.col();
            let target = self.method_ref()?;
            if matches!(&target.receiver, Some(p) if *p != Pattern::Wildcard) {
                return Err(PropertyError::Syntax {
                    line: self.line,
                    column: col,
                    message: "return labels cannot constrain the receiver; use `*.m` or `m`"
                        .into(),
                });
            }
            PropLabel::Ret { result, target }
        } else if self.toks[self.pos..].iter().any(|(t, _)| *t == Tok::Assign) {
            let result = self.pattern()?;
            self.expect(Tok::Assign, "`:=`")?;
            let target = self.method_ref()?;
            let args = self.args()?;
            PropLabel::CallRet {
                result,
                target,
                args,
            }
        } else {
            let target = self.method_ref()?;
            let args = self.args()?;
            PropLabel::Call { target, args }
        };
        self.end()?;
        Ok(label)
    }
}

fn cursor(line_no: usize, text: &str) -> PResult<Cursor> {
    Ok(Cursor {
        toks: lex(line_no, text)?,
        pos: 0,
        line: line_no,
        end_col: text.chars().count() + 1,
    })
}

/// Parses a single transition label such as `X := *.getParameter[*]`.
pub fn parse_label(text: &str) -> Result<PropLabel, PropertyError> {
    let mut c = cursor(1, text)?;
    c.label()
}

/// Parses a whole property file.
pub fn parse_property(text: &str) -> Result<PropertyAst, PropertyError> {
    let mut name: Option<String> = None;
    let mut prefixes = Vec::new();
    let mut transitions = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        let mut c = cursor(line_no, line)?;
        if c.peek().is_none() {
            continue;
        }
        let is_directive = |c: &Cursor, kw: &str| {
            matches!(c.peek(), Some(Tok::Word(w)) if w == kw)
                && !matches!(c.peek_at(1), Some(Tok::Arrow) | None)
        };
        if is_directive(&c, "property") {
            c.pos += 1;
            if name.is_some() {
                return c.error("only one `property` header is allowed");
            }
            if !transitions.is_empty() || !prefixes.is_empty() {
                return c.error("`property` must come first");
            }
            let w = c.word("a property name")?;
            c.end()?;
            name = Some(w);
        } else if is_directive(&c, "prefix") {
            c.pos += 1;
            let bracketed = c.peek() == Some(&Tok::Lt);
            if bracketed {
                c.pos += 1;
            }
            let w = c.word("a qualified name")?;
            if !is_glob(&w) || w.contains('*') {
                c.pos -= 1;
                return c.error(format!("`{w}` is not a qualified name"));
            }
            if bracketed {
                c.expect(Tok::Gt, "`>`")?;
            }
            c.end()?;
            prefixes.push(w);
        } else {
            let source = c.word("a vertex name")?;
            c.expect(Tok::Arrow, "`->`")?;
            let target = c.word("a vertex name")?;
            c.expect(Tok::Colon, "`:`")?;
            for v in [&source, &target] {
                if !is_ident(v) && !v.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                    return Err(PropertyError::Syntax {
                        line: line_no,
                        column: 1,
                        message: format!("`{v}` is not a vertex name"),
                    });
                }
            }
            let label = c.label()?;
            transitions.push(PropTransition {
                source,
                target,
                label,
                line: line_no,
            });
        }
    }
    Ok(PropertyAst {
        name: name.unwrap_or_else(|| "unnamed".into()),
        prefixes,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::TAINT_PROPERTY as TAINT;

    fn call(recv: Option<Pattern>, m: &str, args: Vec<Pattern>) -> PropLabel {
        PropLabel::Call {
            target: MethodRef {
                receiver: recv,
                method: MethodPattern::exact(m),
            },
            args: ArgsPattern::Fixed(args),
        }
    }

    #[test]
    fn taint_listing() {
        let ast = parse_property(TAINT).unwrap();
        assert_eq!(ast.name, "Taint");
        assert_eq!(ast.prefixes.len(), 3);
        assert_eq!(ast.prefixes[2], "java.sql.Statement");
        assert_eq!(ast.transitions.len(), 6);
        assert_eq!(ast.transitions[0].label, PropLabel::AnyEvent);
        assert_eq!(
            ast.transitions[1].label,
            PropLabel::CallRet {
                result: Pattern::Bind("x".into()),
                target: MethodRef {
                    receiver: Some(Pattern::Wildcard),
                    method: MethodPattern::exact("getParameter"),
                },
                args: ArgsPattern::Any,
            }
        );
        assert_eq!(ast.transitions[5].target, "error");
    }

    #[test]
    fn single_labels() {
        assert_eq!(
            parse_label("*.executeQuery(x)").unwrap(),
            call(Some(Pattern::Wildcard), "executeQuery", vec![Pattern::Read("x".into())])
        );
        assert_eq!(
            parse_label("X := c.iterator()").unwrap(),
            PropLabel::CallRet {
                result: Pattern::Bind("x".into()),
                target: MethodRef {
                    receiver: Some(Pattern::Read("c".into())),
                    method: MethodPattern::exact("iterator"),
                },
                args: ArgsPattern::Fixed(vec![]),
            }
        );
        assert_eq!(
            parse_label("call x.*[*]").unwrap(),
            PropLabel::Call {
                target: MethodRef {
                    receiver: Some(Pattern::Read("x".into())),
                    method: MethodPattern::any(),
                },
                args: ArgsPattern::Any,
            }
        );
        assert_eq!(
            parse_label("sanitize(x)").unwrap(),
            call(None, "sanitize", vec![Pattern::Read("x".into())])
        );
        assert_eq!(
            parse_label("(!sanitize)(*)").unwrap(),
            PropLabel::Call {
                target: MethodRef {
                    receiver: None,
                    method: MethodPattern {
                        names: vec!["sanitize".into()],
                        negated: true,
                    },
                },
                args: ArgsPattern::Fixed(vec![Pattern::Wildcard]),
            }
        );
        assert_eq!(
            parse_label("ret R := *.get").unwrap(),
            PropLabel::Ret {
                result: Pattern::Bind("r".into()),
                target: MethodRef {
                    receiver: Some(Pattern::Wildcard),
                    method: MethodPattern::exact("get"),
                },
            }
        );
        assert_eq!(
            parse_label("call \"sys\".log(!v, \"x\")").unwrap(),
            call(
                Some(Pattern::Literal(Value::atom("sys"))),
                "log",
                vec![Pattern::NotRead("v".into()), Pattern::Literal(Value::atom("x"))]
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_property("property P\nstart -> error: *.f(x,\n").unwrap_err();
        assert_eq!(
            err,
            PropertyError::Syntax {
                line: 2,
                column: 23,
                message: "expected a pattern, found end of line".into()
            }
        );
        assert!(matches!(
            parse_property("start => error: *"),
            Err(PropertyError::Syntax { line: 1, column: 7, .. })
        ));
        assert!(matches!(
            parse_label("ret R := x.get"),
            Err(PropertyError::Syntax { column: 10, .. })
        ));
        assert!(parse_label("x.f").is_err());
        assert!(parse_label("foo bar").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let ast = parse_property("# header\n\nproperty P # named\n start -> error: * # any\n")
            .unwrap();
        assert_eq!(ast.name, "P");
        assert_eq!(ast.transitions.len(), 1);
        assert_eq!(ast.transitions[0].line, 4);
    }
}
