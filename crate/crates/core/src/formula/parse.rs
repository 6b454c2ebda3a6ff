//! Tokenizer and parser for formulas, patterns and the surrounding
//! line syntax (sequents, rules, derivations).
//!
//! Formulas are read in canonical prefix form `(ctor arg ...)` or with infix
//! sugar: `&` (conj), `|tag` (disj), `->tag` (imp, right-associative), and
//! unary constructors written as prefix operators. Binding strength from
//! tightest: unary, `&`, `|`, `->`.

use std::sync::Arc;

use super::{prop_index, Formula, Pattern, PropVar, PropVarKind, Signature};
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    Comma,
    Semicolon,
    /// `=>`
    Turnstile,
    /// `<=`
    From,
    Ident {
        base: String,
        tag: Option<String>,
    },
    Meta(String),
    PropVar {
        name: String,
        tag: Option<String>,
    },
    /// `$G` or `$[box.s4]G`
    Context {
        guard: Option<(String, Option<String>)>,
        name: String,
    },
    Conj(Option<String>),
    Disj(Option<String>),
    Imp(Option<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: usize,
}

fn is_word(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn take_word(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && is_word(bytes[i]) {
        i += 1;
    }
    i
}

/// `word` or `word.word`, starting at `i`. Returns the parts and the end.
fn take_dotted(text: &str, start: usize) -> (String, Option<String>, usize) {
    let bytes = text.as_bytes();
    let end = take_word(bytes, start);
    let base = text[start..end].to_string();
    if end < bytes.len() && bytes[end] == b'.' && end + 1 < bytes.len() && is_word(bytes[end + 1]) {
        let tag_end = take_word(bytes, end + 1);
        (base, Some(text[end + 1..tag_end].to_string()), tag_end)
    } else {
        (base, None, end)
    }
}

fn take_suffix(text: &str, start: usize) -> (Option<String>, usize) {
    let end = take_word(text.as_bytes(), start);
    if end == start {
        (None, end)
    } else {
        (Some(text[start..end].to_string()), end)
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i;
        let kind = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => {
                i += 1;
                TokenKind::LParen
            }
            b')' => {
                i += 1;
                TokenKind::RParen
            }
            b',' => {
                i += 1;
                TokenKind::Comma
            }
            b';' => {
                i += 1;
                TokenKind::Semicolon
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                TokenKind::Turnstile
            }
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                i += 2;
                TokenKind::From
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                let (tag, end) = take_suffix(text, i + 2);
                i = end;
                TokenKind::Imp(tag)
            }
            b'&' => {
                let (tag, end) = take_suffix(text, i + 1);
                i = end;
                TokenKind::Conj(tag)
            }
            b'|' => {
                let (tag, end) = take_suffix(text, i + 1);
                i = end;
                TokenKind::Disj(tag)
            }
            b'?' => {
                let end = take_word(bytes, i + 1);
                if end == i + 1 {
                    return Err(ParseError::syntax(
                        pos,
                        "expected metavariable name after `?`",
                    ));
                }
                let name = text[i + 1..end].to_string();
                i = end;
                TokenKind::Meta(name)
            }
            b'!' => {
                if !bytes.get(i + 1).copied().is_some_and(is_word) {
                    return Err(ParseError::syntax(pos, "expected variable name after `!`"));
                }
                let (name, tag, end) = take_dotted(text, i + 1);
                i = end;
                TokenKind::PropVar { name, tag }
            }
            b'$' => {
                let mut j = i + 1;
                let mut guard = None;
                if bytes.get(j) == Some(&b'[') {
                    let (base, tag, end) = take_dotted(text, j + 1);
                    if base.is_empty() || bytes.get(end) != Some(&b']') {
                        return Err(ParseError::syntax(pos, "malformed context guard"));
                    }
                    guard = Some((base, tag));
                    j = end + 1;
                }
                let end = take_word(bytes, j);
                if end == j {
                    return Err(ParseError::syntax(pos, "expected context name after `$`"));
                }
                let name = text[j..end].to_string();
                i = end;
                TokenKind::Context { guard, name }
            }
            b if is_word(b) => {
                let (base, tag, end) = take_dotted(text, i);
                i = end;
                TokenKind::Ident { base, tag }
            }
            _ => {
                return Err(ParseError::syntax(
                    pos,
                    format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap()
                    ),
                ))
            }
        };
        out.push(Token { kind, pos });
    }
    Ok(out)
}

/// Cursor over a token list.
pub struct Tokens {
    toks: Vec<Token>,
    idx: usize,
    end_pos: usize,
}

impl Tokens {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Tokens {
            toks: tokenize(text)?,
            idx: 0,
            end_pos: text.len(),
        })
    }

    pub fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.idx).map(|t| &t.kind)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end_pos, |t| t.pos)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), format!("expected {what}")))
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), "unexpected trailing input"))
        }
    }

    /// Parses one formula pattern at the cursor.
    pub fn pattern(&mut self, sig: &Signature) -> Result<Pattern, ParseError> {
        self.expr(sig, 0)
    }

    fn expr(&mut self, sig: &Signature, min_prec: u8) -> Result<Pattern, ParseError> {
        let mut lhs = self.unary(sig)?;
        loop {
            let (base, tag, prec, right_assoc) = match self.peek() {
                Some(TokenKind::Imp(tag)) => ("imp", tag.clone(), 1, true),
                Some(TokenKind::Disj(tag)) => ("disj", tag.clone(), 2, false),
                Some(TokenKind::Conj(tag)) => ("conj", tag.clone(), 3, false),
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            let pos = self.pos();
            self.idx += 1;
            let token = match &tag {
                Some(t) => format!("{base}.{t}"),
                None => base.to_string(),
            };
            let c = sig
                .lookup(base, tag.as_deref())
                .map_err(|e| e.into_parse(pos, &token))?;
            if c.arity() != 2 {
                return Err(ParseError::Arity {
                    pos,
                    token,
                    expected: c.arity(),
                });
            }
            let rhs = self.expr(sig, if right_assoc { prec } else { prec + 1 })?;
            lhs = Pattern::App(c, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self, sig: &Signature) -> Result<Pattern, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.next() else {
            return Err(ParseError::syntax(
                pos,
                "expected formula, found end of input",
            ));
        };
        match tok.kind {
            TokenKind::LParen => {
                self.idx -= 1;
                self.paren(sig)
            }
            TokenKind::Ident { base, tag } => {
                if tag.is_none() {
                    if let Some(k) = prop_index(&base) {
                        return Ok(Pattern::Prop(k));
                    }
                }
                let token = display_token(&base, tag.as_deref());
                let c = sig
                    .lookup(&base, tag.as_deref())
                    .map_err(|e| e.into_parse(pos, &token))?;
                match c.arity() {
                    0 => Ok(Pattern::App(c, Vec::new())),
                    1 => {
                        let arg = self.unary(sig)?;
                        Ok(Pattern::App(c, vec![arg]))
                    }
                    n => Err(ParseError::Arity {
                        pos,
                        token: format!("{token} (use prefix form `({token} ...)`)"),
                        expected: n,
                    }),
                }
            }
            TokenKind::Meta(name) => Ok(Pattern::Meta(Arc::from(name.as_str()))),
            TokenKind::PropVar { name, tag } => Ok(Pattern::PropVar(PropVar {
                name: Arc::from(name.as_str()),
                kind: match tag {
                    None => PropVarKind::Host,
                    Some(t) => PropVarKind::Source(super::LogicTag::new(&t)),
                },
            })),
            _ => Err(ParseError::syntax(pos, "expected formula")),
        }
    }

    /// `(ctor arg ...)` or a parenthesised infix expression.
    fn paren(&mut self, sig: &Signature) -> Result<Pattern, ParseError> {
        let start = self.idx;
        let prefix_err = match self.prefix_app(sig) {
            Ok(p) => return Ok(p),
            Err((err, exclusive)) => {
                if exclusive {
                    return Err(err);
                }
                err
            }
        };
        self.idx = start;
        let grouped: Result<Pattern, ParseError> = (|| {
            self.expect(&TokenKind::LParen, "`(`")?;
            let inner = self.expr(sig, 0)?;
            self.expect(&TokenKind::RParen, "`)`")?;
            Ok(inner)
        })();
        match grouped {
            Ok(p) => Ok(p),
            Err(group_err) if prefix_err.pos() > group_err.pos() => Err(prefix_err),
            Err(group_err) => Err(group_err),
        }
    }

    /// The bool is true when the group reading cannot apply.
    fn prefix_app(&mut self, sig: &Signature) -> Result<Pattern, (ParseError, bool)> {
        let open = self.pos();
        self.next();
        let pos = self.pos();
        let Some(TokenKind::Ident { base, tag }) = self.peek().cloned() else {
            return Err((ParseError::syntax(open, "not a prefix application"), false));
        };
        if tag.is_none() && prop_index(&base).is_some() {
            return Err((ParseError::syntax(open, "not a prefix application"), false));
        }
        let token = display_token(&base, tag.as_deref());
        let c = sig
            .lookup(&base, tag.as_deref())
            .map_err(|e| (e.into_parse(pos, &token), true))?;
        self.next();
        let exclusive = c.arity() >= 2;
        let mut args = Vec::with_capacity(c.arity());
        for _ in 0..c.arity() {
            if self.peek() == Some(&TokenKind::RParen) {
                return Err((
                    ParseError::Arity {
                        pos,
                        token: token.clone(),
                        expected: c.arity(),
                    },
                    exclusive,
                ));
            }
            args.push(self.unary(sig).map_err(|e| (e, exclusive))?);
        }
        if !self.eat(&TokenKind::RParen) {
            let err = if exclusive && !self.at_end() && self.peek() != Some(&TokenKind::Comma) {
                ParseError::Arity {
                    pos,
                    token,
                    expected: c.arity(),
                }
            } else {
                ParseError::syntax(self.pos(), "expected `)`")
            };
            return Err((err, exclusive));
        }
        Ok(Pattern::App(c, args))
    }
}

fn display_token(base: &str, tag: Option<&str>) -> String {
    match tag {
        Some(t) => format!("{base}.{t}"),
        None => base.to_string(),
    }
}

pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Pattern, ParseError> {
    let mut toks = Tokens::new(text)?;
    let p = toks.pattern(sig)?;
    toks.expect_end()?;
    Ok(p)
}

/// Parses a closed formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let p = parse_pattern(text, sig)?;
    p.to_formula()
        .ok_or_else(|| ParseError::syntax(0, "variables are not allowed in a formula"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Constructor, LogicTag};

    fn plj() -> Signature {
        let t = |s: &str| {
            if s.is_empty() {
                LogicTag::shared()
            } else {
                LogicTag::new(s)
            }
        };
        Signature::new(
            "PLJ",
            vec![
                Constructor::new("bot", t(""), 0),
                Constructor::new("neg", t(""), 1),
                Constructor::new("conj", t(""), 2),
                Constructor::new("imp", t("pl"), 2),
                Constructor::new("disj", t("pl"), 2),
                Constructor::new("imp", t("it"), 2),
                Constructor::new("disj", t("it"), 2),
            ],
        )
        .unwrap()
        .with_source_props(LogicTag::new("pl"))
    }

    fn canon(s: &str) -> String {
        parse_formula(s, &plj()).unwrap().to_string()
    }

    #[test]
    fn prefix_and_infix_agree() {
        assert_eq!(
            canon("(imp.pl (neg (neg p1)) p1)"),
            "(imp.pl (neg (neg p1)) p1)"
        );
        assert_eq!(canon("neg neg p1 ->pl p1"), "(imp.pl (neg (neg p1)) p1)");
        assert_eq!(
            canon("neg((neg (neg p1)) & (neg p1))"),
            "(neg (conj (neg (neg p1)) (neg p1)))"
        );
        assert_eq!(canon("(neg p1 & p2)"), "(conj (neg p1) p2)");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(canon("p1 ->it p2 ->it p3"), "(imp.it p1 (imp.it p2 p3))");
        assert_eq!(
            canon("p1 & p2 |it p3 ->pl p1"),
            "(imp.pl (disj.it (conj p1 p2) p3) p1)"
        );
        assert_eq!(canon("p1 & p2 & p3"), "(conj (conj p1 p2) p3)");
    }

    #[test]
    fn prop_constants_and_bot() {
        assert_eq!(canon("p3.pl ->it bot"), "(imp.it p3.pl bot)");
        assert_eq!(canon("(bot)"), "bot");
    }

    #[test]
    fn errors_carry_positions() {
        let sig = plj();
        assert!(matches!(
            parse_formula("(imp.pl p1)", &sig),
            Err(ParseError::Arity { expected: 2, .. })
        ));
        assert!(matches!(
            parse_formula("p1 ->s4 p2", &sig),
            Err(ParseError::UnknownConstructor { pos: 3, .. })
        ));
        assert!(matches!(
            parse_formula("p1 -> p2", &sig),
            Err(ParseError::Ambiguous { pos: 3, .. })
        ));
        assert!(matches!(
            parse_formula("(neg p1", &sig),
            Err(ParseError::Syntax { pos: 7, .. })
        ));
        assert!(matches!(
            parse_formula("p1 p2", &sig),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(parse_formula("?b", &sig).is_err());
        assert!(parse_formula("p0", &sig).is_err());
        assert!(parse_formula("imp.pl p1 p2", &sig).is_err());
    }

    #[test]
    fn patterns_with_variables() {
        let p = parse_pattern("(imp.pl ?b1 !p.pl)", &plj()).unwrap();
        assert_eq!(p.to_string(), "(imp.pl ?b1 !p.pl)");
        assert_eq!(p.metas().len(), 1);
        assert_eq!(p.prop_vars().len(), 1);
    }
}
