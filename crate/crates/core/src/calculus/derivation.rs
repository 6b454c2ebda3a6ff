use std::fmt;

use super::matching::{match_backward_with, Splits};
use super::{parse_sequent, GentzenCalculus, Sequent, SuccedentMode};
use crate::error::{Error, Result};
use crate::formula::Signature;

/// `N. sequent ; rule premises`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationLine {
    pub number: usize,
    pub sequent: Sequent,
    pub rule: String,
    pub premises: Vec<usize>,
}

impl fmt::Display for DerivationLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} ; {}", self.number, self.sequent, self.rule)?;
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        if !premises.is_empty() {
            write!(f, " {}", premises.join(" "))?;
        }
        Ok(())
    }
}

/// A derivation written top-down: line 1 is the end sequent and every line
/// cites the later lines it is inferred from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    lines: Vec<DerivationLine>,
}

impl Derivation {
    pub fn new(lines: Vec<DerivationLine>) -> Self {
        Derivation { lines }
    }

    pub fn lines(&self) -> &[DerivationLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn end_sequent(&self) -> Option<&Sequent> {
        self.lines.first().map(|l| &l.sequent)
    }

    pub fn line(&self, number: usize) -> Option<&DerivationLine> {
        self.lines.iter().find(|l| l.number == number)
    }

    /// Rule names in line order.
    pub fn rules_used(&self) -> Vec<&str> {
        self.lines.iter().map(|l| l.rule.as_str()).collect()
    }

    /// Parses the line format; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let file_err = |msg: String| Error::File { line: i + 1, msg };
            let (number, rest) = line
                .split_once('.')
                .ok_or_else(|| file_err("expected `N.` at the start of the line".into()))?;
            let number: usize = number
                .trim()
                .parse()
                .map_err(|_| file_err(format!("bad line number `{}`", number.trim())))?;
            let (seq, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| file_err("expected `; rule` after the sequent".into()))?;
            let sequent = parse_sequent(seq, sig).map_err(|e| file_err(e.to_string()))?;
            let mut words = just
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|w| !w.is_empty());
            let rule = words
                .next()
                .ok_or_else(|| file_err("missing rule name".into()))?
                .to_string();
            let premises = words
                .map(|w| {
                    w.parse()
                        .map_err(|_| file_err(format!("bad premise reference `{w}`")))
                })
                .collect::<Result<Vec<usize>>>()?;
            lines.push(DerivationLine {
                number,
                sequent,
                rule,
                premises,
            });
        }
        Ok(Derivation { lines })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

fn same_multiset(a: &[Sequent], b: &[&Sequent]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut taken = vec![false; b.len()];
    a.iter().all(|s| {
        let hit = (0..b.len()).find(|&j| !taken[j] && b[j] == s);
        hit.map(|j| taken[j] = true).is_some()
    })
}

/// Checks every line of `d` against `g`. Each line must be an instance of its
/// rule whose premises are exactly the cited later lines.
pub fn check_derivation(g: &GentzenCalculus, d: &Derivation) -> Result<(), Vec<Diagnostic>> {
    let mut out = Vec::new();
    if d.is_empty() {
        out.push(Diagnostic {
            line: 0,
            reason: "empty derivation".into(),
        });
    }
    let mut last = 0;
    for l in d.lines() {
        let mut bad = |reason: String| {
            out.push(Diagnostic {
                line: l.number,
                reason,
            })
        };
        if l.number <= last {
            bad(format!(
                "line numbers must increase, but {} follows {last}",
                l.number
            ));
        }
        last = l.number;
        if let Err(e) = l.sequent.check_over(g.signature()) {
            bad(e.to_string());
            continue;
        }
        if g.mode() == SuccedentMode::Single && l.sequent.right().len() > 1 {
            bad("more than one succedent formula in a single-succedent calculus".into());
            continue;
        }
        let Some(rule) = g.rule(&l.rule) else {
            bad(format!("no rule `{}` in {}", l.rule, g.name()));
            continue;
        };
        let mut cited = Vec::new();
        for &p in &l.premises {
            if p <= l.number {
                bad(format!("premise {p} does not come after line {}", l.number));
            } else if let Some(pl) = d.line(p) {
                cited.push(&pl.sequent);
            } else {
                bad(format!("premise {p} is not a line of the derivation"));
            }
        }
        if cited.len() != l.premises.len() {
            continue;
        }
        let matches = match_backward_with(rule, &l.sequent, Splits::All);
        if matches.is_empty() {
            bad(format!("`{}` is not a conclusion of {}", l.sequent, l.rule));
            continue;
        }
        if !matches.iter().any(|m| same_multiset(&m.premises, &cited)) {
            let expected = &matches[0].premises;
            let shown: Vec<String> = expected.iter().map(|s| format!("`{s}`")).collect();
            bad(format!(
                "cited premises do not fit {}; expected {} premise(s) such as {}",
                l.rule,
                expected.len(),
                if shown.is_empty() {
                    "none".to_string()
                } else {
                    shown.join(" and ")
                }
            ));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
