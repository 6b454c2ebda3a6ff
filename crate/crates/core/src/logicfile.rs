//! The line-oriented logic-definition format: signature, translation,
//! calculus, semantics and combination blocks.
//!
//! ```text
//! signature It
//!   0: bot.it
//!   1: neg.it
//!   2: conj.it disj.it imp.it
//! end
//! translation godel PL -> It
//!   translate prop = comp(lift:neg, lift:neg, prop:_)
//!   translate imp.pl = comp(lift:neg, lift:conj, agg(proj:2:1, comp(lift:neg, proj:2:2)))
//! end
//! calculus G_It over It single
//!   axiom Ax: !p, $G => !p
//!   rule R_imp.it invertible: $G => ?b1 ->it ?b2 <= ?b1, $G => ?b2
//! end
//! combination PLJ
//!   translation godel
//!   host G_It
//!   transcription G_PLJ
//! end
//! semantics J3 over J3
//!   values 0 1/2 1
//!   designated 1/2 1
//!   row sim.j3 0 = 1
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::calculus::{parse_schema, GentzenCalculus, SuccedentMode};
use crate::error::{Error, Result};
use crate::formula::{Constructor, LogicTag, PropMap, Signature};
use crate::maps::parse_map_term;
use crate::semantics::{Matrix, MatrixLogic};
use crate::translation::{ConstructorTranslation, Identification};

/// A combination block: the identification is computed when the block is
/// read; calculi are referred to by name.
#[derive(Clone, Debug)]
pub struct CombinationDecl {
    pub name: String,
    pub identification: Identification,
    pub host_calculus: Option<String>,
    pub transcription: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct LogicFile {
    pub signatures: Vec<Signature>,
    pub translations: Vec<ConstructorTranslation>,
    pub calculi: Vec<GentzenCalculus>,
    pub semantics: Vec<MatrixLogic>,
    pub combinations: Vec<CombinationDecl>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::File {
        line,
        msg: msg.into(),
    }
}

fn at(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::File { .. } => e,
        other => err(line, other.to_string()),
    }
}

/// Resolves `base` or `base.tag` in `sig`.
pub fn constructor_by_token(sig: &Signature, token: &str) -> Result<Constructor> {
    let (base, tag) = match token.split_once('.') {
        Some((b, t)) => (b, Some(t)),
        None => (token, None),
    };
    sig.lookup(base, tag)
        .map_err(|e| Error::Parse(e.into_parse(0, token)))
}

fn parse_ctor_decl(token: &str, arity: usize) -> Constructor {
    match token.split_once('.') {
        Some((b, t)) => Constructor::new(b, LogicTag::new(t), arity),
        None => Constructor::new(token, LogicTag::shared(), arity),
    }
}

impl LogicFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut f = LogicFile::default();
        f.extend(text)?;
        Ok(f)
    }

    pub fn signature(&self, name: &str) -> Option<&Signature> {
        self.signatures
            .iter()
            .rev()
            .find(|s| s.name() == name)
            .or_else(|| {
                self.combinations
                    .iter()
                    .rev()
                    .find(|c| c.name == name)
                    .map(|c| c.identification.combined())
            })
    }

    pub fn translation(&self, name: &str) -> Option<&ConstructorTranslation> {
        self.translations.iter().rev().find(|t| t.name() == name)
    }

    pub fn calculus(&self, name: &str) -> Option<&GentzenCalculus> {
        self.calculi.iter().rev().find(|c| c.name() == name)
    }

    pub fn matrix_logic(&self, name: &str) -> Option<&MatrixLogic> {
        self.semantics.iter().rev().find(|m| m.name() == name)
    }

    pub fn combination(&self, name: &str) -> Option<&CombinationDecl> {
        self.combinations.iter().rev().find(|c| c.name == name)
    }

    /// Reads more blocks; names may refer to blocks read earlier.
    pub fn extend(&mut self, text: &str) -> Result<()> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut i = 0;
        while i < lines.len() {
            let (n, header) = lines[i];
            let end = lines[i + 1..]
                .iter()
                .position(|(_, l)| *l == "end")
                .map(|p| i + 1 + p)
                .ok_or_else(|| err(n, "block is not closed by `end`"))?;
            let body = &lines[i + 1..end];
            let words: Vec<&str> = header.split_whitespace().collect();
            match words.first().copied() {
                Some("signature") => self.read_signature(n, &words, body)?,
                Some("translation") => self.read_translation(n, &words, body)?,
                Some("calculus") => self.read_calculus(n, &words, body)?,
                Some("semantics") => self.read_semantics(n, &words, body)?,
                Some("combination") => self.read_combination(n, &words, body)?,
                _ => return Err(err(n, format!("unknown block `{header}`"))),
            }
            i = end + 1;
        }
        Ok(())
    }

    fn read_signature(&mut self, n: usize, words: &[&str], body: &[(usize, &str)]) -> Result<()> {
        let [_, name] = words else {
            return Err(err(n, "expected `signature NAME`"));
        };
        let mut ctors = Vec::new();
        for &(ln, line) in body {
            let (arity, tokens) = line
                .split_once(':')
                .ok_or_else(|| err(ln, "expected `ARITY: constructors`"))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| err(ln, format!("bad arity `{}`", arity.trim())))?;
            ctors.extend(tokens.split_whitespace().map(|t| parse_ctor_decl(t, arity)));
        }
        self.signatures
            .push(Signature::new(name, ctors).map_err(at(n))?);
        Ok(())
    }

    fn sig(&self, n: usize, name: &str) -> Result<Signature> {
        self.signature(name)
            .cloned()
            .ok_or_else(|| err(n, format!("unknown signature `{name}`")))
    }

    fn read_translation(&mut self, n: usize, words: &[&str], body: &[(usize, &str)]) -> Result<()> {
        let [_, name, source, "->", host] = words else {
            return Err(err(n, "expected `translation NAME SOURCE -> HOST`"));
        };
        let source = self.sig(n, source)?;
        let host = self.sig(n, host)?;
        let mut template = None;
        let mut prop_map = PropMap::identity();
        let mut ctor_map = Vec::new();
        for &(ln, line) in body {
            if let Some(pairs) = line.strip_prefix("propmap") {
                let mut out = Vec::new();
                for pair in pairs.split_whitespace() {
                    let parsed = pair.split_once(':').and_then(|(a, b)| {
                        Some((
                            crate::formula::prop_index(a)?,
                            crate::formula::prop_index(b)?,
                        ))
                    });
                    out.push(parsed.ok_or_else(|| err(ln, format!("bad propmap pair `{pair}`")))?);
                }
                prop_map = PropMap::from_pairs(out);
                continue;
            }
            let rest = line
                .strip_prefix("translate")
                .ok_or_else(|| err(ln, "expected `translate` or `propmap`"))?;
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| err(ln, "expected `translate X = MAP`"))?;
            let m = parse_map_term(rhs.trim(), &host).map_err(at(ln))?;
            match lhs.trim() {
                "prop" => template = Some(m),
                token => {
                    let c = constructor_by_token(&source, token).map_err(at(ln))?;
                    ctor_map.push((c, m));
                }
            }
        }
        let template = template.ok_or_else(|| err(n, "missing `translate prop = ...`"))?;
        let t = ConstructorTranslation::checked(name, source, host, ctor_map, template, prop_map)
            .map_err(at(n))?;
        self.translations.push(t);
        Ok(())
    }

    fn read_calculus(&mut self, n: usize, words: &[&str], body: &[(usize, &str)]) -> Result<()> {
        let [_, name, "over", sig, mode] = words else {
            return Err(err(
                n,
                "expected `calculus NAME over SIGNATURE single|multi`",
            ));
        };
        let mode = match *mode {
            "single" => SuccedentMode::Single,
            "multi" => SuccedentMode::Multi,
            other => return Err(err(n, format!("unknown succedent mode `{other}`"))),
        };
        let sig = self.sig(n, sig)?;
        let mut schemas = Vec::new();
        for &(ln, line) in body {
            let (head, text) = line
                .split_once(':')
                .ok_or_else(|| err(ln, "expected `KIND NAME [invertible]: schema`"))?;
            let head: Vec<&str> = head.split_whitespace().collect();
            let (kind, rule, invertible) = match head.as_slice() {
                [k, r] => (*k, *r, false),
                [k, r, "invertible"] => (*k, *r, true),
                _ => return Err(err(ln, "expected `KIND NAME [invertible]: schema`")),
            };
            let translation = match kind {
                "axiom" | "rule" => false,
                "trule" => true,
                other => return Err(err(ln, format!("unknown rule kind `{other}`"))),
            };
            let s = parse_schema(rule, text, &sig, invertible, translation).map_err(at(ln))?;
            if (kind == "axiom") != s.is_axiom() {
                return Err(err(
                    ln,
                    format!("`{rule}` is declared {kind} but has the other shape"),
                ));
            }
            schemas.push(s);
        }
        let g = GentzenCalculus::new(name, sig, mode, schemas).map_err(at(n))?;
        self.calculi.push(g);
        Ok(())
    }

    fn read_semantics(&mut self, n: usize, words: &[&str], body: &[(usize, &str)]) -> Result<()> {
        let [_, name, "over", sig] = words else {
            return Err(err(n, "expected `semantics NAME over SIGNATURE`"));
        };
        let sig = self.sig(n, sig)?;
        let mut values: Option<Vec<String>> = None;
        let mut designated: Vec<String> = Vec::new();
        let mut rows: Vec<(usize, &str)> = Vec::new();
        for &(ln, line) in body {
            let mut w = line.split_whitespace();
            match w.next() {
                Some("values") => values = Some(w.map(str::to_string).collect()),
                Some("designated") => designated = w.map(str::to_string).collect(),
                Some("row") => rows.push((ln, line)),
                _ => return Err(err(ln, "expected `values`, `designated` or `row`")),
            }
        }
        let values = values.ok_or_else(|| err(n, "missing `values`"))?;
        let d: Vec<&str> = designated.iter().map(String::as_str).collect();
        let matrix = Matrix::new(values, &d).map_err(at(n))?;
        let mut tables: BTreeMap<Constructor, Vec<Option<usize>>> = sig
            .constructors()
            .iter()
            .map(|c| (c.clone(), vec![None; matrix.size().pow(c.arity() as u32)]))
            .collect();
        for (ln, line) in rows {
            let (lhs, out) = line
                .split_once('=')
                .ok_or_else(|| err(ln, "expected `row CTOR ARGS = VALUE`"))?;
            let mut w = lhs.split_whitespace().skip(1);
            let c = constructor_by_token(&sig, w.next().unwrap_or("")).map_err(at(ln))?;
            let value = |s: &str| {
                matrix
                    .value(s)
                    .ok_or_else(|| err(ln, format!("`{s}` is not a truth value")))
            };
            let args = w.map(value).collect::<Result<Vec<_>>>()?;
            if args.len() != c.arity() {
                return Err(err(
                    ln,
                    format!("`{}` takes {} arguments", c.token(), c.arity()),
                ));
            }
            let index = args.iter().fold(0, |acc, &a| acc * matrix.size() + a);
            tables.get_mut(&c).expect("table per constructor")[index] = Some(value(out.trim())?);
        }
        let mut full = BTreeMap::new();
        for (c, rows) in tables {
            let rows = rows
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err(n, format!("table for `{}` is missing rows", c.token())))?;
            full.insert(c, rows);
        }
        self.semantics
            .push(MatrixLogic::new(name, sig, matrix, full).map_err(at(n))?);
        Ok(())
    }

    fn read_combination(&mut self, n: usize, words: &[&str], body: &[(usize, &str)]) -> Result<()> {
        let [_, name] = words else {
            return Err(err(n, "expected `combination NAME`"));
        };
        let mut translation = None;
        let mut host = None;
        let mut transcription = None;
        for &(ln, line) in body {
            match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["translation", t] => translation = Some(*t),
                ["host", h] => host = Some(h.to_string()),
                ["transcription", t] => transcription = Some(t.to_string()),
                _ => return Err(err(ln, "expected `translation`, `host` or `transcription`")),
            }
        }
        let t = translation.ok_or_else(|| err(n, "missing `translation`"))?;
        let t = self
            .translation(t)
            .ok_or_else(|| err(n, format!("unknown translation `{t}`")))?;
        let identification = t.identify_common(name).map_err(at(n))?;
        self.combinations.push(CombinationDecl {
            name: name.to_string(),
            identification,
            host_calculus: host,
            transcription,
        });
        Ok(())
    }
}

/// A signature block.
pub fn write_signature(sig: &Signature) -> String {
    let mut out = format!("signature {}\n", sig.name());
    let mut by_arity: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for c in sig.constructors() {
        by_arity.entry(c.arity()).or_default().push(c.token());
    }
    for (a, tokens) in by_arity {
        let _ = writeln!(out, "  {a}: {}", tokens.join(" "));
    }
    out.push_str("end");
    out
}

/// A semantics block listing every table row.
pub fn write_semantics(m: &MatrixLogic) -> String {
    let mx = m.matrix();
    let mut out = format!("semantics {} over {}\n", m.name(), m.signature().name());
    let _ = writeln!(out, "  values {}", mx.labels().join(" "));
    let d: Vec<&str> = (0..mx.size())
        .filter(|&v| mx.is_designated(v))
        .map(|v| mx.label(v))
        .collect();
    let _ = writeln!(out, "  designated {}", d.join(" "));
    for c in m.signature().constructors() {
        let rows = m.table(c).expect("total tables");
        for (r, v) in rows.iter().enumerate() {
            let mut args = Vec::new();
            let mut rest = r;
            for _ in 0..c.arity() {
                args.push(mx.label(rest % mx.size()).to_string());
                rest /= mx.size();
            }
            args.reverse();
            let args = if args.is_empty() {
                String::new()
            } else {
                format!(" {}", args.join(" "))
            };
            let _ = writeln!(out, "  row {}{} = {}", c.token(), args, mx.label(*v));
        }
    }
    out.push_str("end");
    out
}

/// A combination block.
pub fn write_combination(c: &CombinationDecl) -> String {
    let mut out = format!(
        "combination {}\n  translation {}\n",
        c.name,
        c.identification.translation().name()
    );
    if let Some(h) = &c.host_calculus {
        let _ = writeln!(out, "  host {h}");
    }
    if let Some(t) = &c.transcription {
        let _ = writeln!(out, "  transcription {t}");
    }
    out.push_str("end");
    out
}
