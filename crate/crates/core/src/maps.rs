//! The algebra of maps: lifted constructors, prop-symbol leaves, projections,
//! aggregation and composition, applied symbolically to formula tuples.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::formula::{prop_index, Constructor, Formula, Pattern, Signature};

/// Anything a map term can be evaluated over.
pub trait Term: Clone {
    fn app(c: &Constructor, args: Vec<Self>) -> Self;
    fn prop(index: u32) -> Self;
}

impl Term for Formula {
    fn app(c: &Constructor, args: Vec<Self>) -> Self {
        Formula::app(c.clone(), args)
    }

    fn prop(index: u32) -> Self {
        Formula::prop(index)
    }
}

impl Term for Pattern {
    fn app(c: &Constructor, args: Vec<Self>) -> Self {
        Pattern::App(c.clone(), args)
    }

    fn prop(index: u32) -> Self {
        Pattern::Prop(index)
    }
}

/// Leaf standing for a host prop symbol, or for the distinguished hole of a
/// prop template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropSlot {
    Hole,
    Symbol(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapNode {
    Lift(Constructor),
    PropConst(PropSlot),
    Proj { n: usize, i: usize },
    Agg(Vec<MapTerm>),
    Comp(Box<MapTerm>, Box<MapTerm>),
}

/// A well-formed map term. Arity and output width are fixed at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapTerm {
    node: MapNode,
    arity: usize,
    width: usize,
}

impl MapTerm {
    pub fn lift(c: Constructor) -> Self {
        let arity = c.arity();
        MapTerm {
            node: MapNode::Lift(c),
            arity,
            width: 1,
        }
    }

    pub fn prop(index: u32) -> Self {
        MapTerm {
            node: MapNode::PropConst(PropSlot::Symbol(index)),
            arity: 0,
            width: 1,
        }
    }

    pub fn hole() -> Self {
        MapTerm {
            node: MapNode::PropConst(PropSlot::Hole),
            arity: 0,
            width: 1,
        }
    }

    pub fn proj(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::MapTerm(format!("proj:{n}:{i} needs 1 <= i <= n")));
        }
        Ok(MapTerm {
            node: MapNode::Proj { n, i },
            arity: n,
            width: 1,
        })
    }

    pub fn agg(children: Vec<MapTerm>) -> Result<Self> {
        let Some(first) = children.first() else {
            return Err(Error::MapTerm("empty aggregation".into()));
        };
        let arity = first.arity;
        if let Some(bad) = children.iter().find(|c| c.arity != arity) {
            return Err(Error::MapTerm(format!(
                "aggregated maps disagree on arity: `{first}` takes {arity}, `{bad}` takes {}",
                bad.arity
            )));
        }
        let width = children.iter().map(|c| c.width).sum();
        Ok(MapTerm {
            node: MapNode::Agg(children),
            arity,
            width,
        })
    }

    /// `outer ∘ inner`; the inner output width must equal the outer arity.
    pub fn comp(outer: MapTerm, inner: MapTerm) -> Result<Self> {
        if outer.arity != inner.width {
            return Err(Error::MapTerm(format!(
                "cannot compose `{outer}` (arity {}) after `{inner}` (width {})",
                outer.arity, inner.width
            )));
        }
        let (arity, width) = (inner.arity, outer.width);
        Ok(MapTerm {
            node: MapNode::Comp(Box::new(outer), Box::new(inner)),
            arity,
            width,
        })
    }

    /// Right-nested composition `m1 ∘ m2 ∘ ... ∘ mk`.
    pub fn chain(maps: Vec<MapTerm>) -> Result<Self> {
        let mut it = maps.into_iter().rev();
        let mut acc = it
            .next()
            .ok_or_else(|| Error::MapTerm("empty composition".into()))?;
        for outer in it {
            acc = MapTerm::comp(outer, acc)?;
        }
        Ok(acc)
    }

    pub fn node(&self) -> &MapNode {
        &self.node
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn as_lift(&self) -> Option<&Constructor> {
        match &self.node {
            MapNode::Lift(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_bare_hole(&self) -> bool {
        matches!(self.node, MapNode::PropConst(PropSlot::Hole))
    }

    pub fn has_hole(&self) -> bool {
        let mut found = false;
        self.visit(&mut |m| found |= matches!(m.node, MapNode::PropConst(PropSlot::Hole)));
        found
    }

    pub fn constructors(&self) -> BTreeSet<Constructor> {
        let mut out = BTreeSet::new();
        self.visit(&mut |m| {
            if let MapNode::Lift(c) = &m.node {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn prop_symbols(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit(&mut |m| {
            if let MapNode::PropConst(PropSlot::Symbol(k)) = m.node {
                out.insert(k);
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&MapTerm)) {
        f(self);
        match &self.node {
            MapNode::Agg(children) => children.iter().for_each(|c| c.visit(f)),
            MapNode::Comp(o, i) => {
                o.visit(f);
                i.visit(f);
            }
            _ => {}
        }
    }

    /// Rewrites every lifted constructor.
    pub fn map_constructors(&self, f: &impl Fn(&Constructor) -> Constructor) -> MapTerm {
        let node = match &self.node {
            MapNode::Lift(c) => MapNode::Lift(f(c)),
            MapNode::Agg(children) => {
                MapNode::Agg(children.iter().map(|c| c.map_constructors(f)).collect())
            }
            MapNode::Comp(o, i) => MapNode::Comp(
                Box::new(o.map_constructors(f)),
                Box::new(i.map_constructors(f)),
            ),
            other => other.clone(),
        };
        MapTerm { node, ..*self }
    }

    /// Evaluates a width-1 map on `args`.
    pub fn apply<T: Term>(&self, args: &[T]) -> Result<T> {
        self.apply_with_hole(args, None)
    }

    /// Like [`MapTerm::apply`], filling the hole with `hole`.
    pub fn apply_with_hole<T: Term>(&self, args: &[T], hole: Option<&T>) -> Result<T> {
        if self.width != 1 {
            return Err(Error::MapTerm(format!(
                "`{self}` yields a {}-tuple, not a formula",
                self.width
            )));
        }
        let mut out = self.apply_tuple(args, hole)?;
        Ok(out.pop().expect("width 1"))
    }

    pub fn apply_tuple<T: Term>(&self, args: &[T], hole: Option<&T>) -> Result<Vec<T>> {
        if args.len() != self.arity {
            return Err(Error::MapArity {
                expected: self.arity,
                found: args.len(),
            });
        }
        let mut out = Vec::with_capacity(self.width);
        self.eval(args, hole, &mut out)?;
        Ok(out)
    }

    fn eval<T: Term>(&self, args: &[T], hole: Option<&T>, out: &mut Vec<T>) -> Result<()> {
        match &self.node {
            MapNode::Lift(c) => out.push(T::app(c, args.to_vec())),
            MapNode::PropConst(PropSlot::Symbol(k)) => out.push(T::prop(*k)),
            MapNode::PropConst(PropSlot::Hole) => out.push(
                hole.cloned()
                    .ok_or_else(|| Error::MapTerm("prop hole left unfilled".into()))?,
            ),
            MapNode::Proj { i, .. } => out.push(args[i - 1].clone()),
            MapNode::Agg(children) => {
                for c in children {
                    c.eval(args, hole, out)?;
                }
            }
            MapNode::Comp(outer, inner) => {
                let mut mid = Vec::with_capacity(inner.width);
                inner.eval(args, hole, &mut mid)?;
                outer.eval(&mid, hole, out)?;
            }
        }
        Ok(())
    }

    /// Checks that every lifted constructor belongs to `sig`.
    pub fn check_over(&self, sig: &Signature) -> Result<()> {
        match self.constructors().into_iter().find(|c| !sig.contains(c)) {
            Some(c) => Err(Error::MapTerm(format!(
                "`{}` is not a constructor of {}",
                c.token(),
                sig.name()
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for MapTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            MapNode::Lift(c) => write!(f, "lift:{}", c.token()),
            MapNode::PropConst(PropSlot::Hole) => f.write_str("prop:_"),
            MapNode::PropConst(PropSlot::Symbol(k)) => write!(f, "prop:p{k}"),
            MapNode::Proj { n, i } => write!(f, "proj:{n}:{i}"),
            MapNode::Agg(children) => {
                f.write_str("agg(")?;
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            MapNode::Comp(o, i) => write!(f, "comp({o}, {i})"),
        }
    }
}

/// Reads the textual map-term form; constructors resolve in `sig`.
/// `comp` accepts two or more arguments, nesting to the right.
pub fn parse_map_term(text: &str, sig: &Signature) -> Result<MapTerm> {
    let mut p = MapParser { text, pos: 0, sig };
    let m = p.term()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(ParseError::syntax(p.pos, "unexpected trailing input").into());
    }
    Ok(m)
}

struct MapParser<'a> {
    text: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl MapParser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> (usize, &str) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|ch: char| !(ch.is_ascii_alphanumeric() || matches!(ch, '_' | '.' | ':')))
            .unwrap_or(rest.len());
        self.pos += len;
        (start, &self.text[start..start + len])
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn args(&mut self) -> Result<Vec<MapTerm>> {
        if !self.eat('(') {
            return Err(ParseError::syntax(self.pos, "expected `(`").into());
        }
        let mut out = vec![self.term()?];
        while self.eat(',') {
            out.push(self.term()?);
        }
        if !self.eat(')') {
            return Err(ParseError::syntax(self.pos, "expected `,` or `)`").into());
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<MapTerm> {
        let (start, word) = self.word();
        let word = word.to_string();
        let bad = |msg: &str| -> Error { ParseError::syntax(start, msg).into() };
        if word == "agg" {
            return MapTerm::agg(self.args()?);
        }
        if word == "comp" {
            let parts = self.args()?;
            if parts.len() < 2 {
                return Err(bad("comp needs at least two maps"));
            }
            return MapTerm::chain(parts);
        }
        if let Some(token) = word.strip_prefix("lift:") {
            let (base, tag) = match token.split_once('.') {
                Some((b, t)) => (b, Some(t)),
                None => (token, None),
            };
            let c = self
                .sig
                .lookup(base, tag)
                .map_err(|e| Error::Parse(e.into_parse(start, token)))?;
            return Ok(MapTerm::lift(c));
        }
        if let Some(p) = word.strip_prefix("prop:") {
            if p == "_" {
                return Ok(MapTerm::hole());
            }
            return prop_index(p)
                .map(MapTerm::prop)
                .ok_or_else(|| bad("expected `prop:_` or `prop:p<k>`"));
        }
        if let Some(rest) = word.strip_prefix("proj:") {
            let parsed = rest
                .split_once(':')
                .and_then(|(n, i)| Some((n.parse().ok()?, i.parse().ok()?)));
            let (n, i) = parsed.ok_or_else(|| bad("expected `proj:<n>:<i>`"))?;
            return MapTerm::proj(n, i);
        }
        Err(bad("expected lift:, prop:, proj:, agg( or comp("))
    }
}
