//! Signatures, constructors and formula trees.
//!
//! A [`Formula`] is either a propositional symbol `p<k>` of the ambient
//! signature or a constructor applied to exactly `arity` sub-formulas.
//! Constructors carry a [`LogicTag`]; constructors shared by two logics after
//! identification carry the empty (shared) tag and render without a suffix.

mod enumerate;
mod parse;
mod pattern;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};

pub use enumerate::{count_formulas, enumerate_formulas, random_formula, sample_formulas};
pub use parse::{parse_formula, parse_pattern, Token, TokenKind, Tokens};
pub use pattern::{Bindings, Pattern, PropVar, PropVarKind};

/// Logic annotation on a constructor, e.g. `it`, `pl`, `s4`, `j3`.
///
/// The empty tag marks a constructor shared by both logics of a combination.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicTag(Arc<str>);

impl LogicTag {
    pub fn new(name: &str) -> Self {
        LogicTag(Arc::from(name))
    }

    pub fn shared() -> Self {
        LogicTag(Arc::from(""))
    }

    pub fn is_shared(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for LogicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_shared() {
            f.write_str("<shared>")
        } else {
            f.write_str(&self.0)
        }
    }
}

impl fmt::Display for LogicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constructor {
    base: Arc<str>,
    tag: LogicTag,
    arity: usize,
}

impl Constructor {
    pub fn new(base: &str, tag: LogicTag, arity: usize) -> Self {
        Constructor {
            base: Arc::from(base),
            tag,
            arity,
        }
    }

    /// The 0-ary constructor standing for source prop symbol `p<index>` in a
    /// combined signature.
    pub fn prop_constant(index: u32, tag: LogicTag) -> Self {
        Constructor::new(&format!("p{index}"), tag, 0)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn tag(&self) -> &LogicTag {
        &self.tag
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn with_tag(&self, tag: LogicTag) -> Self {
        Constructor {
            base: self.base.clone(),
            tag,
            arity: self.arity,
        }
    }

    /// `Some(k)` when this is a prop constant `p<k>.<tag>`.
    pub fn prop_constant_index(&self) -> Option<u32> {
        if self.arity != 0 || self.tag.is_shared() {
            return None;
        }
        prop_index(&self.base)
    }

    /// Token as written in the grammar: `base` or `base.tag`.
    pub fn token(&self) -> String {
        if self.tag.is_shared() {
            self.base.to_string()
        } else {
            format!("{}.{}", self.base, self.tag)
        }
    }
}

impl fmt::Debug for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.token(), self.arity)
    }
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Parses `p<k>` with `k >= 1`.
pub(crate) fn prop_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

/// Index bijection between the prop symbols of two logics.
///
/// Identity everywhere except on a finite set of overrides, which must form a
/// permutation of their support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropMap {
    overrides: BTreeMap<u32, u32>,
}

impl PropMap {
    pub fn identity() -> Self {
        PropMap::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let overrides = pairs.into_iter().filter(|(a, b)| a != b).collect();
        PropMap { overrides }
    }

    pub fn is_identity(&self) -> bool {
        self.overrides.is_empty()
    }

    pub fn apply(&self, index: u32) -> u32 {
        self.overrides.get(&index).copied().unwrap_or(index)
    }

    pub fn invert(&self, index: u32) -> Option<u32> {
        if let Some((from, _)) = self.overrides.iter().find(|(_, to)| **to == index) {
            return Some(*from);
        }
        if self.overrides.contains_key(&index) {
            // index is moved away and nothing maps onto it
            return None;
        }
        Some(index)
    }

    /// True when the overrides permute their own support.
    pub fn is_bijective(&self) -> bool {
        let domain: BTreeSet<u32> = self.overrides.keys().copied().collect();
        let image: BTreeSet<u32> = self.overrides.values().copied().collect();
        domain == image && image.len() == self.overrides.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.overrides.iter().map(|(a, b)| (*a, *b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    name: String,
    constructors: Vec<Constructor>,
    source_props: Option<LogicTag>,
}

impl Signature {
    pub fn new(name: &str, constructors: Vec<Constructor>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &constructors {
            if c.base().is_empty() || c.base().contains('.') {
                return Err(Error::Signature(format!(
                    "bad constructor name `{}`",
                    c.base()
                )));
            }
            if prop_index(c.base()).is_some() {
                return Err(Error::Signature(format!(
                    "`{}` clashes with the prop symbol namespace",
                    c.token()
                )));
            }
            if !seen.insert((c.base.clone(), c.tag.clone())) {
                return Err(Error::Signature(format!(
                    "constructor `{}` declared twice",
                    c.token()
                )));
            }
        }
        let mut constructors = constructors;
        // stable: arity first, declaration order within an arity
        constructors.sort_by_key(|c| c.arity);
        Ok(Signature {
            name: name.to_string(),
            constructors,
            source_props: None,
        })
    }

    /// Adds the 0-ary prop constants `p<k>.<tag>` for every `k`.
    pub fn with_source_props(mut self, tag: LogicTag) -> Self {
        self.source_props = Some(tag);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn constructors(&self) -> &[Constructor] {
        &self.constructors
    }

    pub fn source_props(&self) -> Option<&LogicTag> {
        self.source_props.as_ref()
    }

    pub fn of_arity(&self, arity: usize) -> impl Iterator<Item = &Constructor> {
        self.constructors.iter().filter(move |c| c.arity == arity)
    }

    pub fn contains(&self, c: &Constructor) -> bool {
        if let (Some(_), Some(tag)) = (c.prop_constant_index(), &self.source_props) {
            if c.tag() == tag {
                return true;
            }
        }
        self.constructors.contains(c)
    }

    /// Resolves a constructor token. A bare base name prefers the shared
    /// constructor and otherwise accepts a unique constructor with that base.
    pub fn lookup(&self, base: &str, tag: Option<&str>) -> Result<Constructor, LookupError> {
        if let Some(tag) = tag {
            if let (Some(_), Some(src)) = (prop_index(base), &self.source_props) {
                if src.as_str() == tag {
                    return Ok(Constructor::new(base, src.clone(), 0));
                }
            }
            return self
                .constructors
                .iter()
                .find(|c| c.base() == base && c.tag().as_str() == tag)
                .cloned()
                .ok_or(LookupError::Unknown);
        }
        if let Some(c) = self
            .constructors
            .iter()
            .find(|c| c.base() == base && c.tag().is_shared())
        {
            return Ok(c.clone());
        }
        let candidates: Vec<&Constructor> = self
            .constructors
            .iter()
            .filter(|c| c.base() == base)
            .collect();
        match candidates.as_slice() {
            [] => Err(LookupError::Unknown),
            [c] => Ok((*c).clone()),
            many => Err(LookupError::Ambiguous(
                many.iter()
                    .map(|c| c.token())
                    .collect::<Vec<_>>()
                    .join(", "),
            )),
        }
    }

    /// Checks that every constructor of `f` belongs to this signature.
    pub fn check(&self, f: &Formula) -> Result<()> {
        match f.kind() {
            FormulaKind::Prop(_) => Ok(()),
            FormulaKind::App(c, args) => {
                if !self.contains(c) {
                    return Err(Error::SignatureMismatch {
                        formula: f.to_string(),
                        signature: self.name.clone(),
                        reason: format!("unknown constructor `{}`", c.token()),
                    });
                }
                args.iter().try_for_each(|a| self.check(a))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LookupError {
    Unknown,
    Ambiguous(String),
}

impl LookupError {
    pub(crate) fn into_parse(self, pos: usize, token: &str) -> ParseError {
        match self {
            LookupError::Unknown => ParseError::UnknownConstructor {
                pos,
                token: token.to_string(),
            },
            LookupError::Ambiguous(candidates) => ParseError::Ambiguous {
                pos,
                token: token.to_string(),
                candidates,
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum FormulaKind {
    Prop(u32),
    App(Constructor, Vec<Formula>),
}

struct Node {
    hash: u64,
    depth: usize,
    kind: FormulaKind,
}

/// Immutable, cheaply clonable formula tree with structural equality.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

impl Formula {
    pub fn prop(index: u32) -> Self {
        let mut h = DefaultHasher::new();
        0u8.hash(&mut h);
        index.hash(&mut h);
        Formula(Arc::new(Node {
            hash: h.finish(),
            depth: 0,
            kind: FormulaKind::Prop(index),
        }))
    }

    /// Panics if `args.len()` differs from the constructor's arity.
    pub fn app(c: Constructor, args: Vec<Formula>) -> Self {
        assert_eq!(
            c.arity(),
            args.len(),
            "constructor `{}` applied to {} argument(s)",
            c.token(),
            args.len()
        );
        let mut h = DefaultHasher::new();
        1u8.hash(&mut h);
        c.hash(&mut h);
        for a in &args {
            a.0.hash.hash(&mut h);
        }
        let depth = args.iter().map(|a| a.depth() + 1).max().unwrap_or(0);
        Formula(Arc::new(Node {
            hash: h.finish(),
            depth,
            kind: FormulaKind::App(c, args),
        }))
    }

    pub fn constant(c: Constructor) -> Self {
        Formula::app(c, Vec::new())
    }

    pub fn unary(c: Constructor, arg: Formula) -> Self {
        Formula::app(c, vec![arg])
    }

    pub fn binary(c: Constructor, lhs: Formula, rhs: Formula) -> Self {
        Formula::app(c, vec![lhs, rhs])
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn as_prop(&self) -> Option<u32> {
        match self.kind() {
            FormulaKind::Prop(k) => Some(*k),
            FormulaKind::App(..) => None,
        }
    }

    pub fn head(&self) -> Option<&Constructor> {
        match self.kind() {
            FormulaKind::Prop(_) => None,
            FormulaKind::App(c, _) => Some(c),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self.kind() {
            FormulaKind::Prop(_) => &[],
            FormulaKind::App(_, args) => args,
        }
    }

    /// Constructor-nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Formula::size).sum::<usize>()
    }

    /// Indices of the prop symbols occurring in the formula.
    pub fn props(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<u32>) {
        match self.kind() {
            FormulaKind::Prop(k) => {
                out.insert(*k);
            }
            FormulaKind::App(_, args) => args.iter().for_each(|a| a.collect_props(out)),
        }
    }

    pub fn constructors(&self) -> BTreeSet<Constructor> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Some(c) = f.head() {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        for a in self.args() {
            a.walk(visit);
        }
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        self.0
            .hash
            .cmp(&other.0.hash)
            .then_with(|| self.0.kind.cmp(&other.0.kind))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FormulaKind::Prop(k) => write!(f, "p{k}"),
            FormulaKind::App(c, args) if args.is_empty() => write!(f, "{}", c.token()),
            FormulaKind::App(c, args) => {
                write!(f, "({}", c.token())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical prefix rendering.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg() -> Constructor {
        Constructor::new("neg", LogicTag::new("it"), 1)
    }

    #[test]
    fn bot_renders_bare() {
        let bot = Constructor::new("bot", LogicTag::shared(), 0);
        assert_eq!(render_formula(&Formula::constant(bot)), "bot");
    }

    #[test]
    fn depth_counts_nesting() {
        let f = Formula::unary(neg(), Formula::unary(neg(), Formula::prop(1)));
        assert_eq!(f.depth(), 2);
        assert_eq!(f.size(), 3);
        assert_eq!(f.to_string(), "(neg.it (neg.it p1))");
    }

    #[test]
    #[should_panic]
    fn arity_is_enforced() {
        Formula::app(neg(), vec![]);
    }

    #[test]
    fn signature_rejects_duplicates_and_prop_names() {
        let c = Constructor::new("neg", LogicTag::new("it"), 1);
        assert!(Signature::new("x", vec![c.clone(), c]).is_err());
        let p = Constructor::new("p3", LogicTag::new("it"), 0);
        assert!(Signature::new("x", vec![p]).is_err());
    }

    #[test]
    fn lookup_prefers_shared_then_unique() {
        let sig = Signature::new(
            "x",
            vec![
                Constructor::new("imp", LogicTag::new("it"), 2),
                Constructor::new("imp", LogicTag::new("pl"), 2),
                Constructor::new("neg", LogicTag::shared(), 1),
                Constructor::new("box", LogicTag::new("s4"), 1),
            ],
        )
        .unwrap();
        assert_eq!(sig.lookup("box", None).unwrap().token(), "box.s4");
        assert_eq!(sig.lookup("neg", None).unwrap().token(), "neg");
        assert!(matches!(
            sig.lookup("imp", None),
            Err(LookupError::Ambiguous(_))
        ));
        assert_eq!(sig.lookup("imp", Some("pl")).unwrap().token(), "imp.pl");
        assert_eq!(sig.lookup("dia", None), Err(LookupError::Unknown));
    }

    #[test]
    fn prop_map_bijectivity() {
        assert!(PropMap::identity().is_bijective());
        let swap = PropMap::from_pairs([(1, 2), (2, 1)]);
        assert!(swap.is_bijective());
        assert_eq!(swap.apply(1), 2);
        assert_eq!(swap.invert(2), Some(1));
        assert!(!PropMap::from_pairs([(1, 2)]).is_bijective());
    }
}
