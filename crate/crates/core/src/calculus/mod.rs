//! Sequents, rule schemas and Gentzen calculi.

mod combine;
mod derivation;
mod matching;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::formula::{
    Constructor, Formula, LogicTag, Pattern, PropVarKind, Signature, TokenKind, Tokens,
};

pub use combine::{
    combine_calculus, crosscheck, renamed_host, strict_self_containment, CrosscheckDiff,
    SelfContainment,
};
pub use derivation::{check_derivation, Derivation, DerivationLine, Diagnostic};
pub use matching::{match_backward, match_backward_with, Instance, Splits};

/// A pair of finite multisets of formulas. Equality and hashing ignore the
/// order of formulas; display keeps it.
#[derive(Clone, Debug, Default)]
pub struct Sequent {
    left: Vec<Formula>,
    right: Vec<Formula>,
}

impl Sequent {
    pub fn new(left: Vec<Formula>, right: Vec<Formula>) -> Self {
        Sequent { left, right }
    }

    /// `=> φ`
    pub fn goal(f: Formula) -> Self {
        Sequent::new(Vec::new(), vec![f])
    }

    pub fn left(&self) -> &[Formula] {
        &self.left
    }

    pub fn right(&self) -> &[Formula] {
        &self.right
    }

    /// Both sides sorted.
    pub fn canonical(&self) -> (Vec<Formula>, Vec<Formula>) {
        let mut l = self.left.clone();
        let mut r = self.right.clone();
        l.sort();
        r.sort();
        (l, r)
    }

    /// Both sides as sets: the sequent up to contraction.
    pub fn set_key(&self) -> (Vec<Formula>, Vec<Formula>) {
        let (mut l, mut r) = self.canonical();
        l.dedup();
        r.dedup();
        (l, r)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.left.iter().chain(&self.right)
    }

    pub fn check_over(&self, sig: &Signature) -> Result<()> {
        self.formulas().try_for_each(|f| sig.check(f))
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        self.left.len() == other.left.len()
            && self.right.len() == other.right.len()
            && self.canonical() == other.canonical()
    }
}

impl Eq for Sequent {}

impl Hash for Sequent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_sides(f: &mut fmt::Formatter<'_>, left: &str, right: &str) -> fmt::Result {
    match (left.is_empty(), right.is_empty()) {
        (true, true) => f.write_str("=>"),
        (true, false) => write!(f, "=> {right}"),
        (false, true) => write!(f, "{left} =>"),
        (false, false) => write!(f, "{left} => {right}"),
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sides(f, &join(&self.left), &join(&self.right))
    }
}

/// Reads `a, b => c`; either side may be empty.
pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent, ParseError> {
    let mut toks = Tokens::new(text)?;
    let p = SequentPattern::read(&mut toks, sig)?;
    toks.expect_end()?;
    let closed = |items: Vec<Item>| -> Result<Vec<Formula>, ParseError> {
        items
            .into_iter()
            .map(|i| match i {
                Item::Formula(p) => p
                    .to_formula()
                    .ok_or_else(|| ParseError::syntax(0, "variables are not allowed in a sequent")),
                Item::Context(_) => Err(ParseError::syntax(
                    0,
                    "context variables are not allowed in a sequent",
                )),
            })
            .collect()
    };
    Ok(Sequent::new(closed(p.left)?, closed(p.right)?))
}

/// Context variable of a schema. A guarded variable (`$[box.s4]G`) matches
/// only formulas whose head is the guard.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextVar {
    pub name: Arc<str>,
    pub guard: Option<Constructor>,
}

impl fmt::Display for ContextVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.guard {
            Some(g) => write!(f, "$[{}]{}", g.token(), self.name),
            None => write!(f, "${}", self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Formula(Pattern),
    Context(ContextVar),
}

impl Item {
    pub fn context(name: &str) -> Self {
        Item::Context(ContextVar {
            name: Arc::from(name),
            guard: None,
        })
    }

    fn as_pattern(&self) -> Option<&Pattern> {
        match self {
            Item::Formula(p) => Some(p),
            Item::Context(_) => None,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Formula(p) => write!(f, "{p}"),
            Item::Context(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequentPattern {
    pub left: Vec<Item>,
    pub right: Vec<Item>,
}

impl SequentPattern {
    pub fn new(left: Vec<Item>, right: Vec<Item>) -> Self {
        SequentPattern { left, right }
    }

    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.left.iter().chain(&self.right)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &Pattern> {
        self.items().filter_map(Item::as_pattern)
    }

    pub fn contexts(&self) -> impl Iterator<Item = &ContextVar> {
        self.items().filter_map(|i| match i {
            Item::Context(c) => Some(c),
            Item::Formula(_) => None,
        })
    }

    pub fn metas(&self) -> BTreeSet<Arc<str>> {
        self.patterns().flat_map(|p| p.metas()).collect()
    }

    pub fn prop_vars(&self) -> BTreeSet<Arc<str>> {
        self.patterns().flat_map(|p| p.prop_vars()).collect()
    }

    fn map_patterns(&self, f: &impl Fn(&Pattern) -> Pattern) -> SequentPattern {
        let side = |items: &[Item]| {
            items
                .iter()
                .map(|i| match i {
                    Item::Formula(p) => Item::Formula(f(p)),
                    Item::Context(c) => Item::Context(c.clone()),
                })
                .collect()
        };
        SequentPattern::new(side(&self.left), side(&self.right))
    }

    /// Reads `items => items` from the token stream, stopping before `;`,
    /// `<=` or the end.
    pub fn read(toks: &mut Tokens, sig: &Signature) -> Result<Self, ParseError> {
        let left = read_items(toks, sig, true)?;
        toks.expect(&TokenKind::Turnstile, "`=>`")?;
        let right = read_items(toks, sig, false)?;
        Ok(SequentPattern { left, right })
    }
}

fn read_items(toks: &mut Tokens, sig: &Signature, left: bool) -> Result<Vec<Item>, ParseError> {
    let mut out = Vec::new();
    let at_stop = |t: Option<&TokenKind>| match t {
        None | Some(TokenKind::Semicolon) | Some(TokenKind::From) => true,
        Some(TokenKind::Turnstile) => left,
        _ => false,
    };
    if at_stop(toks.peek()) {
        return Ok(out);
    }
    loop {
        let pos = toks.pos();
        if let Some(TokenKind::Context { guard, name }) = toks.peek().cloned() {
            toks.next();
            let guard = match guard {
                None => None,
                Some((base, tag)) => {
                    let token = match &tag {
                        Some(t) => format!("{base}.{t}"),
                        None => base.clone(),
                    };
                    let c = sig
                        .lookup(&base, tag.as_deref())
                        .map_err(|e| e.into_parse(pos, &token))?;
                    if c.arity() != 1 {
                        return Err(ParseError::Arity {
                            pos,
                            token,
                            expected: c.arity(),
                        });
                    }
                    Some(c)
                }
            };
            out.push(Item::Context(ContextVar {
                name: Arc::from(name.as_str()),
                guard,
            }));
        } else {
            out.push(Item::Formula(toks.pattern(sig)?));
        }
        if !toks.eat(&TokenKind::Comma) {
            break;
        }
    }
    Ok(out)
}

impl fmt::Display for SequentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sides(f, &join(&self.left), &join(&self.right))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomShape {
    /// `p, Γ => Δ, p`
    Ax,
    /// `c1(p), Γ => Δ, c1(p)`
    AxC1(Constructor),
    /// `Γ => Δ, p, c1(p)`
    AxToC1(Constructor),
    /// `bot, Γ => Δ`
    AxBot(Constructor),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Axiom(AxiomShape),
    /// Rule for `c` with principal `c(β1..βn)`.
    Logical {
        side: Side,
        head: Constructor,
    },
    /// Rule for `c1 c` with principal `c1(c(β1..βn))`.
    TwoConstructor {
        side: Side,
        outer: Constructor,
        inner: Constructor,
    },
    /// Added by combination for a source-only constructor.
    Translation {
        side: Side,
        head: Constructor,
    },
    /// Added by combination for the surviving source prop symbols.
    PropTranslation {
        side: Side,
        tag: LogicTag,
    },
}

impl RuleKind {
    pub fn is_axiom(&self) -> bool {
        matches!(self, RuleKind::Axiom(_))
    }

    pub fn side(&self) -> Option<Side> {
        match self {
            RuleKind::Axiom(_) => None,
            RuleKind::Logical { side, .. }
            | RuleKind::TwoConstructor { side, .. }
            | RuleKind::Translation { side, .. }
            | RuleKind::PropTranslation { side, .. } => Some(*side),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    name: String,
    kind: RuleKind,
    conclusion: SequentPattern,
    premises: Vec<SequentPattern>,
    invertible: bool,
}

impl RuleSchema {
    /// Infers the kind from the shape of the conclusion. `translation` marks a
    /// rule added by combination.
    pub fn new(
        name: &str,
        conclusion: SequentPattern,
        premises: Vec<SequentPattern>,
        invertible: bool,
        translation: bool,
    ) -> Result<Self> {
        let err = |reason: String| Error::Schema {
            rule: name.to_string(),
            reason,
        };
        let mut names = BTreeSet::new();
        for c in conclusion.contexts() {
            if !names.insert(c.name.clone()) {
                return Err(err(format!(
                    "context `{}` occurs twice in the conclusion",
                    c.name
                )));
            }
        }
        let metas = conclusion.metas();
        let props = conclusion.prop_vars();
        for p in &premises {
            if let Some(m) = p.metas().difference(&metas).next() {
                return Err(err(format!(
                    "premise metavariable `?{m}` is not in the conclusion"
                )));
            }
            if let Some(v) = p.prop_vars().difference(&props).next() {
                return Err(err(format!(
                    "premise variable `!{v}` is not in the conclusion"
                )));
            }
            for c in p.contexts() {
                if !conclusion.contexts().any(|k| k == c) {
                    return Err(err(format!(
                        "premise context `{c}` is not in the conclusion"
                    )));
                }
            }
        }
        let kind = if premises.is_empty() {
            RuleKind::Axiom(axiom_shape(&conclusion).map_err(err)?)
        } else {
            rule_kind(&conclusion, translation).map_err(err)?
        };
        Ok(RuleSchema {
            name: name.to_string(),
            kind,
            conclusion,
            premises,
            invertible,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    pub fn conclusion(&self) -> &SequentPattern {
        &self.conclusion
    }

    pub fn premises(&self) -> &[SequentPattern] {
        &self.premises
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn is_axiom(&self) -> bool {
        self.kind.is_axiom()
    }

    /// The principal pattern of a rule (not an axiom).
    pub fn principal(&self) -> Option<&Pattern> {
        let side = match self.kind.side()? {
            Side::Left => &self.conclusion.left,
            Side::Right => &self.conclusion.right,
        };
        side.iter()
            .filter_map(Item::as_pattern)
            .find(|p| !p.is_meta())
    }

    /// True when a premise drops a conclusion context, as the modal rules
    /// do with Ω and Λ.
    pub fn erases_context(&self) -> bool {
        let all: BTreeSet<&ContextVar> = self.conclusion.contexts().collect();
        self.premises.iter().any(|p| {
            let kept: BTreeSet<&ContextVar> = p.contexts().collect();
            kept != all
        })
    }

    fn renamed(
        &self,
        f: &impl Fn(&Pattern) -> Pattern,
        rename_ctor: &impl Fn(&Constructor) -> Constructor,
    ) -> RuleSchema {
        let fix_guards = |p: SequentPattern| {
            let side = |items: Vec<Item>| {
                items
                    .into_iter()
                    .map(|i| match i {
                        Item::Context(ContextVar { name, guard }) => Item::Context(ContextVar {
                            name,
                            guard: guard.map(|g| rename_ctor(&g)),
                        }),
                        other => other,
                    })
                    .collect()
            };
            SequentPattern::new(side(p.left), side(p.right))
        };
        let kind = match &self.kind {
            RuleKind::Axiom(AxiomShape::AxC1(c)) => {
                RuleKind::Axiom(AxiomShape::AxC1(rename_ctor(c)))
            }
            RuleKind::Axiom(AxiomShape::AxToC1(c)) => {
                RuleKind::Axiom(AxiomShape::AxToC1(rename_ctor(c)))
            }
            RuleKind::Axiom(AxiomShape::AxBot(c)) => {
                RuleKind::Axiom(AxiomShape::AxBot(rename_ctor(c)))
            }
            RuleKind::Logical { side, head } => RuleKind::Logical {
                side: *side,
                head: rename_ctor(head),
            },
            RuleKind::TwoConstructor { side, outer, inner } => RuleKind::TwoConstructor {
                side: *side,
                outer: rename_ctor(outer),
                inner: rename_ctor(inner),
            },
            RuleKind::Translation { side, head } => RuleKind::Translation {
                side: *side,
                head: rename_ctor(head),
            },
            other => other.clone(),
        };
        RuleSchema {
            name: self.name.clone(),
            kind,
            conclusion: fix_guards(self.conclusion.map_patterns(f)),
            premises: self
                .premises
                .iter()
                .map(|p| fix_guards(p.map_patterns(f)))
                .collect(),
            invertible: self.invertible,
        }
    }

    pub fn constructors(&self) -> BTreeSet<Constructor> {
        let mut out: BTreeSet<Constructor> = std::iter::once(&self.conclusion)
            .chain(&self.premises)
            .flat_map(|s| s.patterns().flat_map(|p| p.constructors()))
            .collect();
        for s in std::iter::once(&self.conclusion).chain(&self.premises) {
            out.extend(s.contexts().filter_map(|c| c.guard.clone()));
        }
        out
    }
}

fn host_prop_name(p: &Pattern) -> Option<&Arc<str>> {
    match p {
        Pattern::PropVar(v) if v.kind == PropVarKind::Host => Some(&v.name),
        _ => None,
    }
}

fn axiom_shape(c: &SequentPattern) -> Result<AxiomShape, String> {
    let non_meta = |items: &[Item]| -> Vec<Pattern> {
        items
            .iter()
            .filter_map(Item::as_pattern)
            .filter(|p| !p.is_meta())
            .cloned()
            .collect()
    };
    let metas_on = |items: &[Item]| {
        items
            .iter()
            .filter(|i| matches!(i, Item::Formula(p) if p.is_meta()))
            .count()
    };
    let (l, r) = (non_meta(&c.left), non_meta(&c.right));
    let (lm, rm) = (metas_on(&c.left), metas_on(&c.right));
    let unary_on_prop = |p: &Pattern| -> Option<Constructor> {
        match p {
            Pattern::App(c1, args) if c1.arity() == 1 && host_prop_name(&args[0]).is_some() => {
                Some(c1.clone())
            }
            _ => None,
        }
    };
    match (l.as_slice(), r.as_slice()) {
        ([a], [b]) if a == b && lm == 0 && rm == 0 => {
            if host_prop_name(a).is_some() {
                return Ok(AxiomShape::Ax);
            }
            if let Some(c1) = unary_on_prop(a) {
                return Ok(AxiomShape::AxC1(c1));
            }
        }
        ([], [a, b]) if lm == 0 && rm == 0 => {
            for (p, q) in [(a, b), (b, a)] {
                if let (Some(name), Some(c1)) = (host_prop_name(p), unary_on_prop(q)) {
                    if host_prop_name(&q.args()[0]) == Some(name) {
                        return Ok(AxiomShape::AxToC1(c1));
                    }
                }
            }
        }
        ([Pattern::App(bot, args)], []) if args.is_empty() && lm == 0 && rm <= 1 => {
            return Ok(AxiomShape::AxBot(bot.clone()));
        }
        _ => {}
    }
    Err("not one of the axiom shapes Ax, Ax_c1, Ax_->c1, Ax_bot".into())
}

fn distinct_metas(args: &[Pattern]) -> bool {
    let names: BTreeSet<&Pattern> = args.iter().collect();
    names.len() == args.len() && args.iter().all(Pattern::is_meta)
}

fn rule_kind(c: &SequentPattern, translation: bool) -> Result<RuleKind, String> {
    let mut found = Vec::new();
    for (side, items) in [(Side::Left, &c.left), (Side::Right, &c.right)] {
        for p in items.iter().filter_map(Item::as_pattern) {
            if !p.is_meta() {
                found.push((side, p));
            }
        }
    }
    let [(side, principal)] = found.as_slice() else {
        return Err(format!(
            "expected exactly one principal formula in the conclusion, found {}",
            found.len()
        ));
    };
    let side = *side;
    match principal {
        Pattern::PropVar(v) => match &v.kind {
            PropVarKind::Source(tag) => Ok(RuleKind::PropTranslation {
                side,
                tag: tag.clone(),
            }),
            _ => Err("a host prop symbol cannot be principal in a rule".into()),
        },
        Pattern::App(head, args) if distinct_metas(args) => Ok(if translation {
            RuleKind::Translation {
                side,
                head: head.clone(),
            }
        } else {
            RuleKind::Logical {
                side,
                head: head.clone(),
            }
        }),
        Pattern::App(outer, args) if outer.arity() == 1 && !translation => match &args[0] {
            Pattern::App(inner, inner_args) if distinct_metas(inner_args) => {
                Ok(RuleKind::TwoConstructor {
                    side,
                    outer: outer.clone(),
                    inner: inner.clone(),
                })
            }
            _ => Err(format!(
                "principal `{principal}` is not c(β..) or c1(c(β..))"
            )),
        },
        _ => Err(format!(
            "principal `{principal}` is not c(β..) or c1(c(β..))"
        )),
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keyword = match self.kind {
            RuleKind::Axiom(_) => "axiom",
            RuleKind::Translation { .. } | RuleKind::PropTranslation { .. } => "trule",
            _ => "rule",
        };
        write!(f, "{keyword} {}", self.name)?;
        if self.invertible {
            f.write_str(" invertible")?;
        }
        write!(f, ": {}", self.conclusion)?;
        for (i, p) in self.premises.iter().enumerate() {
            f.write_str(if i == 0 { " <= " } else { " ; " })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuccedentMode {
    Single,
    Multi,
}

impl fmt::Display for SuccedentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuccedentMode::Single => "single",
            SuccedentMode::Multi => "multi",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GentzenCalculus {
    name: String,
    signature: Signature,
    mode: SuccedentMode,
    schemas: Vec<RuleSchema>,
}

impl GentzenCalculus {
    pub fn new(
        name: &str,
        signature: Signature,
        mode: SuccedentMode,
        schemas: Vec<RuleSchema>,
    ) -> Result<Self> {
        let err = |m: String| Error::Calculus(format!("{name}: {m}"));
        let mut names = BTreeSet::new();
        for s in &schemas {
            if !names.insert(s.name()) {
                return Err(err(format!("rule `{}` declared twice", s.name())));
            }
            for c in s.constructors() {
                if !signature.contains(&c) {
                    return Err(err(format!(
                        "rule `{}` uses `{}`, which is not in signature {}",
                        s.name(),
                        c.token(),
                        signature.name()
                    )));
                }
            }
            for p in std::iter::once(&s.conclusion).chain(&s.premises) {
                for pat in p.patterns() {
                    let mut bad = None;
                    pat.visit(&mut |q| {
                        if let Pattern::PropVar(v) = q {
                            if let PropVarKind::Source(tag) = &v.kind {
                                if signature.source_props() != Some(tag) {
                                    bad = Some(tag.clone());
                                }
                            }
                        }
                    });
                    if let Some(tag) = bad {
                        return Err(err(format!(
                            "rule `{}` uses prop constants `.{tag}` absent from {}",
                            s.name(),
                            signature.name()
                        )));
                    }
                }
                if mode == SuccedentMode::Single
                    && (p.right.len() > 1 || p.right.iter().any(|i| matches!(i, Item::Context(_))))
                {
                    return Err(err(format!(
                        "rule `{}` has a multi-formula succedent in a single-succedent calculus",
                        s.name()
                    )));
                }
            }
        }
        let shapes: Vec<&AxiomShape> = schemas
            .iter()
            .filter_map(|s| match &s.kind {
                RuleKind::Axiom(a) => Some(a),
                _ => None,
            })
            .collect();
        for a in &shapes {
            let (c1, partner, want) = match a {
                AxiomShape::AxC1(c) => (c, AxiomShape::AxToC1(c.clone()), "Ax_->c1"),
                AxiomShape::AxToC1(c) => (c, AxiomShape::AxC1(c.clone()), "Ax_c1"),
                _ => continue,
            };
            if !shapes.contains(&&partner) {
                return Err(err(format!(
                    "axiom for `{}` lacks its {want} partner",
                    c1.token()
                )));
            }
        }
        let two: BTreeSet<&Constructor> = schemas
            .iter()
            .filter_map(|s| match &s.kind {
                RuleKind::TwoConstructor { outer, .. } => Some(outer),
                _ => None,
            })
            .collect();
        for s in &schemas {
            if let RuleKind::Logical { head, .. } = &s.kind {
                if two.contains(head) {
                    return Err(err(format!(
                        "`{}` has two-constructor rules, so it cannot have the rule `{}`",
                        head.token(),
                        s.name()
                    )));
                }
            }
        }
        Ok(GentzenCalculus {
            name: name.to_string(),
            signature,
            mode,
            schemas,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn mode(&self) -> SuccedentMode {
        self.mode
    }

    pub fn schemas(&self) -> &[RuleSchema] {
        &self.schemas
    }

    pub fn axioms(&self) -> impl Iterator<Item = &RuleSchema> {
        self.schemas.iter().filter(|s| s.is_axiom())
    }

    pub fn rules(&self) -> impl Iterator<Item = &RuleSchema> {
        self.schemas.iter().filter(|s| !s.is_axiom())
    }

    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.schemas.iter().find(|s| s.name() == name)
    }

    /// Checks that a sequent is over the signature and fits the succedent mode.
    pub fn check_sequent(&self, s: &Sequent) -> Result<()> {
        s.check_over(&self.signature)?;
        if self.mode == SuccedentMode::Single && s.right().len() > 1 {
            return Err(Error::Calculus(format!(
                "{}: sequent `{s}` has more than one succedent formula",
                self.name
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GentzenCalculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "calculus {} over {} {}",
            self.name,
            self.signature.name(),
            self.mode
        )?;
        for s in &self.schemas {
            writeln!(f, "  {s}")?;
        }
        write!(f, "end")
    }
}

/// Reads one schema body `conclusion <= premise ; premise`.
pub fn parse_schema(
    name: &str,
    text: &str,
    sig: &Signature,
    invertible: bool,
    translation: bool,
) -> Result<RuleSchema> {
    let mut toks = Tokens::new(text)?;
    let conclusion = SequentPattern::read(&mut toks, sig)?;
    let mut premises = Vec::new();
    if toks.eat(&TokenKind::From) {
        loop {
            premises.push(SequentPattern::read(&mut toks, sig)?);
            if !toks.eat(&TokenKind::Semicolon) {
                break;
            }
        }
    }
    toks.expect_end()?;
    RuleSchema::new(name, conclusion, premises, invertible, translation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> Signature {
        let t = LogicTag::new("s4");
        let sh = LogicTag::shared();
        Signature::new(
            "S4",
            vec![
                Constructor::new("bot", sh.clone(), 0),
                Constructor::new("neg", t.clone(), 1),
                Constructor::new("box", t.clone(), 1),
                Constructor::new("dia", t.clone(), 1),
                Constructor::new("conj", sh, 2),
                Constructor::new("imp", t, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn kinds_are_inferred() {
        let sig = s4();
        let k = |text: &str| parse_schema("r", text, &sig, false, false).map(|s| s.kind().clone());
        assert_eq!(
            k("!p, $G => $D, !p").unwrap(),
            RuleKind::Axiom(AxiomShape::Ax)
        );
        assert!(matches!(
            k("bot, $G => $D").unwrap(),
            RuleKind::Axiom(AxiomShape::AxBot(_))
        ));
        assert!(matches!(
            k("$G => $D, !p, neg !p").unwrap(),
            RuleKind::Axiom(AxiomShape::AxToC1(_))
        ));
        assert!(matches!(
            k("$O, $[box]G => $[dia]D, $L, box ?b <= $[box]G => $[dia]D, ?b").unwrap(),
            RuleKind::Logical {
                side: Side::Right,
                ..
            }
        ));
        assert!(matches!(
            k("neg (?b1 & ?b2), $G => $D <= neg ?b1, $G => $D ; neg ?b2, $G => $D").unwrap(),
            RuleKind::TwoConstructor {
                side: Side::Left,
                ..
            }
        ));
        assert!(k("?b1 & ?b2, $G => $D <= ?b3, $G => $D").is_err());
        assert!(k("$G => $D <= $G => $D").is_err());
    }

    #[test]
    fn sequents_compare_as_multisets() {
        let sig = s4();
        let a = parse_sequent("p1, box p2, p1 => p2", &sig).unwrap();
        let b = parse_sequent("box p2, p1, p1 => p2", &sig).unwrap();
        let c = parse_sequent("box p2, p1 => p2", &sig).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.set_key(), c.set_key());
        assert_eq!(parse_sequent("=>", &sig).unwrap().to_string(), "=>");
        assert_eq!(a.to_string(), "p1, (box.s4 p2), p1 => p2");
    }

    #[test]
    fn ax_c1_requires_its_partner() {
        let sig = s4();
        let ax = parse_schema("Ax_neg", "neg !p, $G => $D, neg !p", &sig, false, false).unwrap();
        assert!(
            GentzenCalculus::new("g", sig.clone(), SuccedentMode::Multi, vec![ax.clone()]).is_err()
        );
        let to = parse_schema("Ax_to_neg", "$G => $D, !p, neg !p", &sig, false, false).unwrap();
        assert!(GentzenCalculus::new("g", sig, SuccedentMode::Multi, vec![ax, to]).is_ok());
    }
}
