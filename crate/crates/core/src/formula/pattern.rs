use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Constructor, Formula, FormulaKind, LogicTag, PropMap};

/// A formula tree that may contain metavariables (`?b1`) and prop-symbol
/// variables (`!p`, `!p.pl`). Rule schemas are written with patterns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Pattern {
    Prop(u32),
    App(Constructor, Vec<Pattern>),
    Meta(Arc<str>),
    PropVar(PropVar),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PropVar {
    pub name: Arc<str>,
    pub kind: PropVarKind,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PropVarKind {
    /// A prop symbol `p<k>` of the ambient signature.
    Host,
    /// A surviving source prop constant `p<k>.<tag>`.
    Source(LogicTag),
    /// The host prop symbol `p<map(k)>` where `k` is bound elsewhere.
    Image(PropMap),
}

/// Metavariable and prop-variable assignments produced by matching.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Bindings {
    metas: Vec<(Arc<str>, Formula)>,
    props: Vec<(Arc<str>, u32)>,
}

impl Bindings {
    pub fn meta(&self, name: &str) -> Option<&Formula> {
        self.metas
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, f)| f)
    }

    pub fn prop(&self, name: &str) -> Option<u32> {
        self.props
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, k)| *k)
    }

    pub fn bind_meta(&mut self, name: &str, f: Formula) {
        self.metas.push((Arc::from(name), f));
    }

    pub(crate) fn mark(&self) -> (usize, usize) {
        (self.metas.len(), self.props.len())
    }

    pub(crate) fn reset(&mut self, mark: (usize, usize)) {
        self.metas.truncate(mark.0);
        self.props.truncate(mark.1);
    }
}

impl Pattern {
    pub fn meta(name: &str) -> Self {
        Pattern::Meta(Arc::from(name))
    }

    pub fn host_prop(name: &str) -> Self {
        Pattern::PropVar(PropVar {
            name: Arc::from(name),
            kind: PropVarKind::Host,
        })
    }

    pub fn from_formula(f: &Formula) -> Self {
        match f.kind() {
            FormulaKind::Prop(k) => Pattern::Prop(*k),
            FormulaKind::App(c, args) => {
                Pattern::App(c.clone(), args.iter().map(Pattern::from_formula).collect())
            }
        }
    }

    /// The formula this pattern denotes when it has no variables.
    pub fn to_formula(&self) -> Option<Formula> {
        self.instantiate(&Bindings::default())
    }

    pub fn head(&self) -> Option<&Constructor> {
        match self {
            Pattern::App(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Pattern] {
        match self {
            Pattern::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_meta(&self) -> bool {
        matches!(self, Pattern::Meta(_))
    }

    pub fn metas(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Pattern::Meta(m) = p {
                out.insert(m.clone());
            }
        });
        out
    }

    pub fn prop_vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Pattern::PropVar(v) = p {
                out.insert(v.name.clone());
            }
        });
        out
    }

    pub fn constructors(&self) -> BTreeSet<Constructor> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            if let Pattern::App(c, _) = p {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Pattern)) {
        f(self);
        for a in self.args() {
            a.visit(f);
        }
    }

    /// Renames metavariables and prop variables.
    pub fn rename(&self, rename: &impl Fn(&str) -> Arc<str>) -> Pattern {
        match self {
            Pattern::Prop(k) => Pattern::Prop(*k),
            Pattern::Meta(m) => Pattern::Meta(rename(m)),
            Pattern::PropVar(v) => Pattern::PropVar(PropVar {
                name: rename(&v.name),
                kind: v.kind.clone(),
            }),
            Pattern::App(c, args) => {
                Pattern::App(c.clone(), args.iter().map(|a| a.rename(rename)).collect())
            }
        }
    }

    /// Structural matching; extends `b` on success and leaves it untouched on
    /// failure.
    pub fn matches(&self, f: &Formula, b: &mut Bindings) -> bool {
        let mark = b.mark();
        if self.match_into(f, b) {
            true
        } else {
            b.reset(mark);
            false
        }
    }

    fn match_into(&self, f: &Formula, b: &mut Bindings) -> bool {
        match self {
            Pattern::Prop(k) => f.as_prop() == Some(*k),
            Pattern::Meta(m) => match b.meta(m) {
                Some(bound) => bound == f,
                None => {
                    b.metas.push((m.clone(), f.clone()));
                    true
                }
            },
            Pattern::PropVar(v) => {
                let index = match (&v.kind, f.kind()) {
                    (PropVarKind::Host, FormulaKind::Prop(j)) => Some(*j),
                    (PropVarKind::Image(map), FormulaKind::Prop(j)) => match b.prop(&v.name) {
                        Some(k) => return map.apply(k) == *j,
                        None => map.invert(*j),
                    },
                    (PropVarKind::Source(tag), FormulaKind::App(c, _)) if c.tag() == tag => {
                        c.prop_constant_index()
                    }
                    _ => None,
                };
                let Some(index) = index else { return false };
                match b.prop(&v.name) {
                    Some(k) => k == index,
                    None => {
                        b.props.push((v.name.clone(), index));
                        true
                    }
                }
            }
            Pattern::App(c, args) => match f.kind() {
                FormulaKind::App(fc, fargs) if fc == c => {
                    args.iter().zip(fargs).all(|(p, a)| p.match_into(a, b))
                }
                _ => false,
            },
        }
    }

    /// Replaces every variable by its binding; `None` if one is unbound.
    pub fn instantiate(&self, b: &Bindings) -> Option<Formula> {
        Some(match self {
            Pattern::Prop(k) => Formula::prop(*k),
            Pattern::Meta(m) => b.meta(m)?.clone(),
            Pattern::PropVar(v) => {
                let k = b.prop(&v.name)?;
                match &v.kind {
                    PropVarKind::Host => Formula::prop(k),
                    PropVarKind::Image(map) => Formula::prop(map.apply(k)),
                    PropVarKind::Source(tag) => {
                        Formula::constant(Constructor::prop_constant(k, tag.clone()))
                    }
                }
            }
            Pattern::App(c, args) => Formula::app(
                c.clone(),
                args.iter()
                    .map(|a| a.instantiate(b))
                    .collect::<Option<Vec<_>>>()?,
            ),
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Prop(k) => write!(f, "p{k}"),
            Pattern::Meta(m) => write!(f, "?{m}"),
            Pattern::PropVar(v) => match &v.kind {
                PropVarKind::Host => write!(f, "!{}", v.name),
                PropVarKind::Source(tag) => write!(f, "!{}.{}", v.name, tag),
                PropVarKind::Image(map) if map.is_identity() => write!(f, "!{}", v.name),
                PropVarKind::Image(map) => {
                    write!(f, "!{}@[", v.name)?;
                    for (i, (a, b)) in map.pairs().enumerate() {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{a}:{b}")?;
                    }
                    f.write_str("]")
                }
            },
            Pattern::App(c, args) if args.is_empty() => write!(f, "{}", c.token()),
            Pattern::App(c, args) => {
                write!(f, "({}", c.token())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
