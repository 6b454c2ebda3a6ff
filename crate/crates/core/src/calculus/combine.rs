use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{
    ContextVar, GentzenCalculus, Item, RuleKind, RuleSchema, SequentPattern, SuccedentMode,
};
use crate::error::Result;
use crate::formula::{Pattern, PropVar, PropVarKind};
use crate::translation::Identification;

fn metas(n: usize) -> Vec<Pattern> {
    (1..=n).map(|i| Pattern::meta(&format!("b{i}"))).collect()
}

fn sides(
    mode: SuccedentMode,
    side: super::Side,
    principal: Pattern,
    image: Pattern,
) -> (SequentPattern, SequentPattern) {
    let g = Item::context("G");
    let right_ctx = match mode {
        SuccedentMode::Multi => Some(Item::context("D")),
        SuccedentMode::Single => None,
    };
    let seq = |f: Pattern| match side {
        super::Side::Left => SequentPattern::new(
            vec![Item::Formula(f), g.clone()],
            match &right_ctx {
                Some(d) => vec![d.clone()],
                None => vec![Item::Formula(Pattern::meta("b"))],
            },
        ),
        super::Side::Right => SequentPattern::new(
            vec![g.clone()],
            right_ctx
                .iter()
                .cloned()
                .chain(std::iter::once(Item::Formula(f)))
                .collect(),
        ),
    };
    (seq(principal), seq(image))
}

/// The calculus of the combination: the host rules over the renamed host
/// signature, plus a left and right translation rule for every source-only
/// constructor and, when prop symbols are kept apart, for the source prop
/// constants.
pub fn combine_calculus(
    host: &GentzenCalculus,
    ident: &Identification,
    name: &str,
) -> Result<GentzenCalculus> {
    let mut schemas: Vec<RuleSchema> = renamed_schemas(host, ident);
    let tau = ident.translation();
    let mode = host.mode();
    let both = [(super::Side::Left, "L"), (super::Side::Right, "R")];
    if !ident.props_identified() {
        let tag = ident.source_tag().clone();
        let var = |kind| {
            Pattern::PropVar(PropVar {
                name: Arc::from("p"),
                kind,
            })
        };
        let hole = if tau.prop_map().is_identity() {
            var(PropVarKind::Host)
        } else {
            var(PropVarKind::Image(tau.prop_map().clone()))
        };
        let image: Pattern = tau.prop_template().apply_with_hole(&[], Some(&hole))?;
        for (side, l) in both {
            let (c, p) = sides(
                mode,
                side,
                var(PropVarKind::Source(tag.clone())),
                image.clone(),
            );
            schemas.push(RuleSchema::new(
                &format!("{l}_P.{tag}"),
                c,
                vec![p],
                true,
                true,
            )?);
        }
    }
    for c in ident.source_only() {
        let args = metas(c.arity());
        let image: Pattern = tau
            .image(c)
            .expect("a validated translation covers the source signature")
            .apply(&args)?;
        for (side, l) in both {
            let (concl, p) = sides(
                mode,
                side,
                Pattern::App(c.clone(), args.clone()),
                image.clone(),
            );
            schemas.push(RuleSchema::new(
                &format!("{l}_{}", c.token()),
                concl,
                vec![p],
                true,
                true,
            )?);
        }
    }
    GentzenCalculus::new(name, ident.combined().clone(), mode, schemas)
}

fn renamed_schemas(host: &GentzenCalculus, ident: &Identification) -> Vec<RuleSchema> {
    let rename = ident.host_rename();
    host.schemas()
        .iter()
        .map(|s| s.renamed(&|p| rename.pattern(p), &|c| rename.constructor(c)))
        .collect()
}

/// The host calculus over the host signature as renamed by identification,
/// the language flattening lands in.
pub fn renamed_host(host: &GentzenCalculus, ident: &Identification) -> Result<GentzenCalculus> {
    GentzenCalculus::new(
        host.name(),
        ident.host().clone(),
        host.mode(),
        renamed_schemas(host, ident),
    )
}

fn erased(item: &Item) -> String {
    match item {
        Item::Formula(p) => p.rename(&|_| Arc::from("_")).to_string(),
        Item::Context(c) => ContextVar {
            name: Arc::from("_"),
            guard: c.guard.clone(),
        }
        .to_string(),
    }
}

/// The schema with variables renamed by first occurrence and items sorted,
/// so that schemas equal up to renaming and item order print the same.
fn canonical(s: &RuleSchema) -> String {
    let mut names: BTreeMap<Arc<str>, Arc<str>> = BTreeMap::new();
    let mut contexts: BTreeMap<Arc<str>, Arc<str>> = BTreeMap::new();
    let ordered = |p: &SequentPattern| {
        let mut l = p.left.clone();
        let mut r = p.right.clone();
        l.sort_by_cached_key(erased);
        r.sort_by_cached_key(erased);
        SequentPattern::new(l, r)
    };
    let all: Vec<SequentPattern> = std::iter::once(s.conclusion())
        .chain(s.premises())
        .map(ordered)
        .collect();
    for p in &all {
        for i in p.items() {
            match i {
                Item::Formula(f) => f.visit(&mut |q| {
                    let n = match q {
                        Pattern::Meta(m) => m,
                        Pattern::PropVar(v) => &v.name,
                        _ => return,
                    };
                    let next = names.len();
                    names
                        .entry(n.clone())
                        .or_insert_with(|| Arc::from(format!("v{next}")));
                }),
                Item::Context(c) => {
                    let next = contexts.len();
                    contexts
                        .entry(c.name.clone())
                        .or_insert_with(|| Arc::from(format!("C{next}")));
                }
            }
        }
    }
    let render = |p: &SequentPattern| {
        let side = |items: &[Item]| {
            let mut v: Vec<String> = items
                .iter()
                .map(|i| match i {
                    Item::Formula(f) => f.rename(&|n| names[n].clone()).to_string(),
                    Item::Context(c) => ContextVar {
                        name: contexts[&c.name].clone(),
                        guard: c.guard.clone(),
                    }
                    .to_string(),
                })
                .collect();
            v.sort();
            v.join(", ")
        };
        format!("{} => {}", side(&p.left), side(&p.right))
    };
    let mut premises: Vec<String> = all[1..].iter().map(render).collect();
    premises.sort();
    format!("{} <= {}", render(&all[0]), premises.join(" ; "))
}

/// Rules present in one calculus and not the other, compared up to renaming
/// of variables and rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrosscheckDiff {
    pub mode: Option<(SuccedentMode, SuccedentMode)>,
    /// Transcribed rules the generated calculus lacks.
    pub missing: Vec<String>,
    /// Generated rules absent from the transcription.
    pub extra: Vec<String>,
}

impl CrosscheckDiff {
    pub fn is_empty(&self) -> bool {
        self.mode.is_none() && self.missing.is_empty() && self.extra.is_empty()
    }
}

impl fmt::Display for CrosscheckDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((g, t)) = self.mode {
            writeln!(f, "succedent mode: generated {g}, transcribed {t}")?;
        }
        for m in &self.missing {
            writeln!(f, "missing: {m}")?;
        }
        for e in &self.extra {
            writeln!(f, "extra: {e}")?;
        }
        Ok(())
    }
}

/// Compares a generated calculus with a transcription of the same one.
pub fn crosscheck(
    generated: &GentzenCalculus,
    transcription: &GentzenCalculus,
) -> Result<(), CrosscheckDiff> {
    let mut diff = CrosscheckDiff::default();
    if generated.mode() != transcription.mode() {
        diff.mode = Some((generated.mode(), transcription.mode()));
    }
    fn keyed(g: &GentzenCalculus) -> Vec<(String, &RuleSchema)> {
        g.schemas().iter().map(|s| (canonical(s), s)).collect()
    }
    let mut gen = keyed(generated);
    for (key, s) in keyed(transcription) {
        match gen.iter().position(|(k, _)| *k == key) {
            Some(i) => {
                gen.remove(i);
            }
            None => diff.missing.push(s.to_string()),
        }
    }
    diff.extra = gen.into_iter().map(|(_, s)| s.to_string()).collect();
    if diff.is_empty() {
        Ok(())
    } else {
        Err(diff)
    }
}

/// Premise items of constructor rules that are neither subformulas of the
/// principal formula nor among the tolerated side material.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelfContainment {
    pub checked: Vec<String>,
    /// (rule, offending premise item)
    pub offenders: Vec<(String, String)>,
}

impl SelfContainment {
    pub fn is_strict(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// Checks every constructor rule of `g`. A premise formula may be a
/// metavariable of the principal formula, a side metavariable of the
/// conclusion, a copy of the principal formula, a closed constant, or, in a
/// rule for `c1 c`, `c1` applied to a metavariable of the principal formula.
pub fn strict_self_containment(g: &GentzenCalculus) -> SelfContainment {
    let mut report = SelfContainment::default();
    for s in g.rules() {
        let outer = match s.kind() {
            RuleKind::Logical { .. } => None,
            RuleKind::TwoConstructor { outer, .. } => Some(outer),
            _ => continue,
        };
        report.checked.push(s.name().to_string());
        let Some(principal) = s.principal() else {
            continue;
        };
        let inside = principal.metas();
        let side_metas: Vec<&Pattern> = s.conclusion().patterns().filter(|p| p.is_meta()).collect();
        for p in s.premises().iter().flat_map(|p| p.patterns()) {
            let ok = match p {
                Pattern::Meta(m) => inside.contains(m) || side_metas.contains(&p),
                Pattern::App(c, args) if args.is_empty() => c.arity() == 0,
                Pattern::App(c, args) => {
                    p == principal
                        || Some(c) == outer
                            && matches!(&args[0], Pattern::Meta(m) if inside.contains(m))
                }
                _ => false,
            };
            if !ok {
                report.offenders.push((s.name().to_string(), p.to_string()));
            }
        }
    }
    report
}
