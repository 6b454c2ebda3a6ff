//! Constructor translations, the induced formula translation, identification
//! of common constructors, the combined signature and flattening.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Constructor, Formula, FormulaKind, LogicTag, Pattern, PropMap, Signature};
use crate::maps::MapTerm;

/// τ̂ from a source signature into the map algebra of a host signature.
///
/// Prop symbols are translated by one template with a hole: `τ̂(p<k>)` is the
/// template with the hole filled by host symbol `p<prop_map(k)>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructorTranslation {
    name: String,
    source: Signature,
    host: Signature,
    ctor_map: Vec<(Constructor, MapTerm)>,
    prop_template: MapTerm,
    prop_map: PropMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotInjective {
        first: Constructor,
        second: Constructor,
    },
    Arity {
        ctor: Constructor,
        expected: usize,
        found: usize,
    },
    ConstantNotLifted {
        ctor: Constructor,
        image: String,
    },
    PropTemplateArity(usize),
    HoleMissing,
    NotBijective,
    Uncovered(Constructor),
    NotInSource(Constructor),
    ForeignConstructor {
        ctor: Constructor,
        foreign: Constructor,
    },
    DuplicateEntry(Constructor),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInjective { first, second } => {
                write!(
                    f,
                    "not injective: `{first}` and `{second}` have the same image"
                )
            }
            Violation::Arity {
                ctor,
                expected,
                found,
            } => write!(
                f,
                "`{ctor}` has arity {expected} but its image takes {found} argument(s)"
            ),
            Violation::ConstantNotLifted { ctor, image } => write!(
                f,
                "0-ary `{ctor}` must map to a lifted 0-ary host constructor, not `{image}`"
            ),
            Violation::PropTemplateArity(n) => {
                write!(f, "prop template must take no arguments, takes {n}")
            }
            Violation::HoleMissing => {
                f.write_str("prop template does not mention the hole `prop:_`")
            }
            Violation::NotBijective => f.write_str("prop index map is not a bijection"),
            Violation::Uncovered(c) => write!(f, "no image for source constructor `{c}`"),
            Violation::NotInSource(c) => write!(f, "`{c}` is not a source constructor"),
            Violation::ForeignConstructor { ctor, foreign } => write!(
                f,
                "image of `{ctor}` uses `{foreign}`, which is not a host constructor"
            ),
            Violation::DuplicateEntry(c) => write!(f, "`{c}` is translated twice"),
        }
    }
}

impl ConstructorTranslation {
    /// Builds the translation without checking it; see
    /// [`validate_translation`] and [`ConstructorTranslation::checked`].
    pub fn new(
        name: &str,
        source: Signature,
        host: Signature,
        ctor_map: Vec<(Constructor, MapTerm)>,
        prop_template: MapTerm,
        prop_map: PropMap,
    ) -> Self {
        ConstructorTranslation {
            name: name.to_string(),
            source,
            host,
            ctor_map,
            prop_template,
            prop_map,
        }
    }

    pub fn checked(
        name: &str,
        source: Signature,
        host: Signature,
        ctor_map: Vec<(Constructor, MapTerm)>,
        prop_template: MapTerm,
        prop_map: PropMap,
    ) -> Result<Self> {
        let t = Self::new(name, source, host, ctor_map, prop_template, prop_map);
        let violations = validate_translation(&t);
        if violations.is_empty() {
            Ok(t)
        } else {
            Err(Error::Translation(format!(
                "{}: {}",
                name,
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            )))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn host(&self) -> &Signature {
        &self.host
    }

    pub fn ctor_map(&self) -> &[(Constructor, MapTerm)] {
        &self.ctor_map
    }

    pub fn prop_template(&self) -> &MapTerm {
        &self.prop_template
    }

    pub fn prop_map(&self) -> &PropMap {
        &self.prop_map
    }

    pub fn image(&self, c: &Constructor) -> Option<&MapTerm> {
        self.ctor_map.iter().find(|(k, _)| k == c).map(|(_, m)| m)
    }

    /// Tag used for source prop symbols that survive as constants: the single
    /// tag carried by the source constructors, else the lowercased name.
    pub fn source_tag(&self) -> LogicTag {
        let tags: BTreeSet<&LogicTag> = self
            .source
            .constructors()
            .iter()
            .map(|c| c.tag())
            .filter(|t| !t.is_shared())
            .collect();
        match tags.into_iter().collect::<Vec<_>>().as_slice() {
            [t] => (*t).clone(),
            _ => LogicTag::new(&self.source.name().to_lowercase()),
        }
    }

    /// `τ̂(p<k>)` as a host formula.
    pub fn translate_prop(&self, k: u32) -> Result<Formula> {
        let q = Formula::prop(self.prop_map.apply(k));
        self.prop_template.apply_with_hole(&[], Some(&q))
    }

    /// `τ̂(c)` applied to already translated arguments.
    pub fn translate_step(&self, c: &Constructor, args: &[Formula]) -> Result<Formula> {
        let m = self.image(c).ok_or_else(|| Error::SignatureMismatch {
            formula: c.token(),
            signature: self.source.name().to_string(),
            reason: format!("`{}` has no image under {}", c.token(), self.name),
        })?;
        m.apply(args)
    }

    /// The induced formula translation τ.
    pub fn translate(&self, f: &Formula) -> Result<Formula> {
        match f.kind() {
            FormulaKind::Prop(k) => self.translate_prop(*k),
            FormulaKind::App(c, args) => {
                let args = args
                    .iter()
                    .map(|a| self.translate(a))
                    .collect::<Result<Vec<_>>>()?;
                self.translate_step(c, &args)
            }
        }
    }

    /// Renames τ-identified constructors (and, when the prop template is the
    /// bare hole under the identity index map, prop symbols) and builds the
    /// combined signature named `name`.
    pub fn identify_common(&self, name: &str) -> Result<Identification> {
        let mut source_rename = Renaming::default();
        let mut host_rename = Renaming::default();
        for (c, m) in &self.ctor_map {
            let Some(target) = m.as_lift() else { continue };
            if target.arity() != c.arity() {
                continue;
            }
            if host_rename.get(target).is_some() {
                return Err(Error::MergeConflict(format!(
                    "`{}` identified with more than one source constructor",
                    target.token()
                )));
            }
            let shared = Constructor::new(target.base(), LogicTag::shared(), target.arity());
            source_rename.insert(c.clone(), shared.clone());
            host_rename.insert(target.clone(), shared);
        }
        let rename_sig = |sig: &Signature, r: &Renaming| -> Result<Signature> {
            let ctors = sig
                .constructors()
                .iter()
                .map(|c| r.constructor(c))
                .collect();
            Signature::new(sig.name(), ctors).map_err(|e| Error::MergeConflict(e.to_string()))
        };
        let source = rename_sig(&self.source, &source_rename)?;
        let host = rename_sig(&self.host, &host_rename)?;

        let props_identified = self.prop_template.is_bare_hole() && self.prop_map.is_identity();
        let mut combined: Vec<Constructor> = source.constructors().to_vec();
        for c in host.constructors() {
            if !combined.contains(c) {
                combined.push(c.clone());
            }
        }
        let mut combined =
            Signature::new(name, combined).map_err(|e| Error::MergeConflict(e.to_string()))?;
        let source_tag = self.source_tag();
        if !props_identified {
            combined = combined.with_source_props(source_tag.clone());
        }

        let translation = ConstructorTranslation {
            name: self.name.clone(),
            source: source.clone(),
            host: host.clone(),
            ctor_map: self
                .ctor_map
                .iter()
                .map(|(c, m)| {
                    (
                        source_rename.constructor(c),
                        m.map_constructors(&|k| host_rename.constructor(k)),
                    )
                })
                .collect(),
            prop_template: self
                .prop_template
                .map_constructors(&|k| host_rename.constructor(k)),
            prop_map: self.prop_map.clone(),
        };
        Ok(Identification {
            translation,
            signature: CombinedSignature {
                host,
                source,
                combined,
            },
            source_rename,
            host_rename,
            props_identified,
            source_tag,
        })
    }
}

/// Checks the five conditions on a constructor translation. Empty means
/// valid.
pub fn validate_translation(t: &ConstructorTranslation) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (c, _) in &t.ctor_map {
        if !seen.insert(c.clone()) {
            out.push(Violation::DuplicateEntry(c.clone()));
        }
        if !t.source.constructors().contains(c) {
            out.push(Violation::NotInSource(c.clone()));
        }
    }
    for c in t.source.constructors() {
        if t.image(c).is_none() {
            out.push(Violation::Uncovered(c.clone()));
        }
    }
    for (c, m) in &t.ctor_map {
        if m.arity() != c.arity() || m.width() != 1 {
            out.push(Violation::Arity {
                ctor: c.clone(),
                expected: c.arity(),
                found: m.arity(),
            });
        }
        if c.arity() == 0 && !m.as_lift().is_some_and(|l| l.arity() == 0) {
            out.push(Violation::ConstantNotLifted {
                ctor: c.clone(),
                image: m.to_string(),
            });
        }
        for k in m.constructors() {
            if !t.host.contains(&k) {
                out.push(Violation::ForeignConstructor {
                    ctor: c.clone(),
                    foreign: k,
                });
            }
        }
    }
    // Injectivity compares the maps as functions: apply each to distinct
    // metavariables and compare the resulting trees.
    let symbolic: Vec<(&Constructor, Option<Pattern>)> = t
        .ctor_map
        .iter()
        .map(|(c, m)| {
            let args: Vec<Pattern> = (1..=m.arity())
                .map(|i| Pattern::meta(&format!("x{i}")))
                .collect();
            (c, m.apply(&args).ok())
        })
        .collect();
    for (i, (c1, img1)) in symbolic.iter().enumerate() {
        for (c2, img2) in &symbolic[i + 1..] {
            if c1 != c2 && img1.is_some() && img1 == img2 {
                out.push(Violation::NotInjective {
                    first: (*c1).clone(),
                    second: (*c2).clone(),
                });
            }
        }
    }
    if t.prop_template.arity() != 0 || t.prop_template.width() != 1 {
        out.push(Violation::PropTemplateArity(t.prop_template.arity()));
    }
    if !t.prop_template.has_hole() {
        out.push(Violation::HoleMissing);
    }
    for k in t.prop_template.constructors() {
        if !t.host.contains(&k) {
            out.push(Violation::ForeignConstructor {
                ctor: Constructor::new("prop", LogicTag::shared(), 0),
                foreign: k,
            });
        }
    }
    if !t.prop_map.is_bijective() {
        out.push(Violation::NotBijective);
    }
    out
}

/// Constructor renaming produced by identification.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<Constructor, Constructor>,
}

impl Renaming {
    fn insert(&mut self, from: Constructor, to: Constructor) {
        self.map.insert(from, to);
    }

    pub fn get(&self, c: &Constructor) -> Option<&Constructor> {
        self.map.get(c)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Constructor, &Constructor)> {
        self.map.iter()
    }

    pub fn constructor(&self, c: &Constructor) -> Constructor {
        self.map.get(c).cloned().unwrap_or_else(|| c.clone())
    }

    pub fn formula(&self, f: &Formula) -> Formula {
        match f.kind() {
            FormulaKind::Prop(_) => f.clone(),
            FormulaKind::App(c, args) => Formula::app(
                self.constructor(c),
                args.iter().map(|a| self.formula(a)).collect(),
            ),
        }
    }

    pub fn pattern(&self, p: &Pattern) -> Pattern {
        match p {
            Pattern::App(c, args) => Pattern::App(
                self.constructor(c),
                args.iter().map(|a| self.pattern(a)).collect(),
            ),
            other => other.clone(),
        }
    }
}

/// Host, source and combined signatures after identification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinedSignature {
    pub host: Signature,
    pub source: Signature,
    pub combined: Signature,
}

/// A translation after identification of common symbols, with everything
/// needed to move formulas between the component and combined languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    translation: ConstructorTranslation,
    signature: CombinedSignature,
    source_rename: Renaming,
    host_rename: Renaming,
    props_identified: bool,
    source_tag: LogicTag,
}

impl Identification {
    /// The redefined τ̂ over the renamed signatures.
    pub fn translation(&self) -> &ConstructorTranslation {
        &self.translation
    }

    pub fn signatures(&self) -> &CombinedSignature {
        &self.signature
    }

    pub fn combined(&self) -> &Signature {
        &self.signature.combined
    }

    pub fn host(&self) -> &Signature {
        &self.signature.host
    }

    pub fn source(&self) -> &Signature {
        &self.signature.source
    }

    pub fn source_rename(&self) -> &Renaming {
        &self.source_rename
    }

    pub fn host_rename(&self) -> &Renaming {
        &self.host_rename
    }

    pub fn props_identified(&self) -> bool {
        self.props_identified
    }

    pub fn source_tag(&self) -> &LogicTag {
        &self.source_tag
    }

    /// Source constructors kept apart from the host, `C'' \ C'`.
    pub fn source_only(&self) -> Vec<&Constructor> {
        let host = self.host();
        self.source()
            .constructors()
            .iter()
            .filter(|c| !host.contains(c))
            .collect()
    }

    /// Shared constructors.
    pub fn shared(&self) -> Vec<&Constructor> {
        let host = self.host();
        self.source()
            .constructors()
            .iter()
            .filter(|c| host.contains(c))
            .collect()
    }

    /// A renamed source formula as a combined formula: surviving source prop
    /// symbols become `p<k>.<tag>` constants.
    pub fn embed_source(&self, f: &Formula) -> Formula {
        match f.kind() {
            FormulaKind::Prop(k) if self.props_identified => Formula::prop(*k),
            FormulaKind::Prop(k) => {
                Formula::constant(Constructor::prop_constant(*k, self.source_tag.clone()))
            }
            FormulaKind::App(c, args) => Formula::app(
                c.clone(),
                args.iter().map(|a| self.embed_source(a)).collect(),
            ),
        }
    }

    /// One step of τ_⊔: the head constructor applied to already flattened
    /// arguments.
    pub fn flatten_step(&self, c: &Constructor, args: &[Formula]) -> Result<Formula> {
        if self.host().contains(c) {
            return Ok(Formula::app(c.clone(), args.to_vec()));
        }
        if let (Some(k), Some(tag)) = (c.prop_constant_index(), self.combined().source_props()) {
            if c.tag() == tag {
                return self.translation.translate_prop(k);
            }
        }
        if self.source().contains(c) {
            return self.translation.translate_step(c, args);
        }
        Err(Error::SignatureMismatch {
            formula: c.token(),
            signature: self.combined().name().to_string(),
            reason: format!("`{}` is not a combined constructor", c.token()),
        })
    }

    /// τ_⊔: the identity on host material, τ̂-expansion on source material.
    pub fn flatten(&self, f: &Formula) -> Result<Formula> {
        match f.kind() {
            FormulaKind::Prop(_) => Ok(f.clone()),
            FormulaKind::App(c, args) => {
                if self.is_host_formula(f) {
                    return Ok(f.clone());
                }
                let args = args
                    .iter()
                    .map(|a| self.flatten(a))
                    .collect::<Result<Vec<_>>>()?;
                self.flatten_step(c, &args)
            }
        }
    }

    pub fn is_host_formula(&self, f: &Formula) -> bool {
        match f.kind() {
            FormulaKind::Prop(_) => true,
            FormulaKind::App(c, args) => {
                self.host().contains(c) && args.iter().all(|a| self.is_host_formula(a))
            }
        }
    }
}

impl fmt::Display for ConstructorTranslation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "translation {} {} -> {}",
            self.name,
            self.source.name(),
            self.host.name()
        )?;
        writeln!(f, "  translate prop = {}", self.prop_template)?;
        if !self.prop_map.is_identity() {
            let pairs: Vec<String> = self
                .prop_map
                .pairs()
                .map(|(a, b)| format!("p{a}:p{b}"))
                .collect();
            writeln!(f, "  propmap {}", pairs.join(" "))?;
        }
        for (c, m) in &self.ctor_map {
            writeln!(f, "  translate {} = {}", c.token(), m)?;
        }
        write!(f, "end")
    }
}
