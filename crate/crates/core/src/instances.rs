//! Built-in logics, translations, calculi, semantics and the combined logics
//! PLJ, JS and CJ.

use std::sync::{Arc, OnceLock};

use crate::calculus::{
    combine_calculus, crosscheck, renamed_host, CrosscheckDiff, Derivation, GentzenCalculus,
};
use crate::error::{Error, Result};
use crate::formula::Signature;
use crate::logicfile::{write_combination, write_semantics, write_signature, LogicFile};
use crate::semantics::{ConservativeTriple, Matrix, MatrixLogic, TableFn};
use crate::translation::{ConstructorTranslation, Identification};

const FILES: [&str; 4] = [
    include_str!("../data/signatures.logic"),
    include_str!("../data/translations.logic"),
    include_str!("../data/calculi.logic"),
    include_str!("../data/combinations.logic"),
];

pub const LOGICS: [&str; 5] = ["PL", "PLfrag", "It", "S4", "J3"];
pub const COMBINATIONS: [&str; 3] = ["PLJ", "JS", "CJ"];
pub const TRANSLATIONS: [&str; 4] = ["godel", "godel-gentzen", "gmt", "pl-j3"];

/// The built-in definitions, read once.
pub fn library() -> &'static LogicFile {
    static LIB: OnceLock<LogicFile> = OnceLock::new();
    LIB.get_or_init(|| {
        let mut f = LogicFile::default();
        for text in FILES {
            f.extend(text)
                .expect("built-in logic definitions are well formed");
        }
        f
    })
}

#[derive(Clone, Debug)]
pub struct LogicBundle {
    pub name: String,
    pub signature: Signature,
    pub calculus: Option<GentzenCalculus>,
    pub semantics: Option<Arc<MatrixLogic>>,
    pub doc: &'static str,
}

#[derive(Clone, Debug)]
pub struct CombinationBundle {
    pub name: String,
    pub source: LogicBundle,
    pub host: LogicBundle,
    /// The translation as declared, over the tagged signatures.
    pub translation: ConstructorTranslation,
    pub identification: Identification,
    /// The host calculus over the renamed host signature.
    pub host_calculus: GentzenCalculus,
    pub generated: GentzenCalculus,
    pub transcription: GentzenCalculus,
}

impl CombinationBundle {
    pub fn signature(&self) -> &Signature {
        self.identification.combined()
    }

    pub fn crosscheck(&self) -> Result<(), CrosscheckDiff> {
        crosscheck(&self.generated, &self.transcription)
    }
}

#[derive(Clone, Debug)]
pub enum Bundle {
    Logic(LogicBundle),
    Combination(Box<CombinationBundle>),
}

impl Bundle {
    pub fn name(&self) -> &str {
        match self {
            Bundle::Logic(l) => &l.name,
            Bundle::Combination(c) => &c.name,
        }
    }

    pub fn signature(&self) -> &Signature {
        match self {
            Bundle::Logic(l) => &l.signature,
            Bundle::Combination(c) => c.signature(),
        }
    }

    /// The calculus used to prove things in this logic.
    pub fn calculus(&self) -> Option<&GentzenCalculus> {
        match self {
            Bundle::Logic(l) => l.calculus.as_ref(),
            Bundle::Combination(c) => Some(&c.generated),
        }
    }

    /// The bundle in logic-definition form.
    pub fn export(&self) -> String {
        let mut parts = Vec::new();
        match self {
            Bundle::Logic(l) => {
                parts.push(write_signature(&l.signature));
                if let Some(g) = &l.calculus {
                    parts.push(g.to_string());
                }
                if let Some(m) = &l.semantics {
                    parts.push(write_semantics(m));
                }
            }
            Bundle::Combination(c) => {
                for b in [&c.source, &c.host] {
                    parts.push(write_signature(&b.signature));
                }
                parts.push(c.translation.to_string());
                parts.push(
                    c.host
                        .calculus
                        .as_ref()
                        .expect("hosts have calculi")
                        .to_string(),
                );
                let decl = library()
                    .combination(&c.name)
                    .expect("declared combination");
                parts.push(write_combination(decl));
                parts.push(c.transcription.to_string());
            }
        }
        parts.join("\n\n") + "\n"
    }
}

fn doc(name: &str) -> &'static str {
    match name {
        "PL" => "classical propositional logic",
        "PLfrag" => "classical negation and implication",
        "It" => "intuitionistic propositional logic",
        "S4" => "modal logic S4",
        "J3" => "three-valued paraconsistent logic J3",
        _ => "",
    }
}

fn unknown(name: &str) -> Error {
    Error::UnknownLogic(name.to_string())
}

pub fn logic(name: &str) -> Result<LogicBundle> {
    let lib = library();
    let signature = lib
        .signatures
        .iter()
        .find(|s| s.name() == name)
        .cloned()
        .ok_or_else(|| unknown(name))?;
    let calculus = match name {
        "It" => lib.calculus("G_It").cloned(),
        "S4" => lib.calculus("G_S4").cloned(),
        "J3" => lib.calculus("G_J3").cloned(),
        _ => None,
    };
    let semantics = match name {
        "PL" => Some(pl_semantics()),
        "PLfrag" => Some(plfrag_semantics()),
        "J3" => Some(j3_semantics()),
        _ => None,
    };
    Ok(LogicBundle {
        name: name.to_string(),
        signature,
        calculus,
        semantics,
        doc: doc(name),
    })
}

pub fn translation(name: &str) -> Result<ConstructorTranslation> {
    library()
        .translation(name)
        .cloned()
        .ok_or_else(|| Error::UnknownLogic(format!("translation {name}")))
}

pub fn combination(name: &str) -> Result<CombinationBundle> {
    let lib = library();
    let decl = lib.combination(name).ok_or_else(|| unknown(name))?;
    let ident = decl.identification.clone();
    let t = lib
        .translation(ident.translation().name())
        .cloned()
        .ok_or_else(|| unknown(ident.translation().name()))?;
    let source = logic(t.source().name())?;
    let host = logic(t.host().name())?;
    let host_g = host
        .calculus
        .clone()
        .ok_or_else(|| Error::Calculus(format!("{} has no calculus", host.name)))?;
    let generated = combine_calculus(&host_g, &ident, &format!("G_{name}"))?;
    let transcription = decl
        .transcription
        .as_deref()
        .and_then(|n| lib.calculus(n))
        .cloned()
        .ok_or_else(|| Error::Calculus(format!("{name} has no transcription")))?;
    Ok(CombinationBundle {
        name: name.to_string(),
        host_calculus: renamed_host(&host_g, &ident)?,
        source,
        host,
        translation: t,
        identification: ident,
        generated,
        transcription,
    })
}

/// Any built-in logic or combination by name.
pub fn builtin(name: &str) -> Result<Bundle> {
    if COMBINATIONS.contains(&name) {
        return Ok(Bundle::Combination(Box::new(combination(name)?)));
    }
    logic(name).map(Bundle::Logic)
}

fn two_valued(name: &str, sig: &str) -> MatrixLogic {
    let sig = library()
        .signature(sig)
        .expect("built-in signature")
        .clone();
    let matrix = Matrix::new(vec!["0".into(), "1".into()], &["1"]).expect("matrix");
    let all: [TableFn; 5] = [
        ("bot.pl", &|_| 0),
        ("neg.pl", &|a| 1 - a[0]),
        ("conj.pl", &|a| a[0].min(a[1])),
        ("disj.pl", &|a| a[0].max(a[1])),
        ("imp.pl", &|a| usize::from(a[0] <= a[1])),
    ];
    let fns: Vec<_> = all
        .into_iter()
        .filter(|(t, _)| sig.constructors().iter().any(|c| c.token() == *t))
        .collect();
    MatrixLogic::from_fns(name, sig, matrix, &fns).expect("two-valued tables")
}

pub fn pl_semantics() -> Arc<MatrixLogic> {
    static M: OnceLock<Arc<MatrixLogic>> = OnceLock::new();
    M.get_or_init(|| Arc::new(two_valued("PL", "PL"))).clone()
}

pub fn plfrag_semantics() -> Arc<MatrixLogic> {
    static M: OnceLock<Arc<MatrixLogic>> = OnceLock::new();
    M.get_or_init(|| Arc::new(two_valued("PLfrag", "PLfrag")))
        .clone()
}

/// Values `0`, `1/2`, `1` with indices 0, 1, 2; `1/2` and `1` designated.
pub fn j3_semantics() -> Arc<MatrixLogic> {
    static M: OnceLock<Arc<MatrixLogic>> = OnceLock::new();
    M.get_or_init(|| {
        let sig = library()
            .signature("J3")
            .expect("built-in signature")
            .clone();
        let matrix =
            Matrix::new(vec!["0".into(), "1/2".into(), "1".into()], &["1/2", "1"]).expect("matrix");
        let imp = |a: &[usize]| match (a[0], a[1]) {
            (x, y) if x <= y => 2,
            (2, 0) => 0,
            _ => 1,
        };
        let fns: [TableFn; 4] = [
            ("sim.j3", &|a| 2 - a[0]),
            ("conj.j3", &|a| a[0].min(a[1])),
            ("disj.j3", &|a| a[0].max(a[1])),
            ("imp.j3", &imp),
        ];
        Arc::new(MatrixLogic::from_fns("J3", sig, matrix, &fns).expect("J3 tables"))
    })
    .clone()
}

/// The classical fragment into J3 with its model maps: a classical value is
/// kept, and a J3 value is classically true when designated.
pub fn pl_j3_triple() -> ConservativeTriple {
    ConservativeTriple {
        translation: translation("pl-j3").expect("built-in translation"),
        source: plfrag_semantics(),
        host: j3_semantics(),
        forward: vec![0, 2],
        backward: vec![0, 1, 1],
    }
}

/// [`pl_j3_triple`] with a backward map that sends `1/2` to false.
pub fn corrupted_pl_j3_triple() -> ConservativeTriple {
    ConservativeTriple {
        backward: vec![0, 0, 1],
        ..pl_j3_triple()
    }
}

pub struct ReferenceDerivation {
    pub name: &'static str,
    pub combination: &'static str,
    pub text: &'static str,
}

pub const REFERENCE_DERIVATIONS: [ReferenceDerivation; 4] = [
    ReferenceDerivation {
        name: "plj_double_negation",
        combination: "PLJ",
        text: include_str!("../data/derivations/plj_double_negation.der"),
    },
    ReferenceDerivation {
        name: "plj_implication",
        combination: "PLJ",
        text: include_str!("../data/derivations/plj_implication.der"),
    },
    ReferenceDerivation {
        name: "js_negation",
        combination: "JS",
        text: include_str!("../data/derivations/js_negation.der"),
    },
    ReferenceDerivation {
        name: "cj_excluded_middle",
        combination: "CJ",
        text: include_str!("../data/derivations/cj_excluded_middle.der"),
    },
];

impl ReferenceDerivation {
    pub fn parse(&self, sig: &Signature) -> Result<Derivation> {
        Derivation::parse(self.text, sig)
    }
}
