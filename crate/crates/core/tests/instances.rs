use logicfuse::calculus::{check_derivation, strict_self_containment};
use logicfuse::formula::parse_formula;
use logicfuse::instances::{
    builtin, combination, library, logic, Bundle, COMBINATIONS, LOGICS, REFERENCE_DERIVATIONS,
    TRANSLATIONS,
};
use logicfuse::logicfile::LogicFile;
use logicfuse::search::{prove_formula, SearchConfig, SearchOutcome};
use logicfuse::translation::validate_translation;

#[test]
fn library_loads() {
    let lib = library();
    assert_eq!(lib.signatures.len(), 5);
    assert_eq!(lib.calculi.len(), 6);
    for t in TRANSLATIONS {
        let t = lib.translation(t).unwrap();
        assert!(validate_translation(t).is_empty(), "{}", t.name());
    }
    for name in LOGICS.iter().chain(&COMBINATIONS) {
        builtin(name).unwrap();
    }
    assert!(builtin("K").is_err());
}

#[test]
fn generated_calculi_match_transcriptions() {
    for name in COMBINATIONS {
        let cb = combination(name).unwrap();
        if let Err(diff) = cb.crosscheck() {
            panic!("{name}:\n{diff}");
        }
    }
}

#[test]
fn cj_has_no_prop_rules_and_js_does() {
    let cj = combination("CJ").unwrap();
    assert!(cj.identification.props_identified());
    assert!(cj.generated.rule("L_P.pl").is_none());
    let js = combination("JS").unwrap();
    assert!(js.generated.rule("L_P.it").is_some());
    assert!(js.generated.rule("R_P.it").is_some());
}

#[test]
fn plj_disjunction_rule_premise() {
    let plj = combination("PLJ").unwrap();
    let r = plj.generated.rule("L_disj.pl").unwrap();
    assert_eq!(
        r.premises()[0].to_string(),
        "(neg (conj (neg ?b1) (neg ?b2))), $G => ?b"
    );
}

#[test]
fn reference_derivations_check() {
    for d in &REFERENCE_DERIVATIONS {
        let cb = combination(d.combination).unwrap();
        let parsed = d.parse(cb.signature()).unwrap();
        if let Err(diags) = check_derivation(&cb.generated, &parsed) {
            panic!("{}: {:?}", d.name, diags);
        }
        check_derivation(&cb.transcription, &parsed).unwrap();
    }
}

#[test]
fn deleting_a_line_is_reported_where_it_is_cited() {
    let d = &REFERENCE_DERIVATIONS[0];
    let cb = combination(d.combination).unwrap();
    let text: String = d
        .text
        .lines()
        .filter(|l| !l.starts_with("5."))
        .map(|l| format!("{l}\n"))
        .collect();
    let parsed = logicfuse::calculus::Derivation::parse(&text, cb.signature()).unwrap();
    let diags = check_derivation(&cb.generated, &parsed).unwrap_err();
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].line, 4);
}

#[test]
fn host_calculi_are_self_contained() {
    for name in ["It", "S4", "J3"] {
        let g = logic(name).unwrap().calculus.unwrap();
        let r = strict_self_containment(&g);
        assert!(r.is_strict(), "{name}: {:?}", r.offenders);
        assert!(!r.checked.is_empty());
    }
}

#[test]
fn known_theorems_are_found() {
    let cases = [
        ("PLJ", "(neg neg p1) ->pl p1"),
        ("PLJ", "(p1 ->it p2) ->it (p1 ->pl p2)"),
        ("JS", "(neg.it p1.it) ->it (neg.s4 p1.it)"),
        ("CJ", "p1 |j3 neg.pl p1"),
    ];
    for (c, f) in cases {
        let cb = combination(c).unwrap();
        let phi = parse_formula(f, cb.signature()).unwrap();
        let out = prove_formula(&cb.generated, &phi, &SearchConfig::with_depth(30));
        let SearchOutcome::Proved(d) = out else {
            panic!("{c} {f}: {out}")
        };
        check_derivation(&cb.generated, &d).unwrap();
    }
}

#[test]
fn collapse_formula_is_not_provable() {
    let cb = combination("PLJ").unwrap();
    let phi = parse_formula("(neg neg p1) ->it p1", cb.signature()).unwrap();
    assert_eq!(
        prove_formula(&cb.generated, &phi, &SearchConfig::default()),
        SearchOutcome::NotProvable
    );
}

#[test]
fn bundles_export_and_reload() {
    for name in LOGICS.iter().chain(&COMBINATIONS) {
        let b = builtin(name).unwrap();
        let text = b.export();
        let again = LogicFile::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        match &b {
            Bundle::Logic(l) => {
                assert_eq!(again.signature(name), Some(&l.signature));
                if let Some(g) = &l.calculus {
                    assert_eq!(again.calculus(g.name()), Some(g));
                }
            }
            Bundle::Combination(c) => {
                assert_eq!(
                    again.calculus(c.transcription.name()),
                    Some(&c.transcription)
                );
            }
        }
    }
}
