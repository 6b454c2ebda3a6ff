//! Library results against small evaluators written from the definitions.

use logicfuse::formula::{enumerate_formulas, parse_formula, Formula};
use logicfuse::instances::{combination, j3_semantics, library, pl_semantics, translation};
use logicfuse::semantics::Valuation;

fn render(f: &Formula, t: &dyn Fn(&str, &[String]) -> String) -> String {
    match f.as_prop() {
        Some(k) => t(&format!("p{k}"), &[]),
        None => {
            let args: Vec<String> = f.args().iter().map(|a| render(a, t)).collect();
            t(&f.head().unwrap().token(), &args)
        }
    }
}

fn godel(tok: &str, a: &[String]) -> String {
    match tok {
        "bot.pl" => "bot.it".into(),
        "neg.pl" => format!("(neg.it {})", a[0]),
        "conj.pl" => format!("(conj.it {} {})", a[0], a[1]),
        "disj.pl" => format!("(neg.it (conj.it (neg.it {}) (neg.it {})))", a[0], a[1]),
        "imp.pl" => format!("(neg.it (conj.it {} (neg.it {})))", a[0], a[1]),
        p => format!("(neg.it (neg.it {p}))"),
    }
}

fn gmt(tok: &str, a: &[String]) -> String {
    match tok {
        "bot.it" => "bot.s4".into(),
        "neg.it" => format!("(box.s4 (neg.s4 {}))", a[0]),
        "conj.it" => format!("(conj.s4 {} {})", a[0], a[1]),
        "disj.it" => format!("(disj.s4 {} {})", a[0], a[1]),
        "imp.it" => format!("(box.s4 (imp.s4 {} {}))", a[0], a[1]),
        p => format!("(box.s4 {p})"),
    }
}

fn pl_j3(tok: &str, a: &[String]) -> String {
    match tok {
        "neg.pl" => format!("(sim.j3 (imp.j3 (sim.j3 {0}) {0}))", a[0]),
        "imp.pl" => format!("(imp.j3 (imp.j3 (sim.j3 {0}) {0}) {1})", a[0], a[1]),
        p => p.to_string(),
    }
}

type Oracle = fn(&str, &[String]) -> String;

#[test]
fn translations_match_hand_written_images() {
    let cases: [(&str, &str, Oracle); 3] = [
        ("godel", "PL", godel),
        ("gmt", "It", gmt),
        ("pl-j3", "PLfrag", pl_j3),
    ];
    for (name, src, oracle) in cases {
        let t = translation(name).unwrap();
        let sig = library().signature(src).unwrap();
        for f in enumerate_formulas(sig, &[1, 2], 2) {
            assert_eq!(
                t.translate(&f).unwrap().to_string(),
                render(&f, &oracle),
                "{name} on {f}"
            );
        }
    }
}

#[test]
fn godel_image_of_self_implication() {
    let t = translation("godel").unwrap();
    let f = parse_formula("(imp.pl p1 p1)", t.source()).unwrap();
    assert_eq!(
        t.translate(&f).unwrap().to_string(),
        "(neg.it (conj.it (neg.it (neg.it p1)) (neg.it (neg.it (neg.it p1)))))"
    );
}

#[test]
fn godel_translation_identifies_implication_with_its_definition() {
    let t = translation("godel").unwrap();
    let a = parse_formula("(imp.pl p1 p2)", t.source()).unwrap();
    let b = parse_formula("(neg.pl (conj.pl p1 (neg.pl p2)))", t.source()).unwrap();
    assert_ne!(a, b);
    assert_eq!(t.translate(&a).unwrap(), t.translate(&b).unwrap());
}

fn j3_eval(f: &Formula, v: &[u8; 3]) -> u8 {
    // 0, 1, 2 stand for 0, 1/2, 1.
    if let Some(k) = f.as_prop() {
        return v[k as usize];
    }
    let a: Vec<u8> = f.args().iter().map(|x| j3_eval(x, v)).collect();
    match f.head().unwrap().token().as_str() {
        "sim.j3" => 2 - a[0],
        "conj.j3" => a[0].min(a[1]),
        "disj.j3" => a[0].max(a[1]),
        "imp.j3" => match (a[0], a[1]) {
            (2, 0) => 0,
            (x, y) if x <= y => 2,
            _ => 1,
        },
        t => panic!("{t}"),
    }
}

#[test]
fn j3_tables_match_a_direct_evaluator() {
    let m = j3_semantics();
    for f in enumerate_formulas(m.signature(), &[1, 2], 2) {
        for x in 0..3u8 {
            for y in 0..3u8 {
                let val = Valuation::new([(1, x as usize), (2, y as usize)]);
                assert_eq!(
                    m.eval(&val, &f).unwrap(),
                    j3_eval(&f, &[0, x, y]) as usize,
                    "{f}"
                );
            }
        }
    }
}

#[test]
fn classical_validity_matches_brute_force() {
    let m = pl_semantics();
    fn eval(f: &Formula, v: [bool; 3]) -> bool {
        if let Some(k) = f.as_prop() {
            return v[k as usize];
        }
        let a: Vec<bool> = f.args().iter().map(|x| eval(x, v)).collect();
        match f.head().unwrap().token().as_str() {
            "bot.pl" => false,
            "neg.pl" => !a[0],
            "conj.pl" => a[0] && a[1],
            "disj.pl" => a[0] || a[1],
            "imp.pl" => !a[0] || a[1],
            t => panic!("{t}"),
        }
    }
    let mut valid = 0;
    for f in enumerate_formulas(m.signature(), &[1, 2], 2) {
        let oracle = [false, true]
            .iter()
            .all(|&x| [false, true].iter().all(|&y| eval(&f, [false, x, y])));
        assert_eq!(m.valid(&f).unwrap(), oracle, "{f}");
        valid += usize::from(oracle);
    }
    assert!(valid > 0);
}

#[test]
fn flattening_examples() {
    let cases = [
        ("CJ", "(neg.pl p1)", "(sim.j3 (imp.j3 (sim.j3 p1) p1))"),
        (
            "CJ",
            "(disj.j3 p1 (neg.pl p1))",
            "(disj.j3 p1 (sim.j3 (imp.j3 (sim.j3 p1) p1)))",
        ),
        ("JS", "p1.it", "(box.s4 p1)"),
        ("JS", "(neg.it p1.it)", "(box.s4 (neg.s4 (box.s4 p1)))"),
        ("PLJ", "p1.pl", "(neg (neg p1))"),
        ("PLJ", "(imp.pl p1 p2)", "(neg (conj p1 (neg p2)))"),
        (
            "PLJ",
            "(imp.it (neg p1) p1.pl)",
            "(imp.it (neg p1) (neg (neg p1)))",
        ),
    ];
    for (c, input, expected) in cases {
        let cb = combination(c).unwrap();
        let f = parse_formula(input, cb.signature()).unwrap();
        assert_eq!(
            cb.identification.flatten(&f).unwrap().to_string(),
            expected,
            "{c} {input}"
        );
    }
}

#[test]
fn flattened_classical_excluded_middle_is_j3_valid() {
    let cb = combination("CJ").unwrap();
    let f = parse_formula("(disj.j3 p1 (neg.pl p1))", cb.signature()).unwrap();
    let flat = cb.identification.flatten(&f).unwrap();
    assert!(j3_semantics().valid(&flat).unwrap());
    for x in 0..3u8 {
        assert!(j3_eval(&flat, &[0, x, 0]) >= 1);
    }
}
