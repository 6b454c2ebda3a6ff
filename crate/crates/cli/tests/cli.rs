use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logicfuse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn proved_derivation_round_trips_through_check() {
    let o = run(&["prove", "--logic", "PLJ", "(imp.pl (neg (neg p1)) p1)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.starts_with("# logic: PLJ\n1. => (imp.pl (neg (neg p1)) p1) ; R_imp.pl 2"),
        "{text}"
    );
    let dir = std::env::temp_dir().join(format!("logicfuse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("proof.der");
    std::fs::write(&file, &text).unwrap();
    let c = run(&["check", file.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    let broken: String = text
        .lines()
        .filter(|l| !l.starts_with("4."))
        .map(|l| format!("{l}\n"))
        .collect();
    std::fs::write(&file, broken).unwrap();
    let c = run(&["check", file.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stdout(&c).contains("line 3:"), "{}", stdout(&c));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn translate_gives_the_double_negation_image() {
    let o = run(&["translate", "--from", "PL", "--to", "It", "(imp.pl p1 p1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "(neg.it (conj.it (neg.it (neg.it p1)) (neg.it (neg.it (neg.it p1)))))"
    );
}

#[test]
fn validate_through_flattening() {
    let o = run(&[
        "validate",
        "--logic",
        "J3",
        "(disj.j3 p1 (neg.pl p1))",
        "--flatten",
        "CJ",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = run(&["validate", "--logic", "J3", "(imp.j3 p1 p2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid: "));
}

#[test]
fn exit_codes_separate_verdicts_from_errors() {
    assert_eq!(
        run(&["prove", "--logic", "PLJ", "(imp.it (neg (neg p1)) p1)"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["prove", "--logic", "K", "p1"]).status.code(), Some(2));
    assert_eq!(
        run(&["prove", "--logic", "PLJ", "(imp.pl p1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["prove"]).status.code(), Some(2));
    assert_eq!(
        run(&["flatten", "--logic", "It", "p1"]).status.code(),
        Some(2)
    );
}

#[test]
fn prove_accepts_sequents_and_traces() {
    let o = run(&[
        "prove",
        "--logic",
        "It",
        "--trace",
        "p1, (imp.it p1 p2) => p2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# 0 ")), "{text}");
}

#[test]
fn depth_bound_reports_exhaustion() {
    let o = run(&[
        "prove",
        "--logic",
        "PLJ",
        "--max-depth",
        "2",
        "(imp.pl (neg (neg p1)) p1)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "depth exhausted");
}

#[test]
fn json_output_is_structured() {
    let o = run(&[
        "--format",
        "json",
        "prove",
        "--logic",
        "CJ",
        "(disj.j3 p1 (neg.pl p1))",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "proved");
    assert_eq!(v["goal"]["right"][0], "(disj.j3 p1 (neg.pl p1))");
    assert_eq!(v["derivation"][0]["number"], 1);
    let o = run(&["--format", "json", "audit", "--corrupted"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
    assert_eq!(v["formulas"], 5552);
}

#[test]
fn combine_crosschecks_each_combination() {
    for name in ["PLJ", "JS", "CJ"] {
        let o = run(&["combine", "--logic", name, "--crosscheck"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).trim_end().ends_with(": ok"));
    }
}

#[test]
fn audit_passes_for_the_real_maps() {
    let o = run(&["audit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 counterexamples"));
}

#[test]
fn logic_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("logicfuse-cli-file-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("mini.logic");
    std::fs::write(
        &file,
        "signature Mini\n2: and\nend\n\ncalculus G_Mini over Mini single\naxiom Ax: !p, $G => !p\nrule R_and invertible: $G => (and ?a ?b) <= $G => ?a ; $G => ?b\nend\n",
    )
    .unwrap();
    let path = file.to_str().unwrap();
    let o = run(&["prove", "--logic", path, "p1 => (and p1 p1)"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = run(&["prove", "--logic", path, "p1 => (and p1 p2)"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
