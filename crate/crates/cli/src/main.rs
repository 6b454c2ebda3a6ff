use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logicfuse::calculus::{
    check_derivation, combine_calculus, crosscheck, parse_sequent, Derivation, GentzenCalculus,
    Sequent,
};
use logicfuse::formula::{parse_formula, Constructor, Formula, Signature};
use logicfuse::instances::{self, builtin, corrupted_pl_j3_triple, pl_j3_triple, Bundle};
use logicfuse::logicfile::LogicFile;
use logicfuse::search::{search, SearchConfig, SearchOutcome};
use logicfuse::semantics::{check_conservative_translation, Condition, MatrixLogic, Valuation};
use logicfuse::translation::{ConstructorTranslation, Identification};

#[derive(Parser)]
#[command(
    name = "logicfuse",
    version,
    about = "Combine propositional logics through constructor translations"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a translation to a source formula.
    Translate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Pick a translation by name when several connect the two logics.
        #[arg(long)]
        translation: Option<String>,
        /// Definitions file to search for translations besides the built-ins.
        #[arg(long)]
        file: Option<PathBuf>,
        formula: String,
    },
    /// Flatten a formula of a combined logic into its host.
    Flatten {
        #[arg(long)]
        logic: String,
        formula: String,
    },
    /// Search for a derivation of a formula or a sequent `A, B => C`.
    Prove {
        #[arg(long)]
        logic: String,
        #[arg(long, default_value_t = SearchConfig::default().max_depth)]
        max_depth: usize,
        #[arg(long)]
        no_loop_check: bool,
        #[arg(long)]
        trace: bool,
        /// Rule names to try first, comma separated.
        #[arg(long, value_delimiter = ',')]
        rule_order: Vec<String>,
        goal: String,
    },
    /// Check a derivation file.
    Check {
        /// Defaults to the `# logic:` header written by `prove`.
        #[arg(long)]
        logic: Option<String>,
        file: PathBuf,
    },
    /// Decide validity in a truth-table semantics.
    Validate {
        #[arg(long)]
        logic: String,
        /// Read the formula in this combined logic and flatten it first.
        #[arg(long)]
        flatten: Option<String>,
        formula: String,
    },
    /// Print the generated calculus of a combination.
    Combine {
        #[arg(long)]
        logic: String,
        /// Compare with the hand-entered calculus; differences exit with 1.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Check a translation with model maps for conservativity.
    Audit {
        #[arg(long, default_value = "pl-j3")]
        translation: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        vars: u32,
        /// Use the backward model map that sends 1/2 to false.
        #[arg(long)]
        corrupted: bool,
        /// Counterexamples shown in text output.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
}

/// An input problem; exits with 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(bool, Value, String), Failure>;

/// A logic named on the command line, built in or read from a file.
struct Target {
    name: String,
    signature: Signature,
    calculus: Option<GentzenCalculus>,
    semantics: Option<Arc<MatrixLogic>>,
    ident: Option<Identification>,
    transcription: Option<GentzenCalculus>,
}

fn resolve(logic: &str) -> Result<Target, Failure> {
    if Path::new(logic).is_file() {
        return from_file(logic);
    }
    Ok(match builtin(logic)? {
        Bundle::Logic(l) => Target {
            name: l.name,
            signature: l.signature,
            calculus: l.calculus,
            semantics: l.semantics,
            ident: None,
            transcription: None,
        },
        Bundle::Combination(c) => Target {
            name: c.name,
            signature: c.identification.combined().clone(),
            calculus: Some(c.generated),
            semantics: None,
            ident: Some(c.identification),
            transcription: Some(c.transcription),
        },
    })
}

/// The first combination in the file, else the first calculus, semantics or
/// signature.
fn from_file(path: &str) -> Result<Target, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))?;
    let file = LogicFile::parse(&text).map_err(|e| Failure(format!("{path}: {e}")))?;
    if let Some(decl) = file.combinations.first() {
        let ident = decl.identification.clone();
        let host_name = decl.host_calculus.as_deref().ok_or_else(|| {
            Failure(format!(
                "{path}: combination {} names no host calculus",
                decl.name
            ))
        })?;
        let host = file
            .calculus(host_name)
            .or_else(|| instances::library().calculus(host_name))
            .ok_or_else(|| Failure(format!("{path}: unknown calculus {host_name}")))?;
        let generated = combine_calculus(host, &ident, &format!("G_{}", decl.name))?;
        return Ok(Target {
            name: decl.name.clone(),
            signature: ident.combined().clone(),
            calculus: Some(generated),
            semantics: None,
            transcription: decl
                .transcription
                .as_deref()
                .and_then(|n| file.calculus(n))
                .cloned(),
            ident: Some(ident),
        });
    }
    let semantics_for = |sig: &str| {
        file.semantics
            .iter()
            .find(|m| m.signature().name() == sig)
            .map(|m| Arc::new(m.clone()))
    };
    if let Some(g) = file.calculi.first() {
        return Ok(Target {
            name: g.name().to_string(),
            signature: g.signature().clone(),
            semantics: semantics_for(g.signature().name()),
            calculus: Some(g.clone()),
            ident: None,
            transcription: None,
        });
    }
    if let Some(m) = file.semantics.first() {
        return Ok(Target {
            name: m.name().to_string(),
            signature: m.signature().clone(),
            calculus: None,
            semantics: Some(Arc::new(m.clone())),
            ident: None,
            transcription: None,
        });
    }
    let sig = file
        .signatures
        .first()
        .ok_or_else(|| Failure(format!("{path}: no definitions")))?;
    Ok(Target {
        name: sig.name().to_string(),
        signature: sig.clone(),
        calculus: None,
        semantics: None,
        ident: None,
        transcription: None,
    })
}

fn formula_json(f: &Formula) -> Value {
    json!(f.to_string())
}

fn sequent_json(s: &Sequent) -> Value {
    json!({
        "left": s.left().iter().map(formula_json).collect::<Vec<_>>(),
        "right": s.right().iter().map(formula_json).collect::<Vec<_>>(),
    })
}

fn derivation_json(d: &Derivation) -> Value {
    Value::Array(
        d.lines()
            .iter()
            .map(|l| {
                json!({
                    "number": l.number,
                    "sequent": sequent_json(&l.sequent),
                    "rule": l.rule,
                    "premises": l.premises,
                })
            })
            .collect(),
    )
}

fn find_translation(
    from: &str,
    to: &str,
    name: Option<&str>,
    file: Option<&Path>,
) -> Result<ConstructorTranslation, Failure> {
    let mut pool: Vec<ConstructorTranslation> = Vec::new();
    if let Some(p) = file {
        let text =
            std::fs::read_to_string(p).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
        pool.extend(LogicFile::parse(&text)?.translations);
    }
    pool.extend(instances::library().translations.iter().cloned());
    pool.into_iter()
        .find(|t| {
            t.source().name() == from && t.host().name() == to && name.is_none_or(|n| t.name() == n)
        })
        .ok_or_else(|| {
            Failure(format!(
                "no translation from {from} to {to}{}",
                name.map(|n| format!(" named {n}")).unwrap_or_default()
            ))
        })
}

fn translate(from: &str, to: &str, name: Option<&str>, file: Option<&Path>, text: &str) -> Outcome {
    let t = find_translation(from, to, name, file)?;
    let phi = parse_formula(text, t.source())?;
    let image = t.translate(&phi)?;
    Ok((
        true,
        json!({"translation": t.name(), "input": phi.to_string(), "output": image.to_string()}),
        image.to_string(),
    ))
}

fn flatten(logic: &str, text: &str) -> Outcome {
    let target = resolve(logic)?;
    let ident = target
        .ident
        .ok_or_else(|| Failure(format!("{} is not a combination", target.name)))?;
    let phi = parse_formula(text, &target.signature)?;
    let flat = ident.flatten(&phi)?;
    Ok((
        true,
        json!({"logic": target.name, "input": phi.to_string(), "output": flat.to_string()}),
        flat.to_string(),
    ))
}

fn goal_of(text: &str, sig: &Signature) -> Result<Sequent, Failure> {
    if text.contains("=>") {
        Ok(parse_sequent(text, sig)?)
    } else {
        Ok(Sequent::goal(parse_formula(text, sig)?))
    }
}

fn prove(logic: &str, cfg: SearchConfig, text: &str) -> Outcome {
    let target = resolve(logic)?;
    let g = target
        .calculus
        .ok_or_else(|| Failure(format!("{} has no calculus", target.name)))?;
    let goal = goal_of(text, g.signature())?;
    g.check_sequent(&goal)?;
    let report = search(&g, &goal, &cfg);
    let mut out = String::new();
    for t in &report.trace {
        out.push_str(&format!("# {t}\n"));
    }
    let derivation = match &report.outcome {
        SearchOutcome::Proved(d) => {
            out.push_str(&format!("# logic: {logic}\n{d}"));
            derivation_json(d)
        }
        other => {
            out.push_str(&format!("{other}\n"));
            Value::Null
        }
    };
    let value = json!({
        "logic": target.name,
        "goal": sequent_json(&goal),
        "outcome": report.outcome.label(),
        "expansions": report.expansions,
        "derivation": derivation,
        "trace": report.trace,
    });
    Ok((
        report.outcome.is_proved(),
        value,
        out.trim_end().to_string(),
    ))
}

fn check(logic: Option<&str>, path: &Path) -> Outcome {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let header = text.lines().find_map(|l| {
        l.trim()
            .strip_prefix("# logic:")
            .map(|s| s.trim().to_string())
    });
    let logic = logic
        .map(str::to_string)
        .or(header)
        .ok_or_else(|| Failure("no --logic given and no `# logic:` header in the file".into()))?;
    let target = resolve(&logic)?;
    let g = target
        .calculus
        .ok_or_else(|| Failure(format!("{} has no calculus", target.name)))?;
    let d = Derivation::parse(&text, g.signature())?;
    let (ok, diags) = match check_derivation(&g, &d) {
        Ok(()) => (true, Vec::new()),
        Err(ds) => (false, ds),
    };
    let value = json!({
        "file": path.display().to_string(),
        "logic": target.name,
        "lines": d.len(),
        "ok": ok,
        "diagnostics": diags.iter().map(|d| json!({"line": d.line, "reason": d.reason})).collect::<Vec<_>>(),
    });
    let text = if ok {
        format!("ok: {} lines check in {}", d.len(), g.name())
    } else {
        diags
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok((ok, value, text))
}

fn validate(logic: &str, via: Option<&str>, text: &str) -> Outcome {
    let target = resolve(logic)?;
    let m = target
        .semantics
        .ok_or_else(|| Failure(format!("{} has no truth-table semantics", target.name)))?;
    let (input, phi) = match via {
        Some(c) => {
            let comb = resolve(c)?;
            let ident = comb
                .ident
                .ok_or_else(|| Failure(format!("{} is not a combination", comb.name)))?;
            let phi = parse_formula(text, &comb.signature)?;
            let flat = ident.flatten(&phi)?;
            (phi, over_host(&ident, &flat, m.signature())?)
        }
        None => {
            let phi = parse_formula(text, m.signature())?;
            (phi.clone(), phi)
        }
    };
    let props: Vec<u32> = phi.props().into_iter().collect();
    let mut refutation = None;
    for v in Valuation::all(&props, m.matrix().size()) {
        if !m.satisfies(&v, &phi)? {
            refutation = Some(v.render(m.matrix()));
            break;
        }
    }
    let valid = refutation.is_none();
    let value = json!({
        "logic": m.name(),
        "formula": input.to_string(),
        "evaluated": phi.to_string(),
        "valid": valid,
        "counterexample": refutation,
    });
    let text = match &refutation {
        None => "valid".to_string(),
        Some(v) => format!("invalid: {v}"),
    };
    Ok((valid, value, text))
}

/// Reads a flattened formula back over the semantics' own signature, undoing
/// the host renaming.
fn over_host(ident: &Identification, flat: &Formula, sig: &Signature) -> Result<Formula, Failure> {
    if sig.name() != ident.translation().host().name() {
        return Err(Failure(format!(
            "{} is not the host of the combination ({})",
            sig.name(),
            ident.translation().host().name()
        )));
    }
    let back: Vec<_> = ident
        .host_rename()
        .pairs()
        .map(|(a, b)| (b.clone(), a.clone()))
        .collect();
    let f = rename_back(flat, &back);
    sig.check(&f)?;
    Ok(f)
}

fn rename_back(f: &Formula, back: &[(Constructor, Constructor)]) -> Formula {
    match f.head() {
        None => f.clone(),
        Some(c) => {
            let c = back
                .iter()
                .find(|(k, _)| k == c)
                .map_or(c, |(_, v)| v)
                .clone();
            Formula::app(c, f.args().iter().map(|a| rename_back(a, back)).collect())
        }
    }
}

fn combine(logic: &str, check: bool) -> Outcome {
    let target = resolve(logic)?;
    if target.ident.is_none() {
        return Err(Failure(format!("{} is not a combination", target.name)));
    }
    let g = target.calculus.expect("combinations carry a calculus");
    let mut text = g.to_string();
    let mut ok = true;
    let mut diff_json = Value::Null;
    if check {
        let t = target.transcription.ok_or_else(|| {
            Failure(format!(
                "{} has no transcription to compare with",
                target.name
            ))
        })?;
        match crosscheck(&g, &t) {
            Ok(()) => {
                text.push_str(&format!("\ncrosscheck against {}: ok", t.name()));
                diff_json = json!({"ok": true, "missing": [], "extra": []});
            }
            Err(d) => {
                ok = false;
                text.push_str(&format!("\ncrosscheck against {}:\n{d}", t.name()));
                diff_json = json!({"ok": false, "missing": d.missing, "extra": d.extra});
            }
        }
    }
    let value = json!({"logic": target.name, "calculus": g.to_string(), "crosscheck": diff_json});
    Ok((ok, value, text.trim_end().to_string()))
}

fn audit(name: &str, depth: usize, vars: u32, corrupted: bool, show: usize) -> Outcome {
    if name != "pl-j3" {
        return Err(Failure(format!(
            "no model maps are known for translation {name}; only pl-j3 can be audited"
        )));
    }
    let triple = if corrupted {
        corrupted_pl_j3_triple()
    } else {
        pl_j3_triple()
    };
    let vars: Vec<u32> = (1..=vars).collect();
    let report = check_conservative_translation(&triple, &vars, depth)?;
    let ok = report.counterexamples.is_empty();
    let value = json!({
        "translation": name,
        "corrupted": corrupted,
        "formulas": report.formulas,
        "checks": report.checks,
        "counterexamples": report.counterexamples.iter().map(|c| json!({
            "formula": c.formula.to_string(),
            "condition": match c.condition { Condition::Forward => "forward", Condition::Backward => "backward" },
            "valuation": c.valuation,
        })).collect::<Vec<_>>(),
    });
    let mut text = format!(
        "{} formulas, {} checks, {} counterexamples",
        report.formulas,
        report.checks,
        report.counterexamples.len()
    );
    for c in report.counterexamples.iter().take(show) {
        text.push_str(&format!("\n{c}"));
    }
    Ok((ok, value, text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Translate {
            from,
            to,
            translation,
            file,
            formula,
        } => translate(from, to, translation.as_deref(), file.as_deref(), formula),
        Command::Flatten { logic, formula } => flatten(logic, formula),
        Command::Prove {
            logic,
            max_depth,
            no_loop_check,
            trace,
            rule_order,
            goal,
        } => {
            let cfg = SearchConfig {
                max_depth: *max_depth,
                loop_check: !no_loop_check,
                rule_order: rule_order.clone(),
                trace: *trace,
            };
            prove(logic, cfg, goal)
        }
        Command::Check { logic, file } => check(logic.as_deref(), file),
        Command::Validate {
            logic,
            flatten,
            formula,
        } => validate(logic, flatten.as_deref(), formula),
        Command::Combine { logic, crosscheck } => combine(logic, *crosscheck),
        Command::Audit {
            translation,
            depth,
            vars,
            corrupted,
            show,
        } => audit(translation, *depth, *vars, *corrupted, *show),
    };
    match result {
        Ok((ok, value, text)) => {
            let body = match cli.format {
                Format::Text => text,
                Format::Json => serde_json::to_string_pretty(&value).expect("json"),
            };
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            match cli.format {
                Format::Text => eprintln!("error: {msg}"),
                Format::Json => eprintln!("{}", json!({"error": msg})),
            }
            ExitCode::from(2)
        }
    }
}
