use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use forensic_dl::datagen::Profile;
use forensic_dl::learner::{learn_gci, loo_cv, LearnerConfig, LearningProblem};
use forensic_dl::metrics::{evaluate_closure, experiment_closure, report_json, report_tsv, TrueMap};
use forensic_dl::model::{normalize_kb, validate_kb, Axiom, IssueKind, KnowledgeBase, Subject};
use forensic_dl::ontology::{builtin_ontology, ingest_annotations, parse_annotations, OntologyOptions};
use forensic_dl::reasoner::{all_instances, is_consistent, materialize, ClosureABox};
use forensic_dl::text::{parse_concept, parse_gold_labels, parse_kb, parse_kb_lenient, serialize_kb, SourceDocument};
use forensic_dl::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "forensic-dl", version, about = "Forensic event classification with Horn description logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a knowledge base; diagnostics go to stderr.
    Validate { kb: PathBuf },
    /// Materialize annotations under a knowledge base and list memberships.
    Classify {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        /// Restrict the output to instances of this concept term.
        #[arg(long)]
        query: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Per-class and averaged precision, recall and F1 against gold labels.
    Evaluate {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Learn GCIs for a target class, or cross-validate them with --loocv.
    Learn {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        loocv: bool,
        #[arg(long, default_value_t = 5)]
        max_length: usize,
        #[arg(long, default_value_t = 10)]
        max_hypotheses: usize,
        #[arg(long, default_value_t = 2000)]
        max_expansions: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write a synthetic scenario (annotations, gold labels, cameras, KB).
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "table2", value_parser = ["table2", "table4", "learning"])]
        profile: String,
    },
    /// Print the built-in ontology in `.fkb` syntax.
    Ontology {
        #[arg(long)]
        learned: bool,
        #[arg(long)]
        invented: bool,
    },
}

/// A failure with its exit code; the message is already printed.
struct Exit(u8);

type CliResult = Result<(), Exit>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::Io(_) | Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

fn fail(origin: &str, e: Error) -> Exit {
    match &e {
        Error::Parse { diagnostics, .. } => {
            for d in diagnostics {
                eprintln!("{origin}:{d}");
            }
        }
        Error::Annotation { line, message } => eprintln!("{origin}:{line}:1: error: {message}"),
        other => eprintln!("forensic-dl: {origin}: {other}"),
    }
    Exit(exit_code(&e))
}

fn read(path: &Path) -> Result<SourceDocument, Exit> {
    SourceDocument::read(path).map_err(|e| fail(&path.display().to_string(), Error::Io(e)))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, Exit> {
    let origin = path.display().to_string();
    parse_kb(&read(path)?).map_err(|e| fail(&origin, e))
}

fn load_assertions(path: &Path) -> Result<Vec<Axiom>, Exit> {
    let origin = path.display().to_string();
    let doc = read(path)?;
    let records = parse_annotations(&doc.text).map_err(|e| fail(&origin, e))?;
    ingest_annotations(&records).map_err(|e| fail(&origin, e))
}

fn load_gold(path: &Path) -> Result<TrueMap, Exit> {
    let origin = path.display().to_string();
    parse_gold_labels(&read(path)?).map_err(|e| fail(&origin, e))
}

fn out(text: &str) -> CliResult {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| {
        eprintln!("forensic-dl: {e}");
        Exit(EXIT_USAGE)
    })
}

fn check_consistent(closure: &ClosureABox) -> CliResult {
    let report = is_consistent(closure);
    if report.consistent {
        return Ok(());
    }
    for v in &report.violations {
        eprintln!("inconsistent: {v}");
    }
    Err(Exit(EXIT_INCONSISTENT))
}

fn validate(path: &Path) -> CliResult {
    let doc = read(path)?;
    let origin = path.display().to_string();
    let outcome = parse_kb_lenient(&doc);
    let mut lines: Vec<(usize, usize, String)> = outcome
        .diagnostics
        .iter()
        .map(|d| (d.line, d.column, format!("{}: {}", d.severity, d.message)))
        .collect();
    let mut errors = outcome.has_errors();
    for issue in validate_kb(&outcome.kb) {
        // Undeclared names already carry a position from the parser.
        if issue.kind == IssueKind::UndeclaredName {
            continue;
        }
        let line = match &issue.subject {
            Subject::Axiom(i) => outcome.axiom_lines.get(*i).copied().unwrap_or(0),
            Subject::Rule(i) => outcome.rule_lines.get(*i).copied().unwrap_or(0),
            Subject::Traits(_) => 0,
        };
        lines.push((line, 1, format!("error: {}", issue.message)));
        errors = true;
    }
    lines.sort();
    for (line, col, msg) in lines {
        eprintln!("{origin}:{line}:{col}: {msg}");
    }
    if errors {
        Err(Exit(EXIT_INVALID))
    } else {
        Ok(())
    }
}

fn closure_for(kb: &KnowledgeBase, assertions: &[Axiom], origin: &str) -> Result<ClosureABox, Exit> {
    let program = normalize_kb(kb).map_err(|e| fail(origin, e))?;
    let facts: Vec<Axiom> = kb.assertions().cloned().chain(assertions.iter().cloned()).collect();
    materialize(&program, &facts).map_err(|e| fail(origin, e))
}

fn classify(kb_path: &Path, ann: &Path, query: Option<&str>, as_json: bool) -> CliResult {
    let mut kb = load_kb(kb_path)?;
    let assertions = load_assertions(ann)?;
    let origin = kb_path.display().to_string();
    let closure = closure_for(&kb, &assertions, &origin)?;
    check_consistent(&closure)?;
    let rows: Vec<(String, String)> = match query {
        None => closure.class_memberships().into_iter().filter(|(_, c)| c != "Thing").collect(),
        Some(q) => {
            for ax in &assertions {
                match ax {
                    Axiom::ConceptAssertion { individual, .. } | Axiom::DataAssertion { subject: individual, .. } => {
                        kb.declare_individual(individual.as_str());
                    }
                    Axiom::RoleAssertion { subject, object, .. } => {
                        kb.declare_individual(subject.as_str()).declare_individual(object.as_str());
                    }
                    _ => {}
                }
            }
            let concept = parse_concept(q, &kb).map_err(|e| fail("--query", e))?;
            let members = all_instances(&closure, &concept).map_err(|e| fail("--query", e))?;
            let label = concept.to_string();
            members.into_iter().map(|m| (m, label.clone())).collect()
        }
    };
    if as_json {
        let v: Vec<_> = rows.iter().map(|(i, c)| json!({"individual": i, "class": c})).collect();
        return out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
    }
    let mut text = String::from("individual\tclass\n");
    for (i, c) in rows {
        text.push_str(&format!("{i}\t{c}\n"));
    }
    out(&text)
}

fn evaluate(kb_path: &Path, ann: &Path, gold_path: &Path, as_json: bool) -> CliResult {
    let kb = load_kb(kb_path)?;
    let assertions = load_assertions(ann)?;
    let gold = load_gold(gold_path)?;
    let origin = kb_path.display().to_string();
    let (closure, population) = experiment_closure(&kb, &assertions, &gold).map_err(|e| fail(&origin, e))?;
    check_consistent(&closure)?;
    let report = evaluate_closure(&closure, &gold, &population).map_err(|e| fail(&origin, e))?;
    out(&if as_json { report_json(&report) } else { report_tsv(&report) })
}

#[allow(clippy::too_many_arguments)]
fn learn(
    kb_path: &Path,
    ann: &Path,
    gold_path: &Path,
    target: &str,
    loocv: bool,
    config: LearnerConfig,
    as_json: bool,
) -> CliResult {
    let kb = load_kb(kb_path)?;
    let assertions = load_assertions(ann)?;
    let gold = load_gold(gold_path)?;
    let origin = kb_path.display().to_string();
    let problem = LearningProblem::new(&kb, &assertions, &gold, target).map_err(|e| fail(&origin, e))?;
    if loocv {
        let summary = loo_cv(&problem, &config).map_err(|e| fail(target, e))?;
        if as_json {
            let folds: Vec<_> = summary
                .folds
                .iter()
                .map(|f| {
                    json!({
                        "fold": f.fold,
                        "held_out": f.held_out,
                        "hypothesis": f.hypothesis.as_ref().map(|h| h.expr.to_string()),
                        "tp": f.tp, "fp": f.fp, "fn": f.fn_,
                        "precision": f.precision, "recall": f.recall,
                    })
                })
                .collect();
            let v = json!({"folds": folds, "precision": summary.precision, "recall": summary.recall});
            return out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
        }
        let mut text = String::from("fold\ttp\tfp\tfn\tprecision\trecall\n");
        for f in &summary.folds {
            text.push_str(&format!("{}\t{}\t{}\t{}\t{:.6}\t{:.6}\n", f.fold, f.tp, f.fp, f.fn_, f.precision, f.recall));
        }
        text.push_str(&format!("#mean\t-\t-\t-\t{:.6}\t{:.6}\n", summary.precision, summary.recall));
        return out(&text);
    }
    let hypotheses = learn_gci(&problem, &config).map_err(|e| fail(target, e))?;
    if as_json {
        let v: Vec<_> = hypotheses
            .iter()
            .map(|h| json!({"gci": h.to_axiom(target).to_string(), "score": h.score, "accuracy": h.accuracy, "length": h.length}))
            .collect();
        return out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
    }
    let text: String = hypotheses.iter().map(|h| format!("{}\n", h.to_axiom(target))).collect();
    out(&text)
}

fn generate(seed: u64, dir: &Path, profile: &str) -> CliResult {
    let profile = Profile::parse(profile).ok_or_else(|| {
        eprintln!("forensic-dl: unknown profile `{profile}`");
        Exit(EXIT_USAGE)
    })?;
    let scenario = profile.generate(seed).map_err(|e| fail("generate", e))?;
    scenario.write_to(dir).map_err(|e| fail(&dir.display().to_string(), e))?;
    let individuals: BTreeSet<&str> = scenario.records.iter().map(|r| r.id.as_str()).collect();
    eprintln!("wrote {} records ({} identifiers) to {}", scenario.records.len(), individuals.len(), dir.display());
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Validate { kb } => validate(&kb),
        Command::Classify { kb, annotations, query, json } => classify(&kb, &annotations, query.as_deref(), json),
        Command::Evaluate { kb, annotations, gold, json } => evaluate(&kb, &annotations, &gold, json),
        Command::Learn { kb, annotations, gold, target, loocv, max_length, max_hypotheses, max_expansions, json } => {
            let config = LearnerConfig { max_hypotheses, max_length, max_expansions };
            learn(&kb, &annotations, &gold, &target, loocv, config, json)
        }
        Command::Generate { seed, out, profile } => generate(seed, &out, &profile),
        Command::Ontology { learned, invented } => {
            let kb = builtin_ontology(OntologyOptions { include_learned_gcis: learned, include_invented_gcis: invented });
            out(&serialize_kb(&kb))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code)) => ExitCode::from(code),
    }
}
