use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use orderax::corpus::{self, load_corpus, parse_problem, render_text, run_all, Registry, RunConfig};
use orderax::models::{for_each_model, search_with_cap, Interpretation, SearchQuery, SearchResult, DEFAULT_SIZE_CAP};
use orderax::nd::{check_scripts, parse_script, NdScript};
use orderax::prover::{prove, ProverConfig, Status};
use orderax::syntax::{expand_defs, DefinedPredicate, Formula, Parser as FormulaParser, Signature};

#[derive(Parser)]
#[command(name = "orderax", version, about = "Prover, proof checker and model finder for the Undir/rev axioms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print wall time to stderr.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Refute the negated goal of a problem file.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        prover: ProverFlags,
        #[arg(long)]
        json: bool,
    },
    /// Check a natural-deduction script.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a finite interpretation.
    Models {
        /// Formulas or axiom names that must hold, comma separated.
        #[arg(long, default_value = "")]
        satisfy: String,
        /// Formulas or axiom names that must fail, comma separated.
        #[arg(long, default_value = "")]
        falsify: String,
        #[arg(long, default_value = "1..4")]
        sizes: String,
        /// Number of models to print.
        #[arg(long, default_value_t = 1)]
        limit: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run every bundled problem and script against its expected outcome.
    Corpus {
        #[command(flatten)]
        prover: ProverFlags,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
}

#[derive(Args)]
struct ProverFlags {
    /// Seconds per refutation attempt.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    max_clauses: Option<usize>,
    /// Given clauses by age versus by weight, as A:B.
    #[arg(long)]
    pick_ratio: Option<String>,
    #[arg(long)]
    no_subsumption: bool,
}

/// An input problem: message for stderr, exit 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<u8, InputError>;

impl ProverFlags {
    fn config(&self) -> Result<ProverConfig, InputError> {
        let mut cfg = ProverConfig::default();
        if let Some(t) = self.timeout {
            if !(t.is_finite() && t > 0.0) {
                return Err(InputError(format!("--timeout must be positive, got {t}")));
            }
            cfg.timeout = Duration::from_secs_f64(t);
        }
        if let Some(n) = self.max_clauses {
            cfg.max_generated = n;
        }
        if let Some(r) = &self.pick_ratio {
            let parsed = r.split_once(':').and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            match parsed {
                Some((a, b)) if a + b > 0 => cfg.pick_ratio = (a, b),
                _ => return Err(InputError(format!("--pick-ratio expects A:B with A+B > 0, got `{r}`"))),
            }
        }
        cfg.subsumption = !self.no_subsumption;
        Ok(cfg)
    }
}

fn jobs(n: Option<usize>) -> usize {
    n.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Refuted => "refutation",
        Status::Saturated => "saturated",
        Status::ResourceOut => "resource-out",
    }
}

fn cmd_prove(file: &Path, flags: &ProverFlags, json: bool) -> CmdResult {
    let cfg = flags.config()?;
    let text = corpus::read(file)?;
    let p = parse_problem(&file.display().to_string(), &text)?;
    let Some(goal) = p.goal() else {
        return Err(InputError(format!("{}: `{}` is not a prove problem", file.display(), p.name)));
    };
    let report = prove(&p.axioms, goal, &p.signature, &p.definitions, &cfg)?;
    let verified = report.is_refuted().then(|| report.verify());
    let code = if report.is_refuted() { 0 } else { 1 };
    if json {
        print_json(&json!({
            "command": "prove",
            "problem": p.name,
            "config": cfg,
            "expected": p.expected,
            "status": report.status,
            "stats": report.stats,
            "verified": verified.as_ref().map(Result::is_ok),
            "used_axioms": report.used_axioms(),
            "attempts": report.attempts,
        }));
        return Ok(code);
    }
    let s = report.stats;
    println!("{}: {} (generated {}, kept {}, given {})", p.name, status_label(report.status), s.generated, s.kept, s.given);
    for (i, a) in report.attempts.iter().enumerate() {
        println!("\ngoal {}: {}", i + 1, a.goal);
        match a.outcome.proof() {
            Some(proof) => print!("{proof}"),
            None => println!("{}", a.outcome.label()),
        }
    }
    match verified {
        Some(Ok(())) => println!("\nproof verified; axioms used: {}", join(&report.used_axioms())),
        Some(Err(e)) => println!("\nproof FAILED verification: {e}"),
        None => {}
    }
    Ok(code)
}

fn join(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
}

/// The script, the problems and lemmas it needs: sibling files in the
/// script's directory take precedence over the bundled corpus.
fn check_closure(file: &Path) -> Result<(NdScript, Registry, Vec<NdScript>), InputError> {
    let text = corpus::read(file)?;
    let script = parse_script(&text, &Signature::geometry()).map_err(|e| InputError(format!("{}: {e}", file.display())))?;
    let mut reg = load_corpus()?;
    let dir = file.parent().unwrap_or(Path::new("."));
    let mut pending = vec![script.clone()];
    let mut closure: Vec<NdScript> = Vec::new();
    while let Some(s) = pending.pop() {
        if closure.iter().any(|c| c.name == s.name) {
            continue;
        }
        let problem_file = dir.join(format!("{}.p", s.problem));
        if problem_file.is_file() {
            reg.load_problem_file(&problem_file)?;
        }
        if !reg.problems.contains_key(&s.problem) {
            return Err(InputError(format!("script `{}` refers to unknown problem `{}`", s.name, s.problem)));
        }
        for lemma in &s.uses {
            let lemma_file = dir.join(format!("{lemma}.nd"));
            if lemma_file.is_file() && lemma_file != file {
                reg.load_script_file(&lemma_file)?;
            }
            match reg.scripts.get(lemma) {
                Some(Ok(l)) => pending.push(l.clone()),
                Some(Err(e)) => return Err(InputError(format!("lemma `{lemma}`: {e}"))),
                None if *lemma == script.name => pending.push(script.clone()),
                None => return Err(InputError(format!("script `{}` uses unknown script `{lemma}`", s.name))),
            }
        }
        closure.push(s);
    }
    closure.reverse();
    Ok((script, reg, closure))
}

fn cmd_check(file: &Path, json: bool) -> CmdResult {
    let (script, reg, closure) = check_closure(file)?;
    let reports = check_scripts(&closure, |p| reg.axioms_of(p))?;
    let target = reports.iter().find(|r| r.script == script.name).expect("target is in its closure");
    if json {
        print_json(&json!({ "command": "check", "script": script.name, "problem": script.problem, "report": target, "lemmas": reports.iter().filter(|r| r.script != script.name).collect::<Vec<_>>() }));
    } else {
        for r in reports.iter().filter(|r| r.script != script.name && !r.ok) {
            println!("lemma {}: rejected at {}", r.script, r.failure.as_ref().expect("rejected"));
        }
        match &target.failure {
            None => println!("{}: ok (problem {}, axioms used: {})", script.name, script.problem, join(&target.used_axioms_transitive)),
            Some(f) => println!("{}: rejected at {f}", script.name),
        }
    }
    Ok(if target.ok { 0 } else { 1 })
}

fn split_items(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

fn formulas(list: &str) -> Result<Vec<(String, Formula)>, InputError> {
    let sig = Signature::geometry();
    let defs = [DefinedPredicate::convergence()];
    split_items(list)
        .into_iter()
        .map(|item| {
            let f = match corpus::builtin_axiom(item) {
                Some(f) => f,
                None => FormulaParser::new(&sig).formula(item).map_err(|e| InputError(format!("`{item}`: {e}")))?,
            };
            if let Some(v) = f.free_vars().into_iter().next() {
                return Err(InputError(format!("`{item}` has free variable `{v}`")));
            }
            Ok((item.to_string(), expand_defs(&f, &defs, &sig)?))
        })
        .collect()
}

fn parse_sizes(s: &str) -> Result<(usize, usize), InputError> {
    let parsed = s.split_once("..").and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
    match parsed {
        Some((a, b)) if 1 <= a && a <= b => Ok((a, b)),
        _ => Err(InputError(format!("--sizes expects a..b with 1 <= a <= b, got `{s}`"))),
    }
}

fn model_json(m: &Interpretation) -> serde_json::Value {
    json!({ "size": m.size(), "rev": m.rev_table(), "undir": m.undir_pairs(), "text": m.to_string() })
}

fn cmd_models(satisfy: &str, falsify: &str, sizes: &str, limit: usize, jobs_flag: Option<usize>, json: bool) -> CmdResult {
    let (sat, fal) = (formulas(satisfy)?, formulas(falsify)?);
    let (min, max) = parse_sizes(sizes)?;
    if max > DEFAULT_SIZE_CAP {
        return Err(InputError(format!("--sizes {sizes}: sizes above {DEFAULT_SIZE_CAP} are not searched")));
    }
    let q = SearchQuery::new(sat.iter().map(|x| x.1.clone()).collect(), fal.iter().map(|x| x.1.clone()).collect(), min..=max);
    let (models, scanned) = if limit <= 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs(jobs_flag)).build()?;
        match pool.install(|| search_with_cap(&q, DEFAULT_SIZE_CAP))? {
            SearchResult::Found { model, scanned, .. } => (vec![model], scanned),
            SearchResult::Exhausted { scanned, .. } => (Vec::new(), scanned),
        }
    } else {
        let mut models = Vec::new();
        let scanned = for_each_model(&q, DEFAULT_SIZE_CAP, |m| {
            models.push(m.clone());
            if models.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        (models, scanned)
    };
    let code = if models.is_empty() { 1 } else { 0 };
    if json {
        let names = |v: &[(String, Formula)]| v.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        print_json(&json!({
            "command": "models",
            "satisfy": names(&sat),
            "falsify": names(&fal),
            "sizes": [min, max],
            "result": if models.is_empty() { "exhausted" } else { "found" },
            "scanned": scanned,
            "models": models.iter().map(model_json).collect::<Vec<_>>(),
        }));
        return Ok(code);
    }
    if models.is_empty() {
        println!("exhausted sizes {min}..{max} ({scanned} interpretations scanned)");
    }
    for (i, m) in models.iter().enumerate() {
        if i > 0 {
            println!();
        }
        println!("found model {} ({scanned} interpretations scanned)", i + 1);
        println!("{m}");
        for (name, f) in &fal {
            if let Ok(Some(w)) = orderax::models::find_witness(f, m) {
                let w: Vec<String> = w.iter().map(|(v, x)| format!("{v}={x}")).collect();
                println!("falsifies {name} at {}", w.join(", "));
            }
        }
    }
    Ok(code)
}

fn cmd_corpus(flags: &ProverFlags, jobs_flag: Option<usize>, json: bool) -> CmdResult {
    let reg = load_corpus()?;
    let cfg = RunConfig { prover: flags.config()?, jobs: jobs(jobs_flag), ..RunConfig::default() };
    let report = run_all(&reg, &cfg);
    if json {
        print_json(&report);
    } else {
        print!("{}", render_text(&report));
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Prove { file, prover, json } => cmd_prove(file, prover, *json),
        Command::Check { file, json } => cmd_check(file, *json),
        Command::Models { satisfy, falsify, sizes, limit, jobs, json } => cmd_models(satisfy, falsify, sizes, *limit, *jobs, *json),
        Command::Corpus { prover, jobs, json, .. } => cmd_corpus(prover, *jobs, *json),
    };
    if cli.timings {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
