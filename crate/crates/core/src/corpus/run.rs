use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{Expected, Problem, ProblemKind, Registry, AXIOMS};
use crate::models::{check_model, search_with_cap, SearchQuery, SearchResult, Witness, DEFAULT_SIZE_CAP};
use crate::nd::{check_scripts, CheckReport, NdScript};
use crate::prover::{prove, ProveReport, ProverConfig, Stats, Status};
use crate::syntax::{expand_defs, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub prover: ProverConfig,
    /// Worker threads; never changes the report.
    #[serde(skip)]
    pub jobs: usize,
    /// Largest domain size tried by the cross-check.
    pub cross_check_max_size: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { prover: ProverConfig::default(), jobs: 1, cross_check_max_size: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RowDetail {
    Prove {
        stats: Stats,
        attempts: usize,
        proof_steps: usize,
        verified: bool,
        used_axioms: BTreeSet<String>,
        scripts: Vec<String>,
    },
    Models {
        size: Option<usize>,
        scanned: u64,
        model: Option<String>,
        witnesses: Vec<Witness>,
        rechecked: bool,
    },
    Script {
        problem: String,
        used_axioms: BTreeSet<String>,
        used_axioms_transitive: BTreeSet<String>,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: String,
    pub kind: String,
    pub expected: Expected,
    pub outcome: String,
    pub pass: bool,
    pub detail: RowDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CrossSearch {
    Exhausted { max_size: usize, scanned: u64 },
    Found { size: usize, model: String },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub problem: String,
    pub prover: Option<Status>,
    pub search: CrossSearch,
    /// False only when the prover refuted and a countermodel exists.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub script: String,
    pub problem: String,
    pub prover: Option<Status>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Redundancy {
    /// Scripts for w1 and w4 with the axioms they rest on.
    pub scripts: BTreeMap<String, Option<BTreeSet<String>>>,
    /// Both rest on I.6 alone.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub axiom: String,
    pub undir: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Headline {
    pub statement: String,
    pub g5: bool,
    pub g7: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub headline: Headline,
    pub rows: Vec<Row>,
    pub cross_checks: Vec<CrossCheck>,
    pub agreement: Vec<Agreement>,
    pub redundancy: Redundancy,
    pub occurrences: Vec<Occurrence>,
    pub all_pass: bool,
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Refuted => "refutation",
        Status::Saturated => "saturated",
        Status::ResourceOut => "resource-out",
    }
}

fn one_line(s: &impl ToString) -> String {
    s.to_string().replace('\n', "; ")
}

fn expanded(p: &Problem, fs: &[(String, Formula)]) -> Result<Vec<Formula>, String> {
    fs.iter().map(|(_, f)| expand_defs(f, &p.definitions, &p.signature).map_err(|e| e.to_string())).collect()
}

fn prove_problem(p: &Problem, goal: &Formula, cfg: &ProverConfig) -> Result<ProveReport, String> {
    prove(&p.axioms, goal, &p.signature, &p.definitions, cfg).map_err(|e| e.to_string())
}

fn prove_row(p: &Problem, cfg: &ProverConfig) -> (Row, Option<Status>) {
    let goal = p.goal().expect("prove problem");
    let row = |outcome: String, pass: bool, detail| Row { name: p.name.clone(), kind: "prove".into(), expected: p.expected, outcome, pass, detail };
    match prove_problem(p, goal, cfg) {
        Err(message) => (row(format!("error: {message}"), false, RowDetail::Error { message }), None),
        Ok(r) => {
            let verified = r.is_refuted() && r.verify().is_ok();
            let pass = match p.expected {
                Expected::Refutation => verified,
                Expected::NoRefutation => !r.is_refuted(),
                _ => false,
            };
            let detail = RowDetail::Prove {
                stats: r.stats,
                attempts: r.attempts.len(),
                proof_steps: r.proofs().map(|pr| pr.len()).sum(),
                verified,
                used_axioms: r.used_axioms(),
                scripts: p.scripts.clone(),
            };
            (row(status_label(r.status).into(), pass, detail), Some(r.status))
        }
    }
}

fn models_row(p: &Problem) -> Row {
    let ProblemKind::ModelSearch { satisfy, falsify, sizes } = &p.kind else { unreachable!("model-search problem") };
    let row = |outcome: String, pass: bool, detail| Row { name: p.name.clone(), kind: "model-search".into(), expected: p.expected, outcome, pass, detail };
    let query = match (expanded(p, satisfy), expanded(p, falsify)) {
        (Ok(s), Ok(f)) => SearchQuery::new(s, f, sizes.clone()),
        (Err(message), _) | (_, Err(message)) => return row(format!("error: {message}"), false, RowDetail::Error { message }),
    };
    match search_with_cap(&query, DEFAULT_SIZE_CAP) {
        Err(e) => row(format!("error: {e}"), false, RowDetail::Error { message: e.to_string() }),
        Ok(SearchResult::Exhausted { scanned, .. }) => row(
            "exhausted".into(),
            p.expected == Expected::Exhausted,
            RowDetail::Models { size: None, scanned, model: None, witnesses: Vec::new(), rechecked: true },
        ),
        Ok(SearchResult::Found { model, witnesses, scanned }) => {
            let names = satisfy.iter().chain(falsify).map(|(n, _)| n.clone());
            let fs: Vec<(String, Formula)> = satisfy.iter().chain(falsify).cloned().collect();
            let rechecked = expanded(p, &fs)
                .ok()
                .and_then(|fs| check_model(&model, &names.zip(fs).collect::<Vec<_>>()).ok())
                .is_some_and(|cs| cs.iter().enumerate().all(|(i, c)| c.holds == (i < satisfy.len())));
            row(
                format!("found (size {})", model.size()),
                p.expected == Expected::Found && rechecked,
                RowDetail::Models { size: Some(model.size()), scanned, model: Some(one_line(&model)), witnesses, rechecked },
            )
        }
    }
}

/// Countermodel search for a prove problem at sizes up to `max_size`,
/// judged against the prover's status.
pub fn cross_check(p: &Problem, prover: Option<Status>, max_size: usize) -> CrossCheck {
    let search = match (p.goal(), expanded(p, &p.axioms)) {
        (None, _) => CrossSearch::Error { message: "not a prove problem".into() },
        (_, Err(message)) => CrossSearch::Error { message },
        (Some(goal), Ok(axioms)) => match expand_defs(goal, &p.definitions, &p.signature) {
            Err(e) => CrossSearch::Error { message: e.to_string() },
            Ok(goal) => match search_with_cap(&SearchQuery::new(axioms, vec![goal], 1..=max_size), max_size.max(DEFAULT_SIZE_CAP)) {
                Ok(SearchResult::Exhausted { scanned, .. }) => CrossSearch::Exhausted { max_size, scanned },
                Ok(SearchResult::Found { model, .. }) => CrossSearch::Found { size: model.size(), model: one_line(&model) },
                Err(e) => CrossSearch::Error { message: e.to_string() },
            },
        },
    };
    let consistent = match &search {
        CrossSearch::Found { .. } => prover != Some(Status::Refuted),
        CrossSearch::Exhausted { .. } => true,
        CrossSearch::Error { .. } => false,
    };
    CrossCheck { problem: p.name.clone(), prover, search, consistent }
}

enum Task<'a> {
    Prove(&'a Problem),
    Models(&'a Problem),
    Agree(&'a NdScript, &'a Problem),
}

enum Done {
    Prove(Row, CrossCheck),
    Models(Row),
    Agree(Agreement),
}

fn run_task(t: &Task<'_>, cfg: &RunConfig) -> Done {
    match t {
        Task::Prove(p) => {
            let (row, status) = prove_row(p, &cfg.prover);
            Done::Prove(row, cross_check(p, status, cfg.cross_check_max_size))
        }
        Task::Models(p) => Done::Models(models_row(p)),
        Task::Agree(s, p) => {
            let status = prove_problem(p, &s.goal, &cfg.prover).ok().map(|r| r.status);
            Done::Agree(Agreement { script: s.name.clone(), problem: p.name.clone(), prover: status, agrees: status == Some(Status::Refuted) })
        }
    }
}

/// Script rows in name order. Scripts that did not parse, or that rest on
/// one that is missing or did not parse, fail without being checked.
fn script_rows(reg: &Registry) -> (Vec<Row>, Vec<CheckReport>) {
    let mut unavailable: BTreeMap<String, String> = BTreeMap::new();
    for (name, entry) in &reg.scripts {
        if let Err(e) = entry {
            unavailable.insert(name.clone(), format!("parse error: {e}"));
        }
    }
    loop {
        let before = unavailable.len();
        for (name, s) in reg.scripts.iter().filter_map(|(n, e)| e.as_ref().ok().map(|s| (n, s))) {
            if unavailable.contains_key(name) {
                continue;
            }
            if let Some(dep) = s.uses.iter().find(|u| unavailable.contains_key(*u) || !reg.scripts.contains_key(*u)) {
                unavailable.insert(name.clone(), format!("uses unavailable script {dep}"));
            }
        }
        if unavailable.len() == before {
            break;
        }
    }
    let ready: Vec<NdScript> = reg.scripts.iter().filter(|(n, _)| !unavailable.contains_key(*n)).filter_map(|(_, e)| e.as_ref().ok().cloned()).collect();
    let (reports, registry_error) = match check_scripts(&ready, |p| reg.axioms_of(p)) {
        Ok(r) => (r, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let by_name: BTreeMap<&str, &CheckReport> = reports.iter().map(|r| (r.script.as_str(), r)).collect();
    let rows = reg
        .scripts
        .iter()
        .map(|(name, entry)| {
            let problem = entry.as_ref().map(|s| s.problem.clone()).unwrap_or_default();
            let fail = |outcome: String| Row {
                name: name.clone(),
                kind: "check-script".into(),
                expected: Expected::ScriptOk,
                outcome: outcome.clone(),
                pass: false,
                detail: RowDetail::Error { message: outcome },
            };
            if let Some(why) = unavailable.get(name) {
                return fail(why.clone());
            }
            if let Some(e) = &registry_error {
                return fail(e.clone());
            }
            let r = by_name[name.as_str()];
            let outcome = match &r.failure {
                None => "ok".to_string(),
                Some(f) => format!("rejected at {f}"),
            };
            Row {
                name: name.clone(),
                kind: "check-script".into(),
                expected: Expected::ScriptOk,
                outcome,
                pass: r.ok,
                detail: RowDetail::Script {
                    problem,
                    used_axioms: r.used_axioms.clone(),
                    used_axioms_transitive: r.used_axioms_transitive.clone(),
                },
            }
        })
        .collect();
    (rows, reports)
}

/// Runs every problem and script and judges each against its expected
/// outcome. Never stops early; the report is the same for any `jobs`.
pub fn run_all(reg: &Registry, cfg: &RunConfig) -> RunReport {
    let (script_rows, reports) = script_rows(reg);
    let accepted: Vec<&NdScript> = reports.iter().filter(|r| r.ok).filter_map(|r| reg.script(&r.script)).collect();

    let mut tasks: Vec<Task<'_>> = reg
        .problems
        .values()
        .map(|p| match p.kind {
            ProblemKind::Prove { .. } => Task::Prove(p),
            ProblemKind::ModelSearch { .. } => Task::Models(p),
        })
        .collect();
    tasks.extend(accepted.iter().filter_map(|s| reg.problems.get(&s.problem).map(|p| Task::Agree(s, p))));

    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().expect("thread pool");
    let done: Vec<Done> = pool.install(|| tasks.par_iter().map(|t| run_task(t, cfg)).collect());

    let mut rows = Vec::new();
    let mut cross_checks = Vec::new();
    let mut agreement = Vec::new();
    for d in done {
        match d {
            Done::Prove(row, cc) => {
                rows.push(row);
                cross_checks.push(cc);
            }
            Done::Models(row) => rows.push(row),
            Done::Agree(a) => agreement.push(a),
        }
    }
    rows.extend(script_rows);
    rows.sort_by(|a, b| a.name.cmp(&b.name));

    let used = |name: &str| reports.iter().find(|r| r.script == name && r.ok).map(|r| r.used_axioms_transitive.clone());
    let scripts: BTreeMap<String, Option<BTreeSet<String>>> = ["S4", "S5"].iter().map(|s| (s.to_string(), used(s))).collect();
    let only_i6: BTreeSet<String> = ["I.6".to_string()].into();
    let redundancy = Redundancy { holds: scripts.values().all(|u| u.as_ref() == Some(&only_i6)), scripts };

    let occurrences = AXIOMS
        .iter()
        .filter_map(|(n, _)| reg.axioms.get(*n).map(|f| Occurrence { axiom: n.to_string(), undir: f.count_predicate("Undir") }))
        .collect();

    let passed = |name: &str| rows.iter().any(|r| r.name == name && r.pass);
    let (g5, g7) = (passed("G5"), passed("G7"));
    let headline = Headline { statement: "{I.5, I.6, I.8, SYM} and {I.5, I.6, I.7, I.8} are equivalent".into(), g5, g7, holds: g5 && g7 };

    let all_pass = rows.iter().all(|r| r.pass)
        && cross_checks.iter().all(|c| c.consistent)
        && agreement.iter().all(|a| a.agrees)
        && redundancy.holds
        && headline.holds;
    RunReport { config: cfg.clone(), headline, rows, cross_checks, agreement, redundancy, occurrences, all_pass }
}

fn set(s: &BTreeSet<String>) -> String {
    format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", "))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let h = &r.headline;
    let _ = writeln!(out, "{}: {} (G5 {}, G7 {})", h.statement, verdict(h.holds), verdict(h.g5), verdict(h.g7));
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<5} {:<13} {:<14} {:<40} {:<7} details", "name", "kind", "expected", "outcome", "verdict");
    for row in &r.rows {
        let details = match &row.detail {
            RowDetail::Prove { stats, attempts, proof_steps, used_axioms, .. } => format!(
                "generated={} kept={} given={} attempts={attempts} proof_steps={proof_steps} used={}",
                stats.generated,
                stats.kept,
                stats.given,
                set(used_axioms)
            ),
            RowDetail::Models { scanned, model, .. } => match model {
                Some(m) => format!("scanned={scanned} {m}"),
                None => format!("scanned={scanned}"),
            },
            RowDetail::Script { used_axioms_transitive, .. } => format!("used={}", set(used_axioms_transitive)),
            RowDetail::Error { message } => message.clone(),
        };
        let outcome: String = row.outcome.chars().take(40).collect();
        let _ = writeln!(out, "{:<5} {:<13} {:<14} {:<40} {:<7} {details}", row.name, row.kind, row.expected.label(), outcome, verdict(row.pass));
    }

    let _ = writeln!(out, "\ncross-check (countermodels up to size {}):", r.config.cross_check_max_size);
    for c in &r.cross_checks {
        let prover = c.prover.map_or("error", status_label);
        let search = match &c.search {
            CrossSearch::Exhausted { max_size, scanned } => format!("no countermodel up to size {max_size} ({scanned} scanned)"),
            CrossSearch::Found { size, model } => format!("countermodel at size {size}: {model}"),
            CrossSearch::Error { message } => format!("error: {message}"),
        };
        let _ = writeln!(out, "  {:<5} prover={prover:<12} {search} {}", c.problem, if c.consistent { "consistent" } else { "INCONSISTENT" });
    }

    let _ = writeln!(out, "\nkernel and prover agreement:");
    for a in &r.agreement {
        let _ = writeln!(out, "  {:<5} ({}) prover={} {}", a.script, a.problem, a.prover.map_or("error", status_label), verdict(a.agrees));
    }

    let _ = writeln!(out, "\nredundancy: w1 and w4 rest on I.6 alone: {}", verdict(r.redundancy.holds));
    for (s, used) in &r.redundancy.scripts {
        let _ = writeln!(out, "  {s}: {}", used.as_ref().map_or("not checked".to_string(), set));
    }

    let _ = writeln!(out, "\nUndir occurrences:");
    for o in &r.occurrences {
        let _ = writeln!(out, "  {:<4} {}", o.axiom, o.undir);
    }
    let _ = writeln!(out, "\noverall: {}", verdict(r.all_pass));
    out
}
