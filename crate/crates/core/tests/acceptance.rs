//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines always print; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orderax::corpus::{load_corpus, run_all, Registry, RunConfig};
use orderax::models::{check_model, search, Interpretation, SearchQuery, SearchResult};
use orderax::nd::{check_scripts, mutations, NdScript};
use orderax::prover::{prove, ProverConfig};
use orderax::syntax::Formula;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn provability(reg: &Registry) -> Verdict {
    let mut worst = (0, Duration::ZERO);
    for p in reg.problems.values() {
        let Some(goal) = p.goal() else { continue };
        let start = Instant::now();
        let r = prove(&p.axioms, goal, &p.signature, &p.definitions, &ProverConfig::default()).map_err(|e| format!("{}: {e}", p.name))?;
        let took = start.elapsed();
        ensure(r.is_refuted(), || format!("{}: {:?}", p.name, r.status))?;
        ensure(r.verify().is_ok(), || format!("{}: proof does not verify", p.name))?;
        ensure(took <= Duration::from_secs(5), || format!("{}: took {took:?}", p.name))?;
        ensure(r.stats.generated <= 50_000, || format!("{}: {} clauses generated", p.name, r.stats.generated))?;
        worst = (worst.0.max(r.stats.generated), worst.1.max(took));
    }
    Ok(format!("G0-G8 refuted and verified; at most {} clauses generated, slowest {:.2}s", worst.0, worst.1.as_secs_f64()))
}

fn constructive(reg: &Registry) -> Verdict {
    let scripts: Vec<NdScript> = reg.scripts.values().map(|s| s.clone().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let check = |list: &[NdScript]| check_scripts(list, |p| reg.axioms_of(p)).map_err(|e| e.to_string());
    let reports = check(&scripts)?;
    for r in &reports {
        ensure(r.ok, || format!("{} rejected: {:?}", r.script, r.failure))?;
    }
    let mut total = 0;
    for s in &scripts {
        let ms = mutations(s);
        ensure(ms.len() >= 4, || format!("{} has only {} mutations", s.name, ms.len()))?;
        for m in ms {
            let list: Vec<NdScript> = scripts.iter().map(|x| if x.name == s.name { m.script.clone() } else { x.clone() }).collect();
            let accepted = check(&list)?.iter().any(|r| r.script == s.name && r.ok);
            ensure(!accepted, || format!("{} accepted with {:?} at step {}", s.name, m.kind, m.step))?;
            total += 1;
        }
    }
    let used = |n: &str| reports.iter().find(|r| r.script == n).map(|r| r.used_axioms_transitive.clone());
    let i6: BTreeSet<String> = ["I.6".to_string()].into();
    ensure(used("S4") == Some(i6.clone()) && used("S5") == Some(i6), || format!("S4 uses {:?}, S5 uses {:?}", used("S4"), used("S5")))?;
    Ok(format!("S1-S8 accepted; {total} mutations all rejected; S4 and S5 rest on {{I.6}} alone"))
}

fn axioms(reg: &Registry, names: &[&str]) -> Vec<(String, Formula)> {
    names.iter().map(|n| (n.to_string(), reg.axioms[*n].clone())).collect()
}

fn disequality(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

fn found(reg: &Registry, satisfy: &[&str], falsify: &[&str], max: usize) -> Result<Interpretation, String> {
    let q = SearchQuery::new(axioms(reg, satisfy).into_iter().map(|x| x.1).collect(), axioms(reg, falsify).into_iter().map(|x| x.1).collect(), 1..=max);
    let model = match search(&q).map_err(|e| e.to_string())? {
        SearchResult::Found { model, .. } => model,
        r => return Err(format!("{satisfy:?} without {falsify:?}: {r:?}")),
    };
    let checks = check_model(&model, &axioms(reg, &[satisfy, falsify].concat())).map_err(|e| e.to_string())?;
    ensure(checks.iter().enumerate().all(|(i, c)| c.holds == (i < satisfy.len())), || format!("model fails re-check: {model}"))?;
    Ok(model)
}

fn model_suite(reg: &Registry) -> Verdict {
    let start = Instant::now();
    let five = ["I.5", "I.6", "I.7", "I.8", "SYM"];
    let m1 = found(reg, &five, &[], 4)?;
    let compass = Interpretation::new(4, vec![2, 3, 0, 1], &disequality(4)).map_err(|e| e.to_string())?;
    let checks = check_model(&compass, &axioms(reg, &five)).map_err(|e| e.to_string())?;
    ensure(checks.iter().all(|c| c.holds), || "compass-4 fails an axiom".into())?;
    let m2 = found(reg, &["I.5"], &["I.6"], 2)?;
    ensure(m2.size() == 2 && m2.rev_table() == [0, 1] && m2.undir_pairs() == [(0, 1)], || format!("M2 model {m2}"))?;
    let m3 = found(reg, &["I.5", "I.6", "I.8"], &["SYM"], 3)?;
    ensure(m3.size() == 3 && m3.rev_table() == [1, 2, 0] && m3.undir_pairs() == disequality(3), || format!("M3 model {m3}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("model suite took {took:?}"))?;
    Ok(format!("M1 found at size {}, compass-4 satisfies all five; M2 and M3 found as exhibited; {:.2}s", m1.size(), took.as_secs_f64()))
}

fn consistency(report: &orderax::corpus::RunReport) -> Verdict {
    for c in &report.cross_checks {
        ensure(c.consistent, || format!("{}: {:?} with {:?}", c.problem, c.prover, c.search))?;
    }
    ensure(report.agreement.len() == 8, || format!("{} kernel-accepted scripts cross-proved", report.agreement.len()))?;
    for a in &report.agreement {
        ensure(a.agrees, || format!("{} accepted by the kernel but not proved: {:?}", a.script, a.prover))?;
    }
    Ok(format!("{} goals: no countermodel up to size 3; all {} kernel-accepted goals proved", report.cross_checks.len(), report.agreement.len()))
}

fn clausifier_property() -> Verdict {
    let sample = common::equisatisfiability_sample(2024, 100);
    let bad: Vec<String> = sample.iter().filter(|a| !a.agrees()).map(|a| a.formula.to_string()).collect();
    ensure(bad.is_empty(), || format!("{} disagreements, first {}", bad.len(), bad[0]))?;
    let unsat = sample.iter().filter(|a| !a.by_size[2].0).count();
    Ok(format!("{} random formulas, sizes 1-3, zero disagreements ({unsat} unsatisfiable at size 3)", sample.len()))
}

fn determinism(reg: &Registry, first: &str) -> Verdict {
    let json = |jobs| serde_json::to_string_pretty(&run_all(reg, &RunConfig { jobs, ..RunConfig::default() })).expect("serializes");
    ensure(json(1) == first, || "two runs with one job differ".into())?;
    ensure(json(4) == first, || "--jobs 4 differs from --jobs 1".into())?;
    Ok(format!("three corpus runs ({} bytes of JSON) byte-identical across 1 and 4 jobs", first.len()))
}

fn occurrences(reg: &Registry) -> Verdict {
    let sym = reg.axioms["SYM"].count_predicate("Undir");
    let i7 = reg.axioms["I.7"].count_predicate("Undir");
    ensure(sym == 2 && i7 == 6, || format!("SYM {sym}, I.7 {i7}"))?;
    Ok(format!("Undir occurs {sym} times in SYM and {i7} times in I.7"))
}

fn main() -> ExitCode {
    let reg = load_corpus().expect("bundled corpus loads");
    let report = run_all(&reg, &RunConfig::default());
    let first = serde_json::to_string_pretty(&report).expect("serializes");
    let results = [
        ("provability", provability(&reg)),
        ("constructive", constructive(&reg)),
        ("models", model_suite(&reg)),
        ("consistency", consistency(&report)),
        ("clausifier", clausifier_property()),
        ("determinism", determinism(&reg, &first)),
        ("occurrences", occurrences(&reg)),
    ];
    let mut ok = true;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {} {name}: PASS: {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {} {name}: FAIL: {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
