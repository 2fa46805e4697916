use super::*;
use crate::prover::Status;

fn registry() -> Registry {
    load_corpus().unwrap()
}

#[test]
fn builtin_registry_shape() {
    let r = registry();
    assert_eq!(r.problems.keys().cloned().collect::<Vec<_>>(), ["G0", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "M1", "M2", "M3"]);
    assert_eq!(r.scripts.keys().cloned().collect::<Vec<_>>(), ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8"]);
    assert!(r.scripts.values().all(Result::is_ok));
    assert_eq!(r.axioms.len(), 9);
    assert_eq!(r.definitions.len(), 1);
}

#[test]
fn g3_shape() {
    let r = registry();
    let g3 = &r.problems["G3"];
    let names: Vec<&str> = g3.axioms.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["I.5", "I.6", "SYM"]);
    assert_eq!(g3.goal(), Some(&r.axioms["w2"]));
    assert_eq!(g3.expected, Expected::Refutation);
    assert_eq!(g3.scripts, ["S1"]);
    assert_eq!(g3.logic, Logic::Constructive);
}

#[test]
fn m1_shape() {
    let r = registry();
    let ProblemKind::ModelSearch { satisfy, falsify, sizes } = &r.problems["M1"].kind else { panic!() };
    assert_eq!(satisfy.len(), 5);
    assert!(falsify.is_empty());
    assert_eq!(sizes, &(1..=4));
}

#[test]
fn problem_file_errors() {
    let bad = [
        ("problem X\nkind prove\ngoal Undir(x,x)\nexpect refutation\n", "free variable"),
        ("problem X\nkind prove\nexpect refutation\n", "missing `goal`"),
        ("problem X\nkind prove\ngoal false\nexpect found\n", "does not fit"),
        ("problem X\nkind model-search\nsatisfy I.5\nexpect found\n", "missing `sizes`"),
        ("problem X\nkind model-search\nsatisfy I.5\nsizes 3..1\nexpect found\n", "bad size range"),
        ("problem X\nkind prove\naxiom Q.1\ngoal false\nexpect refutation\n", "no built-in axiom"),
        ("problem X\nfrobnicate\n", "unknown directive"),
        ("problem X\nkind prove\ngoal forall l. Undir(l,\nexpect refutation\n", "x.p:3"),
    ];
    for (text, needle) in bad {
        let err = parse_problem("x.p", text).unwrap_err().to_string();
        assert!(err.contains(needle), "{err} lacks {needle}");
    }
}

#[test]
fn builtin_axiom_reference_and_constants() {
    let p = parse_problem("x.p", "problem X\nkind prove\nconstant c\naxiom I.5\ngoal ~Undir(c,c)\nexpect refutation\n").unwrap();
    assert_eq!(p.axioms[0].1, builtin_axiom("I.5").unwrap());
    assert!(p.signature.is_constant("c"));
}

#[test]
fn conflicting_axiom_rejected() {
    let mut r = registry();
    let p = parse_problem("x.p", "problem X\nkind prove\naxiom I.5: forall l. Undir(l,l)\ngoal false\nexpect no-refutation\n").unwrap();
    assert!(matches!(r.insert_problem(p), Err(CorpusError::AxiomConflict { .. })));
}

#[test]
fn cross_check_on_negative_problems() {
    let cfg = crate::prover::ProverConfig::default();
    let p = parse_problem("x.p", EXTRA_FILES[0].1).unwrap();
    let r = crate::prover::prove(&p.axioms, p.goal().unwrap(), &p.signature, &p.definitions, &cfg).unwrap();
    assert_eq!(r.status, Status::Saturated);
    let c = cross_check(&p, Some(r.status), 3);
    assert!(matches!(c.search, CrossSearch::Found { size: 2, .. }), "{c:?}");
    assert!(c.consistent);

    let text = "problem Y\nkind prove\naxiom I.5\naxiom I.6\naxiom I.8\ngoal forall l. forall m. (Undir(l,rev(m)) -> Undir(m,rev(l)))\nexpect no-refutation\n";
    let p = parse_problem("y.p", text).unwrap();
    let c = cross_check(&p, None, 3);
    assert!(matches!(c.search, CrossSearch::Found { size: 3, .. }), "{c:?}");
}

#[test]
fn cross_check_flags_contradiction() {
    // a refutation claimed for a goal with a countermodel is inconsistent
    let p = parse_problem("x.p", EXTRA_FILES[0].1).unwrap();
    assert!(!cross_check(&p, Some(Status::Refuted), 2).consistent);
}

#[test]
fn g1_cross_check_exhausts() {
    let r = registry();
    let c = cross_check(&r.problems["G1"], Some(Status::Refuted), 3);
    assert!(matches!(c.search, CrossSearch::Exhausted { max_size: 3, .. }));
    assert!(c.consistent);
}

#[test]
fn full_run_passes() {
    let r = registry();
    let report = run_all(&r, &RunConfig::default());
    let text = render_text(&report);
    eprintln!("{text}");
    assert_eq!(report.rows.len(), 20);
    assert!(report.all_pass, "{text}");
}

#[test]
fn corrupted_script_is_isolated() {
    let scripts: Vec<(&str, String)> = SCRIPT_FILES
        .iter()
        .map(|(f, t)| (*f, if *f == "S2.nd" { t.replace("AndElimRight", "AndElimLeft") } else { t.to_string() }))
        .collect();
    let borrowed: Vec<(&str, &str)> = scripts.iter().map(|(f, t)| (*f, t.as_str())).collect();
    let r = Registry::from_sources(PROBLEM_FILES, &borrowed).unwrap();
    let report = run_all(&r, &RunConfig::default());
    let failed: Vec<&str> = report.rows.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
    assert_eq!(failed, ["S2", "S8"]);

    let garbled: Vec<(&str, &str)> = SCRIPT_FILES.iter().map(|(f, t)| (*f, if *f == "S2.nd" { "script S2\n1. nonsense" } else { t })).collect();
    let r = Registry::from_sources(PROBLEM_FILES, &garbled).unwrap();
    let report = run_all(&r, &RunConfig::default());
    let failed: Vec<&str> = report.rows.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
    assert_eq!(failed, ["S2", "S8"]);
    assert!(report.headline.holds);
}
