use super::*;
use crate::syntax::{parse_formula, Atom, Substitution, Term};

const I5: &str = "forall l. ~Undir(l,l)";
const I6: &str = "forall l. forall m. forall n. (Undir(l,m) -> Undir(l,n) | Undir(m,n))";
const I7: &str = "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> (Undir(l,n) & Undir(l,rev(n))) | (Undir(m,n) & Undir(m,rev(n))))";
const I8: &str = "forall l. forall m. (Undir(l,m) | Undir(l,rev(m)))";
const SYM: &str = "forall l. forall m. (Undir(l,rev(m)) -> Undir(m,rev(l)))";
const W1: &str = "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,n) | Undir(m,n))";
const W2: &str = "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,n) | Undir(m,rev(n)))";
const W3: &str = "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,rev(n)) | Undir(m,n))";
const W4: &str = "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,rev(n)) | Undir(m,rev(n)))";

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn named(list: &[(&str, &str)]) -> Vec<(String, Formula)> {
    list.iter().map(|(n, s)| (n.to_string(), f(s))).collect()
}

fn clauses_of(name: &str, s: &str) -> Vec<Vec<Literal>> {
    let sig = Signature::geometry();
    let mut c = Clausifier::new(&sig);
    c.add(name, &f(s)).unwrap();
    let mut out: Vec<_> = c.finish().clauses.into_iter().map(|c| c.literals).collect();
    out.sort();
    out
}

fn u(a: Term, b: Term) -> Atom {
    Atom::undir(a, b)
}

fn run(axioms: &[(&str, &str)], goal: &str) -> ProveReport {
    prove(&named(axioms), &f(goal), &Signature::geometry(), &[], &ProverConfig::default()).unwrap()
}

#[test]
fn i6_is_one_clause() {
    let x = |i: usize| Term::var(format!("X{i}"));
    let got = clauses_of("I.6", I6);
    assert_eq!(got.len(), 1);
    let expected = vec![Literal::neg(u(x(0), x(1))), Literal::pos(u(x(0), x(2))), Literal::pos(u(x(1), x(2)))];
    assert!(same_clause(&got[0], &expected), "{got:?}");
}

#[test]
fn negated_sym_gives_two_skolem_units() {
    let set = clausify(&[], &f(SYM), &Signature::geometry()).unwrap();
    assert_eq!(set.skolems, vec![("sk0".to_string(), 0), ("sk1".to_string(), 0)]);
    let lits: Vec<_> = set.clauses.iter().map(|c| c.literals.clone()).collect();
    let (a, b) = (Term::constant("sk0"), Term::constant("sk1"));
    assert_eq!(lits.len(), 2);
    assert!(lits.contains(&vec![Literal::pos(u(a.clone(), Term::rev(b.clone())))]));
    assert!(lits.contains(&vec![Literal::neg(u(b, Term::rev(a)))]));
    assert!(set.clauses.iter().all(|c| c.provenance == Provenance::Input { name: NEGATED_GOAL.into() }));
}

#[test]
fn i7_clauses_are_the_w_family() {
    let i7 = clauses_of("I.7", I7);
    let mut w: Vec<Vec<Literal>> = [W1, W2, W3, W4].iter().flat_map(|s| clauses_of("w", s)).collect();
    w.sort();
    assert_eq!(i7.len(), 4);
    assert_eq!(i7, w);
}

#[test]
fn clausify_rejects_open_and_defined() {
    let sig = Signature::geometry();
    assert!(matches!(clausify(&[], &f("Undir(x,x)"), &sig), Err(ClausifyError::NotClosed { .. })));
    let g = f("forall l. forall m. Con(l,m)");
    assert!(matches!(clausify(&[], &g, &sig), Err(ClausifyError::UnexpandedDefinition { .. })));
}

#[test]
fn skolem_terms_depend_on_enclosing_universals_only() {
    // goal ∀l∃m ... negated: ∃l∀m ..., so l becomes a constant
    let set = clausify(&[], &f("forall l. exists m. Undir(l,m)"), &Signature::geometry()).unwrap();
    assert_eq!(set.skolems, vec![("sk0".to_string(), 0)]);
    let set = clausify(&[("a".into(), f("forall l. exists m. Undir(l,m)"))], &f("false"), &Signature::geometry()).unwrap();
    assert_eq!(set.skolems, vec![("sk0".to_string(), 1)]);
}

#[test]
fn w1_from_i6() {
    let r = run(&[("I.6", I6)], W1);
    let proof = r.attempts[0].outcome.proof().expect("refutation");
    assert_eq!(r.verify(), Ok(()));
    assert_eq!(proof.used_axioms().into_iter().collect::<Vec<_>>(), vec!["I.6"]);
}

#[test]
fn sym_from_lemma3_axioms() {
    let r = run(&[("I.5", I5), ("I.6", I6), ("I.8", I8), ("w2", W2)], SYM);
    assert!(r.is_refuted());
    assert_eq!(r.verify(), Ok(()));
}

#[test]
fn i5_does_not_give_i6() {
    let r = run(&[("I.5", I5)], I6);
    assert_eq!(r.status, Status::Saturated);
    assert_eq!(r.attempts[0].outcome, Outcome::Saturated);
}

#[test]
fn resource_limit() {
    let cfg = ProverConfig { max_generated: 3, ..ProverConfig::default() };
    let r = prove(&named(&[("I.5", I5), ("I.6", I6), ("SYM", SYM)]), &f(I7), &Signature::geometry(), &[], &cfg).unwrap();
    assert_eq!(r.status, Status::ResourceOut);
    assert_eq!(r.attempts[0].outcome, Outcome::ResourceOut { resource: Resource::Clauses });
    assert_eq!(r.stats.generated, 3);
}

#[test]
fn all_goals_refuted() {
    let goals: Vec<(&str, Vec<(&str, &str)>, String)> = vec![
        ("G0", vec![("I.5", I5), ("I.6", I6)], "forall l. forall m. (Undir(l,m) -> Undir(m,l))".into()),
        ("G1", vec![("I.6", I6)], W1.into()),
        ("G2", vec![("I.6", I6)], W4.into()),
        ("G3", vec![("I.5", I5), ("I.6", I6), ("SYM", SYM)], W2.into()),
        ("G4", vec![("I.5", I5), ("I.6", I6), ("SYM", SYM)], W3.into()),
        ("G5", vec![("I.5", I5), ("I.6", I6), ("SYM", SYM)], I7.into()),
        ("G6", vec![("I.5", I5), ("I.6", I6), ("I.8", I8), ("w2", W2)], SYM.into()),
        ("G7", vec![("I.5", I5), ("I.6", I6), ("I.7", I7), ("I.8", I8)], SYM.into()),
        ("G8", vec![], format!("({I7}) <-> (({W1}) & ({W2}) & ({W3}) & ({W4}))")),
    ];
    for (name, axioms, goal) in goals {
        let t = std::time::Instant::now();
        let r = run(&axioms, &goal);
        eprintln!("{name}: {:?} {:?} parts={} {:?}", r.status, r.stats, r.attempts.len(), t.elapsed());
        assert!(r.is_refuted(), "{name}");
        assert_eq!(r.verify(), Ok(()), "{name}");
        assert_eq!(r.attempts.len(), if name == "G8" { 5 } else { 1 });
    }
}

#[test]
fn verifier_rejects_tampering() {
    let r = run(&[("I.5", I5), ("I.6", I6), ("SYM", SYM)], W2);
    let r = &r.attempts[0];
    let proof = r.outcome.proof().unwrap().clone();
    assert_eq!(verify_refutation(&proof, &r.inputs), Ok(()));

    let derived: Vec<usize> = proof.steps.iter().enumerate().filter(|(_, c)| !matches!(c.provenance, Provenance::Input { .. })).map(|(k, _)| k).collect();
    let k = derived[0];

    // wrong unifier
    let mut bad = proof.clone();
    match &mut bad.steps[k].provenance {
        Provenance::Resolve { unifier, .. } | Provenance::Factor { unifier, .. } => {
            *unifier = Substitution::new();
        }
        _ => unreachable!(),
    }
    assert!(verify_refutation(&bad, &r.inputs).is_err());

    // missing parent
    let mut bad = proof.clone();
    let parents = bad.steps[k].provenance.parents();
    bad.steps.retain(|c| c.id != parents[0]);
    assert!(verify_refutation(&bad, &r.inputs).is_err());

    // altered conclusion
    let mut bad = proof.clone();
    let last = bad.steps.len() - 1;
    bad.steps[k].literals.push(Literal::pos(u(Term::constant("sk9"), Term::constant("sk9"))));
    assert!(verify_refutation(&bad, &r.inputs).is_err());

    // no empty clause
    let mut bad = proof.clone();
    bad.steps.truncate(last);
    assert!(verify_refutation(&bad, &r.inputs).is_err());

    // input that is not an input
    let mut bad = proof.clone();
    let first_input = bad.steps.iter().position(|c| matches!(c.provenance, Provenance::Input { .. })).unwrap();
    bad.steps[first_input].literals = vec![Literal::pos(u(Term::var("X0"), Term::var("X0")))];
    assert!(verify_refutation(&bad, &r.inputs).is_err());
}

#[test]
fn same_clause_needs_a_bijection() {
    let x = |s: &str| Term::var(s);
    let a = vec![Literal::pos(u(x("A"), x("B")))];
    let b = vec![Literal::pos(u(x("P"), x("Q")))];
    let c = vec![Literal::pos(u(x("P"), x("P")))];
    assert!(same_clause(&a, &b));
    assert!(!same_clause(&a, &c));
    assert!(!same_clause(&c, &a));
}

#[test]
fn proofs_serialize() {
    let r = run(&[("I.6", I6)], W4);
    let json = serde_json::to_string(&r).unwrap();
    let back: ProveReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}


#[test]
fn goal_splitting() {
    let iff = f("Undir(a,a) <-> Undir(b,b) & Undir(c,c)");
    let parts: Vec<String> = split_goal(&iff).iter().map(ToString::to_string).collect();
    assert_eq!(parts, vec!["Undir(a,a) -> Undir(b,b)", "Undir(a,a) -> Undir(c,c)", "Undir(b,b) & Undir(c,c) -> Undir(a,a)"]);
    assert_eq!(split_goal(&f(I7)), vec![f(I7)]);
    assert_eq!(split_goal(&f("~(Undir(a,a) & Undir(b,b))")).len(), 1);
}
