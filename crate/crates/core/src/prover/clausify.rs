//! Refutation preprocessing: negation normal form, prenexing, Skolemization
//! and CNF by distribution.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::clause::{is_tautology, normalize, Clause, Literal, Provenance};
use crate::syntax::{Formula, Signature, Substitution, Term};

/// Provenance name given to the clauses of the negated conjecture.
pub const NEGATED_GOAL: &str = "negated_goal";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausifyError {
    #[error("formula `{name}` is not closed: `{var}` is free")]
    NotClosed { name: String, var: String },
    #[error("formula `{name}` still contains defined predicate `{pred}`")]
    UnexpandedDefinition { name: String, pred: String },
    #[error("Skolem symbol `{0}` collides with a declared symbol")]
    SkolemCollision(String),
}

#[derive(Debug, Clone)]
enum Nnf {
    Lit(Literal),
    True,
    False,
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    All(String, Box<Nnf>),
    Ex(String, Box<Nnf>),
}

fn and(a: Nnf, b: Nnf) -> Nnf {
    match (a, b) {
        (Nnf::False, _) | (_, Nnf::False) => Nnf::False,
        (Nnf::True, x) | (x, Nnf::True) => x,
        (a, b) => Nnf::And(Box::new(a), Box::new(b)),
    }
}

fn or(a: Nnf, b: Nnf) -> Nnf {
    match (a, b) {
        (Nnf::True, _) | (_, Nnf::True) => Nnf::True,
        (Nnf::False, x) | (x, Nnf::False) => x,
        (a, b) => Nnf::Or(Box::new(a), Box::new(b)),
    }
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match f {
        Formula::Atom(a) => Nnf::Lit(Literal { positive, atom: a.clone() }),
        Formula::False if positive => Nnf::False,
        Formula::False => Nnf::True,
        Formula::And(a, b) if positive => and(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => or(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if positive => or(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => and(nnf(a, false), nnf(b, false)),
        Formula::Imp(a, b) if positive => or(nnf(a, false), nnf(b, true)),
        Formula::Imp(a, b) => and(nnf(a, true), nnf(b, false)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let inner = nnf(body, positive);
            if matches!(inner, Nnf::True | Nnf::False) {
                return inner;
            }
            let universal = matches!(f, Formula::Forall(..)) == positive;
            if universal {
                Nnf::All(v.clone(), Box::new(inner))
            } else {
                Nnf::Ex(v.clone(), Box::new(inner))
            }
        }
    }
}

/// Gives every binder a distinct upper-case name so quantifiers can be
/// pulled out without capture.
fn rename_binders(f: &Formula, used: &mut BTreeSet<String>, env: &mut Vec<(String, String)>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(a.map_vars(&mut |v| {
            env.iter().rev().find(|(from, _)| from == v).map(|(_, to)| to.clone()).unwrap_or_else(|| v.to_string())
        })),
        Formula::False => Formula::False,
        Formula::And(a, b) => Formula::and(rename_binders(a, used, env), rename_binders(b, used, env)),
        Formula::Or(a, b) => Formula::or(rename_binders(a, used, env), rename_binders(b, used, env)),
        Formula::Imp(a, b) => Formula::imp(rename_binders(a, used, env), rename_binders(b, used, env)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let stem = v.trim_end_matches('\'').to_uppercase();
            let mut fresh = stem.clone();
            let mut k = 1;
            while used.contains(&fresh) {
                fresh = format!("{stem}{k}");
                k += 1;
            }
            used.insert(fresh.clone());
            env.push((v.clone(), fresh.clone()));
            let body = rename_binders(body, used, env);
            env.pop();
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
    }
}

type Prefix = Vec<(bool, String)>;

/// Pulls quantifiers out. When merging the prefixes of two independent
/// subformulas, existentials are taken as early as possible so Skolem terms
/// depend on as few universals as the formula allows.
fn prenex(f: Nnf) -> (Prefix, Nnf) {
    match f {
        Nnf::All(v, body) => {
            let (mut p, m) = prenex(*body);
            p.insert(0, (true, v));
            (p, m)
        }
        Nnf::Ex(v, body) => {
            let (mut p, m) = prenex(*body);
            p.insert(0, (false, v));
            (p, m)
        }
        Nnf::And(a, b) => {
            let ((pa, ma), (pb, mb)) = (prenex(*a), prenex(*b));
            (merge(pa, pb), Nnf::And(Box::new(ma), Box::new(mb)))
        }
        Nnf::Or(a, b) => {
            let ((pa, ma), (pb, mb)) = (prenex(*a), prenex(*b));
            (merge(pa, pb), Nnf::Or(Box::new(ma), Box::new(mb)))
        }
        m => (Vec::new(), m),
    }
}

fn merge(a: Prefix, b: Prefix) -> Prefix {
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    let mut out = Vec::new();
    loop {
        let next = match (a.peek(), b.peek()) {
            (None, None) => return out,
            (Some((false, _)), _) | (Some(_), None) => a.next(),
            (_, Some((false, _))) | (None, Some(_)) => b.next(),
            (Some(_), Some(_)) => a.next(),
        };
        out.extend(next);
    }
}

fn substitute(m: &Nnf, s: &Substitution) -> Nnf {
    match m {
        Nnf::Lit(l) => Nnf::Lit(l.apply(s)),
        Nnf::And(a, b) => Nnf::And(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        Nnf::Or(a, b) => Nnf::Or(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        other => other.clone(),
    }
}

/// CNF by distribution; tautologies are dropped as they appear.
fn cnf(m: &Nnf) -> Vec<Vec<Literal>> {
    match m {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::True => Vec::new(),
        Nnf::False => vec![Vec::new()],
        Nnf::And(a, b) => {
            let mut out = cnf(a);
            out.extend(cnf(b));
            out
        }
        Nnf::Or(a, b) => {
            let (ca, cb) = (cnf(a), cnf(b));
            let mut out = Vec::with_capacity(ca.len() * cb.len());
            for x in &ca {
                for y in &cb {
                    let mut c: Vec<Literal> = x.iter().chain(y).cloned().collect();
                    c.sort();
                    c.dedup();
                    if !is_tautology(&c) {
                        out.push(c);
                    }
                }
            }
            out
        }
        Nnf::All(..) | Nnf::Ex(..) => unreachable!("matrix is quantifier-free"),
    }
}

/// Turns named formulas into clauses, numbering them from zero and
/// allocating Skolem symbols `sk0, sk1, ...` in order of appearance.
pub struct Clausifier<'a> {
    sig: &'a Signature,
    next_skolem: usize,
    skolems: Vec<(String, usize)>,
    clauses: Vec<Clause>,
    seen: BTreeMap<Vec<Literal>, usize>,
}

impl<'a> Clausifier<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Clausifier { sig, next_skolem: 0, skolems: Vec::new(), clauses: Vec::new(), seen: BTreeMap::new() }
    }

    pub fn add(&mut self, name: &str, f: &Formula) -> Result<(), ClausifyError> {
        if let Some(var) = f.free_vars().into_iter().next() {
            return Err(ClausifyError::NotClosed { name: name.into(), var });
        }
        if let Some(a) = f.atoms().into_iter().find(|a| self.sig.is_defined_predicate(&a.pred)) {
            return Err(ClausifyError::UnexpandedDefinition { name: name.into(), pred: a.pred.clone() });
        }
        let renamed = rename_binders(f, &mut BTreeSet::new(), &mut Vec::new());
        let (prefix, matrix) = prenex(nnf(&renamed, true));
        let mut universals: Vec<Term> = Vec::new();
        let mut skolemizer = Substitution::new();
        for (universal, v) in prefix {
            if universal {
                universals.push(Term::Var(v));
            } else {
                let sym = format!("sk{}", self.next_skolem);
                self.next_skolem += 1;
                if self.sig.is_declared(&sym) {
                    return Err(ClausifyError::SkolemCollision(sym));
                }
                self.skolems.push((sym.clone(), universals.len()));
                let t = if universals.is_empty() { Term::Const(sym) } else { Term::App(sym, universals.clone()) };
                // Skolem terms mention only universals, so one simultaneous substitution suffices
                skolemizer.insert(v, t);
            }
        }
        let matrix = substitute(&matrix, &skolemizer);
        for lits in cnf(&matrix) {
            let lits = normalize(lits);
            if self.seen.contains_key(&lits) {
                continue;
            }
            let id = self.clauses.len();
            self.seen.insert(lits.clone(), id);
            self.clauses.push(Clause::new(id, lits, Provenance::Input { name: name.into() }, 0));
        }
        Ok(())
    }

    pub fn add_negated_goal(&mut self, goal: &Formula) -> Result<(), ClausifyError> {
        self.add(NEGATED_GOAL, &Formula::not(goal.clone()))
    }

    pub fn finish(self) -> ClauseSet {
        ClauseSet { clauses: self.clauses, skolems: self.skolems }
    }
}

#[derive(Debug, Clone)]
pub struct ClauseSet {
    pub clauses: Vec<Clause>,
    /// Skolem symbols with their arities.
    pub skolems: Vec<(String, usize)>,
}

/// Clauses of `axioms ∧ ¬goal`.
pub fn clausify(axioms: &[(String, Formula)], goal: &Formula, sig: &Signature) -> Result<ClauseSet, ClausifyError> {
    let mut c = Clausifier::new(sig);
    for (name, f) in axioms {
        c.add(name, f)?;
    }
    c.add_negated_goal(goal)?;
    Ok(c.finish())
}
