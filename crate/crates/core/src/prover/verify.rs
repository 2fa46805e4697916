//! Replays a refutation step by step. Shares no code with the inference
//! engine beyond the data types: renaming, substitution application and
//! clause comparison are reimplemented here.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::clause::{Clause, Literal, Provenance};
use super::proof::RefutationProof;
use crate::syntax::{Atom, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {id}: {reason}")]
pub struct ProofError {
    pub id: usize,
    pub reason: String,
}

fn fail<T>(id: usize, reason: impl Into<String>) -> Result<T, ProofError> {
    Err(ProofError { id, reason: reason.into() })
}

fn subst_term(t: &Term, s: &Substitution) -> Term {
    match t {
        Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, s)).collect()),
    }
}

fn subst_lit(l: &Literal, s: &Substitution) -> Literal {
    Literal { positive: l.positive, atom: Atom::new(l.atom.pred.clone(), l.atom.args.iter().map(|a| subst_term(a, s)).collect()) }
}

fn prime_term(t: &Term) -> Term {
    match t {
        Term::Var(x) => Term::Var(format!("{x}'")),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(prime_term).collect()),
    }
}

fn prime_lit(l: &Literal) -> Literal {
    Literal { positive: l.positive, atom: Atom::new(l.atom.pred.clone(), l.atom.args.iter().map(prime_term).collect()) }
}

fn match_vars(a: &Term, b: &Term, fwd: &mut BTreeMap<String, String>, bwd: &mut BTreeMap<String, String>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ok_f = fwd.get(x).map_or(true, |z| z == y);
            let ok_b = bwd.get(y).map_or(true, |z| z == x);
            if ok_f && ok_b {
                fwd.insert(x.clone(), y.clone());
                bwd.insert(y.clone(), x.clone());
                true
            } else {
                false
            }
        }
        (Term::Const(x), Term::Const(y)) => x == y,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_vars(x, y, fwd, bwd))
        }
        _ => false,
    }
}

fn bijective(a: &[Literal], b: &[Literal], used: &mut Vec<bool>, fwd: &BTreeMap<String, String>, bwd: &BTreeMap<String, String>) -> bool {
    let Some((first, rest)) = a.split_first() else {
        return true;
    };
    for k in 0..b.len() {
        if used[k] || b[k].positive != first.positive || b[k].atom.pred != first.atom.pred || b[k].atom.args.len() != first.atom.args.len() {
            continue;
        }
        let (mut f, mut g) = (fwd.clone(), bwd.clone());
        if first.atom.args.iter().zip(&b[k].atom.args).all(|(x, y)| match_vars(x, y, &mut f, &mut g)) {
            used[k] = true;
            if bijective(rest, b, used, &f, &g) {
                return true;
            }
            used[k] = false;
        }
    }
    false
}

/// Literal sets equal up to a bijective renaming of variables.
pub fn same_clause(a: &[Literal], b: &[Literal]) -> bool {
    let a: Vec<Literal> = a.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let b: Vec<Literal> = b.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    a.len() == b.len() && bijective(&a, &b, &mut vec![false; b.len()], &BTreeMap::new(), &BTreeMap::new())
}

/// Checks that every step follows from its cited parents, that inputs are
/// clauses of `inputs`, and that the proof ends in its only empty clause.
pub fn verify_refutation(proof: &RefutationProof, inputs: &[Clause]) -> Result<(), ProofError> {
    let mut seen: BTreeMap<usize, &Clause> = BTreeMap::new();
    let mut cited = BTreeSet::new();
    let Some(last) = proof.steps.last() else {
        return fail(0, "empty proof");
    };
    for step in &proof.steps {
        let id = step.id;
        if seen.keys().next_back().is_some_and(|&prev| prev >= id) {
            return fail(id, "ids are not strictly increasing");
        }
        if step.literals.is_empty() && step.id != last.id {
            return fail(id, "empty clause before the last step");
        }
        let parent = |p: usize| seen.get(&p).copied().ok_or_else(|| ProofError { id, reason: format!("cites unknown step {p}") });
        match &step.provenance {
            Provenance::Input { name } => {
                let Some(orig) = inputs.iter().find(|c| c.id == id) else {
                    return fail(id, "no input clause with this id");
                };
                if !matches!(&orig.provenance, Provenance::Input { name: n } if n == name) {
                    return fail(id, format!("input clause does not come from `{name}`"));
                }
                if !same_clause(&orig.literals, &step.literals) {
                    return fail(id, "literals differ from the input clause");
                }
            }
            Provenance::Resolve { left, right, left_lit, right_lit, unifier } => {
                let (l, r) = (parent(*left)?, parent(*right)?);
                let right_lits: Vec<Literal> = r.literals.iter().map(prime_lit).collect();
                let (Some(a), Some(b)) = (l.literals.get(*left_lit), right_lits.get(*right_lit)) else {
                    return fail(id, "literal index out of range");
                };
                if a.positive == b.positive {
                    return fail(id, "resolved literals have the same sign");
                }
                if subst_lit(a, unifier).atom != subst_lit(b, unifier).atom {
                    return fail(id, "recorded substitution does not unify the resolved literals");
                }
                let expected: Vec<Literal> = l
                    .literals
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k != left_lit)
                    .map(|(_, x)| x)
                    .chain(right_lits.iter().enumerate().filter(|(k, _)| k != right_lit).map(|(_, x)| x))
                    .map(|x| subst_lit(x, unifier))
                    .collect();
                if !same_clause(&expected, &step.literals) {
                    return fail(id, "conclusion is not the resolvent");
                }
                cited.extend([*left, *right]);
            }
            Provenance::Factor { parent: p, first, second, unifier } => {
                let c = parent(*p)?;
                let (Some(a), Some(b)) = (c.literals.get(*first), c.literals.get(*second)) else {
                    return fail(id, "literal index out of range");
                };
                if first == second || subst_lit(a, unifier) != subst_lit(b, unifier) {
                    return fail(id, "recorded substitution does not merge the factored literals");
                }
                let expected: Vec<Literal> = c.literals.iter().map(|x| subst_lit(x, unifier)).collect();
                if !same_clause(&expected, &step.literals) {
                    return fail(id, "conclusion is not the factor");
                }
                cited.insert(*p);
            }
        }
        seen.insert(id, step);
    }
    if !last.literals.is_empty() {
        return fail(last.id, "proof does not end in the empty clause");
    }
    if let Some(orphan) = proof.steps.iter().find(|c| c.id != last.id && !cited.contains(&c.id)) {
        return fail(orphan.id, "step is not used by the refutation");
    }
    Ok(())
}
