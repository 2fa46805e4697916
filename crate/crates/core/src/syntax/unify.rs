use std::fmt;

use thiserror::Error;

use super::formula::Atom;
use super::subst::Substitution;
use super::term::Term;

/// Why two terms have no unifier. `path` lists argument positions from the
/// root of the left-hand side down to the offending subterm.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("symbol clash at {}: {left} vs {right}", Path(path))]
    Clash { path: Vec<usize>, left: Term, right: Term },
    #[error("occurs check at {}: {var} occurs in {term}", Path(path))]
    Occurs { path: Vec<usize>, var: String, term: Term },
    #[error("predicate clash: {left} vs {right}")]
    Predicate { left: String, right: String },
}

struct Path<'a>(&'a [usize]);

impl fmt::Display for Path<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

/// Robinson unification with occurs check. The result is an idempotent
/// most general unifier.
pub fn unify(a: &Term, b: &Term) -> Result<Substitution, UnifyError> {
    let mut s = Substitution::new();
    unify_into(a, b, &mut s, &mut Vec::new())?;
    Ok(s)
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Result<Substitution, UnifyError> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return Err(UnifyError::Predicate { left: a.pred.clone(), right: b.pred.clone() });
    }
    let mut s = Substitution::new();
    unify_args(&a.args, &b.args, &mut s, &mut Vec::new())?;
    Ok(s)
}

/// Extends `s` to a unifier of `a` and `b`, keeping it idempotent.
pub fn unify_atoms_with(a: &Atom, b: &Atom, s: &mut Substitution) -> Result<(), UnifyError> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return Err(UnifyError::Predicate { left: a.pred.clone(), right: b.pred.clone() });
    }
    unify_args(&a.args, &b.args, s, &mut Vec::new())
}

fn unify_args(xs: &[Term], ys: &[Term], s: &mut Substitution, path: &mut Vec<usize>) -> Result<(), UnifyError> {
    for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
        path.push(i);
        unify_into(x, y, s, path)?;
        path.pop();
    }
    Ok(())
}

fn unify_into(a: &Term, b: &Term, s: &mut Substitution, path: &mut Vec<usize>) -> Result<(), UnifyError> {
    let a = s.apply_term(a);
    let b = s.apply_term(b);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => Ok(()),
        (Term::Var(x), t) | (t, Term::Var(x)) => bind(x, t, s, path),
        (Term::Const(c), Term::Const(d)) if c == d => Ok(()),
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => unify_args(xs, ys, s, path),
        _ => Err(UnifyError::Clash { path: path.clone(), left: a.clone(), right: b.clone() }),
    }
}

fn bind(x: &str, t: &Term, s: &mut Substitution, path: &[usize]) -> Result<(), UnifyError> {
    if t.contains_var(x) {
        return Err(UnifyError::Occurs { path: path.to_vec(), var: x.into(), term: t.clone() });
    }
    let single = Substitution::single(x, t.clone());
    let updated: Substitution = s.iter().map(|(k, v)| (k.clone(), single.apply_term(v))).collect();
    *s = updated;
    s.insert(x, t.clone());
    Ok(())
}
