use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::{Atom, Formula};
use super::term::Term;

/// Finite map from variable names to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution(BTreeMap<String, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn single(var: impl Into<String>, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(var, t);
        s
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) -> Option<Term> {
        self.0.insert(var.into(), t)
    }

    pub fn remove(&mut self, var: &str) -> Option<Term> {
        self.0.remove(var)
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.0.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| self.apply_term(t)).collect() }
    }

    /// Capture-avoiding application: a binder whose name occurs in a
    /// substituted term is renamed by appending primes.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        if self.is_empty() {
            return f.clone();
        }
        match f {
            Formula::Atom(a) => Formula::Atom(self.apply_atom(a)),
            Formula::False => Formula::False,
            Formula::And(a, b) => Formula::and(self.apply_formula(a), self.apply_formula(b)),
            Formula::Or(a, b) => Formula::or(self.apply_formula(a), self.apply_formula(b)),
            Formula::Imp(a, b) => Formula::imp(self.apply_formula(a), self.apply_formula(b)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inner = self.clone();
                inner.remove(v);
                let body_free = body.free_vars();
                inner.0.retain(|k, _| body_free.contains(k));
                let mut range_vars = BTreeSet::new();
                for t in inner.0.values() {
                    t.collect_vars(&mut range_vars);
                }
                let binder = if range_vars.contains(v) {
                    let mut fresh = format!("{v}'");
                    while range_vars.contains(&fresh) || body_free.contains(&fresh) {
                        fresh.push('\'');
                    }
                    inner.insert(v.clone(), Term::Var(fresh.clone()));
                    fresh
                } else {
                    v.clone()
                };
                let body = inner.apply_formula(body);
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(binder, body)
                } else {
                    Formula::exists(binder, body)
                }
            }
        }
    }

    /// `self` followed by `other`: applying the result equals applying
    /// `self` and then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<String, Term> = self.0.iter().map(|(k, t)| (k.clone(), other.apply_term(t))).collect();
        for (k, t) in &other.0 {
            out.entry(k.clone()).or_insert_with(|| t.clone());
        }
        out.retain(|k, t| *t != Term::Var(k.clone()));
        Substitution(out)
    }

    /// No range term mentions a variable of the domain.
    pub fn is_idempotent(&self) -> bool {
        self.0.values().all(|t| self.0.keys().all(|k| !t.contains_var(k)))
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:={t}")?;
        }
        f.write_str("}")
    }
}
