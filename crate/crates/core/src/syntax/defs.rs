use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::Formula;
use super::signature::Signature;
use super::subst::Substitution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefinitionError {
    #[error("definition of `{0}` is recursive")]
    Recursive(String),
    #[error("no definition supplied for defined predicate `{0}`")]
    Unknown(String),
    #[error("body of `{name}` mentions `{var}`, which is not a parameter")]
    StrayVariable { name: String, var: String },
    #[error("`{name}` takes {expected} argument(s), applied to {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("`{0}` is defined twice or repeats a parameter")]
    Duplicate(String),
}

/// `name(params) := body`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinedPredicate {
    pub name: String,
    pub params: Vec<String>,
    pub body: Formula,
}

impl DefinedPredicate {
    pub fn new(name: impl Into<String>, params: Vec<String>, body: Formula) -> Result<Self, DefinitionError> {
        let name = name.into();
        let distinct: BTreeSet<&String> = params.iter().collect();
        if distinct.len() != params.len() {
            return Err(DefinitionError::Duplicate(name));
        }
        if let Some(var) = body.free_vars().into_iter().find(|v| !params.contains(v)) {
            return Err(DefinitionError::StrayVariable { name, var });
        }
        Ok(DefinedPredicate { name, params, body })
    }

    /// Convergence of lines: `Con(l,m) := Undir(l,m) & Undir(l,rev(m))`.
    pub fn convergence() -> Self {
        use super::term::Term;
        let (l, m) = (Term::var("l"), Term::var("m"));
        let body = Formula::and(Formula::undir(l.clone(), m.clone()), Formula::undir(l, Term::rev(m)));
        DefinedPredicate::new("Con", vec!["l".into(), "m".into()], body).expect("well-formed")
    }
}

/// Replaces every defined-predicate atom by its instantiated body, until
/// none remain. Atoms whose predicate the signature marks as defined but
/// which have no entry in `defs` are an error.
pub fn expand_defs(f: &Formula, defs: &[DefinedPredicate], sig: &Signature) -> Result<Formula, DefinitionError> {
    let table = check_acyclic(defs)?;
    expand(f, &table, sig)
}

fn check_acyclic(defs: &[DefinedPredicate]) -> Result<BTreeMap<&str, &DefinedPredicate>, DefinitionError> {
    let mut table = BTreeMap::new();
    for d in defs {
        if table.insert(d.name.as_str(), d).is_some() {
            return Err(DefinitionError::Duplicate(d.name.clone()));
        }
    }
    fn visit<'a>(
        name: &'a str,
        table: &BTreeMap<&'a str, &'a DefinedPredicate>,
        stack: &mut Vec<&'a str>,
        done: &mut BTreeSet<&'a str>,
    ) -> Result<(), DefinitionError> {
        if done.contains(name) {
            return Ok(());
        }
        if stack.contains(&name) {
            return Err(DefinitionError::Recursive(name.to_string()));
        }
        stack.push(name);
        if let Some(d) = table.get(name) {
            for a in d.body.atoms() {
                if table.contains_key(a.pred.as_str()) {
                    visit(table.get_key_value(a.pred.as_str()).unwrap().0, table, stack, done)?;
                }
            }
        }
        stack.pop();
        done.insert(name);
        Ok(())
    }
    let mut done = BTreeSet::new();
    for name in table.keys() {
        visit(name, &table, &mut Vec::new(), &mut done)?;
    }
    Ok(table)
}

fn expand(f: &Formula, table: &BTreeMap<&str, &DefinedPredicate>, sig: &Signature) -> Result<Formula, DefinitionError> {
    Ok(match f {
        Formula::Atom(a) => match table.get(a.pred.as_str()) {
            Some(d) => {
                if d.params.len() != a.args.len() {
                    return Err(DefinitionError::Arity { name: d.name.clone(), expected: d.params.len(), found: a.args.len() });
                }
                let s: Substitution = d.params.iter().cloned().zip(a.args.iter().cloned()).collect();
                expand(&s.apply_formula(&d.body), table, sig)?
            }
            None if sig.is_defined_predicate(&a.pred) => return Err(DefinitionError::Unknown(a.pred.clone())),
            None => f.clone(),
        },
        Formula::False => Formula::False,
        Formula::And(a, b) => Formula::and(expand(a, table, sig)?, expand(b, table, sig)?),
        Formula::Or(a, b) => Formula::or(expand(a, table, sig)?, expand(b, table, sig)?),
        Formula::Imp(a, b) => Formula::imp(expand(a, table, sig)?, expand(b, table, sig)?),
        Formula::Forall(v, body) => Formula::forall(v.clone(), expand(body, table, sig)?),
        Formula::Exists(v, body) => Formula::exists(v.clone(), expand(body, table, sig)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_formula;
    use crate::syntax::term::Term;

    fn geometry() -> (Signature, Vec<DefinedPredicate>) {
        (Signature::geometry(), vec![DefinedPredicate::convergence()])
    }

    #[test]
    fn convergence_expands() {
        let (sig, defs) = geometry();
        let f = parse_formula("Con(l,m)").unwrap();
        assert_eq!(expand_defs(&f, &defs, &sig).unwrap(), parse_formula("Undir(l,m) & Undir(l,rev(m))").unwrap());
    }

    #[test]
    fn convergence_form_of_i7_expands_to_undir_form() {
        let (sig, defs) = geometry();
        let con = parse_formula("forall l. forall m. forall n. (Con(l,m) -> Con(l,n) | Con(m,n))").unwrap();
        let undir = parse_formula(
            "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> \
             (Undir(l,n) & Undir(l,rev(n))) | (Undir(m,n) & Undir(m,rev(n))))",
        )
        .unwrap();
        assert_eq!(expand_defs(&con, &defs, &sig).unwrap(), undir);
    }

    #[test]
    fn con_free_formula_unchanged() {
        let (sig, defs) = geometry();
        let f = parse_formula("forall l. forall m. (Undir(l,m) | Undir(l,rev(m)))").unwrap();
        assert_eq!(expand_defs(&f, &defs, &sig).unwrap(), f);
    }

    #[test]
    fn expansion_avoids_capture() {
        let (sig, defs) = geometry();
        // Con's parameter `m` meets a binder named `m` at the call site
        let f = parse_formula("forall m. Con(m, rev(m))").unwrap();
        let expected = parse_formula("forall m. Undir(m,rev(m)) & Undir(m,rev(rev(m)))").unwrap();
        assert_eq!(expand_defs(&f, &defs, &sig).unwrap(), expected);
    }

    #[test]
    fn recursive_definition_rejected() {
        let mut sig = Signature::geometry();
        sig.add_defined("P", 1).unwrap();
        sig.add_defined("Q", 1).unwrap();
        let x = Term::var("x");
        let p = DefinedPredicate::new("P", vec!["x".into()], Formula::atom("Q", vec![x.clone()])).unwrap();
        let q = DefinedPredicate::new("Q", vec!["x".into()], Formula::atom("P", vec![x.clone()])).unwrap();
        let err = expand_defs(&Formula::atom("P", vec![x]), &[p, q], &sig).unwrap_err();
        assert!(matches!(err, DefinitionError::Recursive(_)));
    }

    #[test]
    fn missing_definition_rejected() {
        let sig = Signature::geometry();
        let f = parse_formula("Con(l,m)").unwrap();
        assert_eq!(expand_defs(&f, &[], &sig), Err(DefinitionError::Unknown("Con".into())));
    }

    #[test]
    fn stray_body_variable_rejected() {
        let body = Formula::undir(Term::var("l"), Term::var("z"));
        assert!(matches!(DefinedPredicate::new("Bad", vec!["l".into()], body), Err(DefinitionError::StrayVariable { .. })));
    }
}
