//! Binary resolution, factoring, subsumption.

use thiserror::Error;

use super::clause::{Clause, Literal, Provenance};
use crate::syntax::{unify_atoms, Term, UnifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("literal index out of range")]
    BadIndex,
    #[error("literals do not have opposite signs")]
    SameSign,
    #[error(transparent)]
    NotUnifiable(#[from] UnifyError),
}

/// Literals and provenance of a freshly inferred clause, before an id is
/// assigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inferred {
    pub literals: Vec<Literal>,
    pub provenance: Provenance,
}

/// Appends a prime to every variable; the right-hand parent of a
/// resolution step is renamed this way.
pub fn prime_variables(literals: &[Literal]) -> Vec<Literal> {
    literals
        .iter()
        .map(|l| Literal { positive: l.positive, atom: l.atom.map_vars(&mut |v| format!("{v}'")) })
        .collect()
}

/// Resolves literal `i` of `left` against literal `j` of `right`.
pub fn resolve(left: &Clause, right: &Clause, i: usize, j: usize) -> Result<Inferred, InferenceError> {
    let right_lits = prime_variables(&right.literals);
    let (a, b) = match (left.literals.get(i), right_lits.get(j)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(InferenceError::BadIndex),
    };
    if a.positive == b.positive {
        return Err(InferenceError::SameSign);
    }
    let unifier = unify_atoms(&a.atom, &b.atom)?;
    let literals = left
        .literals
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, l)| l)
        .chain(right_lits.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l))
        .map(|l| l.apply(&unifier))
        .collect();
    Ok(Inferred {
        literals,
        provenance: Provenance::Resolve { left: left.id, right: right.id, left_lit: i, right_lit: j, unifier },
    })
}

/// Every resolvent of `left` with `right` over all complementary literal pairs.
pub fn all_resolvents(left: &Clause, right: &Clause) -> Vec<Inferred> {
    let mut out = Vec::new();
    for (i, a) in left.literals.iter().enumerate() {
        for (j, b) in right.literals.iter().enumerate() {
            if a.positive != b.positive && a.atom.pred == b.atom.pred {
                if let Ok(r) = resolve(left, right, i, j) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// All binary factors: one per unifiable pair of same-sign literals.
pub fn factor(c: &Clause) -> Vec<Inferred> {
    let mut out = Vec::new();
    for i in 0..c.literals.len() {
        for j in i + 1..c.literals.len() {
            let (a, b) = (&c.literals[i], &c.literals[j]);
            if a.positive != b.positive || a.atom.pred != b.atom.pred {
                continue;
            }
            if let Ok(unifier) = unify_atoms(&a.atom, &b.atom) {
                let literals = c.literals.iter().map(|l| l.apply(&unifier)).collect();
                out.push(Inferred { literals, provenance: Provenance::Factor { parent: c.id, first: i, second: j, unifier } });
            }
        }
    }
    out
}

type Bindings<'a> = Vec<(&'a str, &'a Term)>;

fn match_term<'a>(pattern: &'a Term, target: &'a Term, s: &mut Bindings<'a>) -> bool {
    match (pattern, target) {
        (Term::Var(x), _) => match s.iter().find(|(v, _)| v == x) {
            Some((_, bound)) => *bound == target,
            None => {
                s.push((x, target));
                true
            }
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, s))
        }
        _ => false,
    }
}

fn match_literal<'a>(pattern: &'a Literal, target: &'a Literal, s: &mut Bindings<'a>) -> bool {
    pattern.positive == target.positive
        && pattern.atom.pred == target.atom.pred
        && pattern.atom.args.len() == target.atom.args.len()
        && pattern.atom.args.iter().zip(&target.atom.args).all(|(p, t)| match_term(p, t, s))
}

fn subsumes_from<'a>(general: &'a [Literal], specific: &'a [Literal], s: &mut Bindings<'a>) -> bool {
    let Some((first, rest)) = general.split_first() else {
        return true;
    };
    let mark = s.len();
    for target in specific {
        if match_literal(first, target, s) && subsumes_from(rest, specific, s) {
            return true;
        }
        s.truncate(mark);
    }
    false
}

/// True iff some substitution maps `general`'s literals into a subset of
/// `specific`'s. Variables of `specific` are treated as rigid. Only clauses
/// no longer than `specific` are considered, which keeps the deletion
/// compatible with factoring.
pub fn subsumes(general: &Clause, specific: &Clause) -> bool {
    subsumes_literals(&general.literals, &specific.literals)
}

pub fn subsumes_literals(general: &[Literal], specific: &[Literal]) -> bool {
    if general.len() > specific.len() {
        return false;
    }
    let positives = |c: &[Literal]| c.iter().filter(|l| l.positive).count();
    let (gp, sp) = (positives(general), positives(specific));
    if gp > sp || general.len() - gp > specific.len() - sp {
        return false;
    }
    // each literal must match something on its own before trying them together
    let mut scratch = Vec::new();
    let independent = general.iter().all(|g| {
        specific.iter().any(|t| {
            scratch.clear();
            match_literal(g, t, &mut scratch)
        })
    });
    independent && subsumes_from(general, specific, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::clause::normalize;
    use crate::syntax::Atom;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn c(x: &str) -> Term {
        Term::constant(x)
    }
    fn rev(t: Term) -> Term {
        Term::rev(t)
    }
    fn u(a: Term, b: Term) -> Atom {
        Atom::undir(a, b)
    }
    fn clause(id: usize, lits: Vec<Literal>) -> Clause {
        Clause::new(id, lits, Provenance::Input { name: "t".into() }, 0)
    }
    fn same_up_to_renaming(a: &[Literal], b: &[Literal]) -> bool {
        normalize(a.to_vec()) == normalize(b.to_vec())
    }

    fn i6() -> Clause {
        clause(0, vec![Literal::neg(u(v("L"), v("M"))), Literal::pos(u(v("L"), v("N"))), Literal::pos(u(v("M"), v("N")))])
    }

    #[test]
    fn resolve_i6_with_unit() {
        let unit = clause(1, vec![Literal::pos(u(c("c0"), rev(c("c1"))))]);
        let i6 = i6();
        let neg = i6.literals.iter().position(|l| !l.positive).unwrap();
        let r = resolve(&i6, &unit, neg, 0).unwrap();
        let expected = vec![Literal::pos(u(c("c0"), v("N"))), Literal::pos(u(rev(c("c1")), v("N")))];
        assert!(same_up_to_renaming(&r.literals, &expected), "{:?}", r.literals);
    }

    #[test]
    fn resolve_clash_and_sibling_success() {
        let goal = clause(2, vec![Literal::neg(u(c("c1"), rev(c("c0"))))]);
        let derived = clause(3, vec![Literal::pos(u(c("c0"), v("N"))), Literal::pos(u(rev(c("c1")), v("N")))]);
        // neither literal unifies with Undir(c1, rev(c0)): c0/c1 and rev(c1)/c1 clash
        for j in 0..derived.len() {
            assert!(matches!(resolve(&goal, &derived, 0, j), Err(InferenceError::NotUnifiable(UnifyError::Clash { .. }))));
        }
        assert!(all_resolvents(&goal, &derived).is_empty());
        // against ~Undir(c0, rev(c0)) only the first literal resolves
        let other = clause(4, vec![Literal::neg(u(c("c0"), rev(c("c0"))))]);
        let rs = all_resolvents(&other, &derived);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].literals, vec![Literal::pos(u(rev(c("c1")), rev(c("c0"))))]);
    }

    #[test]
    fn resolving_two_positive_literals_fails() {
        let a = clause(0, vec![Literal::pos(u(v("X"), v("Y")))]);
        let b = clause(1, vec![Literal::pos(u(v("X"), v("X")))]);
        assert_eq!(resolve(&a, &b, 0, 0), Err(InferenceError::SameSign));
        assert_eq!(resolve(&a, &b, 0, 5), Err(InferenceError::BadIndex));
    }

    #[test]
    fn factor_merges_unifiable_literals() {
        let cl = clause(0, vec![Literal::pos(u(v("L"), v("N"))), Literal::pos(u(v("M"), v("N")))]);
        let fs = factor(&cl);
        assert_eq!(fs.len(), 1);
        assert!(same_up_to_renaming(&fs[0].literals, &[Literal::pos(u(v("M"), v("N")))]));
    }

    #[test]
    fn unit_has_no_factors() {
        assert!(factor(&clause(0, vec![Literal::pos(u(v("L"), v("L")))])).is_empty());
    }

    #[test]
    fn factor_blocked_by_occurs_check() {
        // Undir(L,rev(L)) vs Undir(rev(M),M): L := rev(M) forces M = rev(rev(M))
        let cl = clause(0, vec![Literal::pos(u(v("L"), rev(v("L")))), Literal::pos(u(rev(v("M")), v("M")))]);
        let oracle = unify_atoms(&u(v("L"), rev(v("L"))), &u(rev(v("M")), v("M")));
        assert!(matches!(oracle, Err(UnifyError::Occurs { .. })));
        assert!(factor(&cl).is_empty());
    }

    #[test]
    fn subsumption_examples() {
        let general = clause(0, vec![Literal::pos(u(v("L"), v("N")))]);
        let specific = clause(1, vec![Literal::pos(u(c("c0"), v("N"))), Literal::pos(u(rev(c("c1")), v("N")))]);
        assert!(subsumes(&general, &specific));
        assert!(!subsumes(&specific, &general));
        let other_pred = clause(2, vec![Literal::pos(Atom::new("DiLn", vec![v("X"), v("Y")]))]);
        assert!(!subsumes(&other_pred, &specific));
        assert!(!subsumes(&specific, &other_pred));
        let diag = clause(3, vec![Literal::pos(u(v("L"), v("L")))]);
        let ground = clause(4, vec![Literal::pos(u(c("c0"), c("c1")))]);
        assert!(!subsumes(&diag, &ground));
    }

    #[test]
    fn subsumption_treats_target_variables_as_rigid() {
        let general = clause(0, vec![Literal::pos(u(v("X0"), c("a")))]);
        let specific = clause(1, vec![Literal::pos(u(v("X0"), v("X0")))]);
        assert!(!subsumes(&general, &specific));
    }
}
