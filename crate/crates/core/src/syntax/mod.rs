//! Terms, formulas, substitutions, unification and the concrete syntax.

mod defs;
mod formula;
mod parser;
mod signature;
mod subst;
mod term;
mod unify;

pub use defs::{expand_defs, DefinedPredicate, DefinitionError};
pub use formula::{Atom, Formula};
pub use parser::{parse_formula, parse_term, ParseError, Parser, Pos};
pub use signature::{Signature, SignatureError, SymbolKind};
pub use subst::Substitution;
pub use term::Term;
pub use unify::{unify, unify_atoms, unify_atoms_with, UnifyError};

/// Free variables of `f`.
pub fn free_vars(f: &Formula) -> std::collections::BTreeSet<String> {
    f.free_vars()
}

/// Prints `f` in the concrete syntax accepted by [`parse_formula`].
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_i8() {
        let f = parse_formula("forall l. forall m. (Undir(l,m) | Undir(l,rev(m)))").unwrap();
        assert_eq!(print_formula(&f), "forall l. forall m. (Undir(l,m) | Undir(l,rev(m)))");
    }

    #[test]
    fn prints_falsum() {
        assert_eq!(print_formula(&Formula::False), "false");
    }

    #[test]
    fn negation_resugared() {
        let f = parse_formula("forall l. ~Undir(l,l)").unwrap();
        assert_eq!(print_formula(&f), "forall l. ~Undir(l,l)");
        let g = parse_formula("~(forall x. Undir(x,x)) -> ~~Undir(a,a)").unwrap();
        assert_eq!(parse_formula(&print_formula(&g)).unwrap(), g);
    }

    #[test]
    fn free_variables() {
        let f = parse_formula("Undir(l,rev(m))").unwrap();
        assert_eq!(free_vars(&f).into_iter().collect::<Vec<_>>(), vec!["l", "m"]);
        let i6 = parse_formula("forall l. forall m. forall n. (Undir(l,m) -> Undir(l,n) | Undir(m,n))").unwrap();
        assert!(free_vars(&i6).is_empty());
        let g = parse_formula("forall l. Undir(l,m)").unwrap();
        assert_eq!(free_vars(&g).into_iter().collect::<Vec<_>>(), vec!["m"]);
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_formula("forall x. Undir(x,y)").unwrap();
        let b = parse_formula("forall z. Undir(z,y)").unwrap();
        assert_ne!(a, b);
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&parse_formula("forall z. Undir(z,z)").unwrap()));
    }
}
