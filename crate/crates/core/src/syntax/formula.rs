use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::term::Term;

/// A predicate applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    /// `Undir(a, b)`
    pub fn undir(a: Term, b: Term) -> Self {
        Atom::new("Undir", vec![a, b])
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> String) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.map_vars(f)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// First-order formula. Negation is `A -> false`; `<->` exists only in the
/// surface syntax and is desugared by the parser.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(Atom),
    False,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn undir(a: Term, b: Term) -> Self {
        Formula::Atom(Atom::undir(a, b))
    }

    pub fn not(a: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(Formula::False))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Universally closes over `vars`, outermost first.
    pub fn forall_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// The `A` of `A -> false`, if this is a negation.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::False => Some(a),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::False => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::False => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.visit_atoms(f),
        }
    }

    /// Occurrences of predicate `pred`.
    pub fn count_predicate(&self, pred: &str) -> usize {
        self.atoms().iter().filter(|a| a.pred == pred).count()
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_constants(&mut out)));
        out
    }

    /// Function symbols with their arities.
    pub fn functions(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_functions(&mut out)));
        out
    }

    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert((a.pred.clone(), a.args.len()));
        });
        out
    }

    /// Symbol count, used to order cheap checks first.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => a.size(),
            Formula::False => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }

    /// Splits the outermost run of universal quantifiers off the body.
    pub fn universal_prefix(&self) -> (Vec<&str>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(v, body) = cur {
            vars.push(v.as_str());
            cur = body;
        }
        (vars, cur)
    }

    /// Renames bound variables canonically (`_0`, `_1`, ... in binder
    /// order), giving a representative of the alpha-equivalence class.
    pub fn alpha_canonical(&self) -> Formula {
        fn go(f: &Formula, env: &mut Vec<(String, String)>, next: &mut usize) -> Formula {
            match f {
                Formula::Atom(a) => Formula::Atom(a.map_vars(&mut |v| {
                    env.iter().rev().find(|(from, _)| from == v).map(|(_, to)| to.clone()).unwrap_or_else(|| v.to_string())
                })),
                Formula::False => Formula::False,
                Formula::And(a, b) => Formula::and(go(a, env, next), go(b, env, next)),
                Formula::Or(a, b) => Formula::or(go(a, env, next), go(b, env, next)),
                Formula::Imp(a, b) => Formula::imp(go(a, env, next), go(b, env, next)),
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    let fresh = format!("_{next}");
                    *next += 1;
                    env.push((v.clone(), fresh.clone()));
                    let body = go(body, env, next);
                    env.pop();
                    if matches!(f, Formula::Forall(..)) {
                        Formula::forall(fresh, body)
                    } else {
                        Formula::exists(fresh, body)
                    }
                }
            }
        }
        go(self, &mut Vec::new(), &mut 0)
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.alpha_canonical() == other.alpha_canonical()
    }
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

// Printer precedence: higher binds tighter.
const PREC_QUANT: u8 = 0;
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::False => PREC_UNARY,
        Formula::Imp(_, b) if **b == Formula::False => PREC_UNARY,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Forall(..) | Formula::Exists(..) => PREC_QUANT,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, min: u8) -> fmt::Result {
    if precedence(child) < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::False => f.write_str("false"),
            Formula::Imp(a, b) if **b == Formula::False => {
                f.write_str("~")?;
                write_child(f, a, PREC_UNARY)
            }
            Formula::Imp(a, b) => {
                write_child(f, a, PREC_OR)?;
                f.write_str(" -> ")?;
                write_child(f, b, PREC_IMP)
            }
            Formula::Or(a, b) => {
                // conjunctions under a disjunction are bracketed for legibility
                let left = if matches!(**a, Formula::And(..)) { PREC_UNARY } else { PREC_OR };
                let right = if matches!(**b, Formula::And(..)) { PREC_UNARY } else { PREC_AND };
                write_child(f, a, left)?;
                f.write_str(" | ")?;
                write_child(f, b, right)
            }
            Formula::And(a, b) => {
                write_child(f, a, PREC_AND)?;
                f.write_str(" & ")?;
                write_child(f, b, PREC_UNARY)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {v}. ")?;
                match precedence(body) {
                    PREC_QUANT | PREC_UNARY => write!(f, "{body}"),
                    _ => write!(f, "({body})"),
                }
            }
        }
    }
}
