use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Atom, Formula, Substitution, Term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn negated(&self) -> Self {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn apply(&self, s: &Substitution) -> Self {
        Literal { positive: self.positive, atom: s.apply_atom(&self.atom) }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// How a clause came about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    Input {
        name: String,
    },
    /// Binary resolution of literal `left_lit` of `left` against literal
    /// `right_lit` of `right`, after priming every variable of `right`.
    Resolve {
        left: usize,
        right: usize,
        left_lit: usize,
        right_lit: usize,
        unifier: Substitution,
    },
    Factor {
        parent: usize,
        first: usize,
        second: usize,
        unifier: Substitution,
    },
}

impl Provenance {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            Provenance::Input { .. } => Vec::new(),
            Provenance::Resolve { left, right, .. } => vec![*left, *right],
            Provenance::Factor { parent, .. } => vec![*parent],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: usize,
    pub literals: Vec<Literal>,
    pub provenance: Provenance,
    pub age: usize,
    pub weight: usize,
}

impl Clause {
    pub fn new(id: usize, literals: Vec<Literal>, provenance: Provenance, age: usize) -> Self {
        let literals = normalize(literals);
        let weight = weight(&literals);
        Clause { id, literals, provenance, age, weight }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Universal closure of the disjunction of the literals.
    pub fn to_formula(&self) -> Formula {
        literals_to_formula(&self.literals)
    }
}

pub fn literals_to_formula(literals: &[Literal]) -> Formula {
    let body = literals.iter().map(Literal::to_formula).reduce(Formula::or).unwrap_or(Formula::False);
    let mut vars = Vec::new();
    for l in literals {
        l.atom.args.iter().for_each(|t| t.vars_in_order(&mut vars));
    }
    Formula::forall_many(&vars, body)
}

pub fn weight(literals: &[Literal]) -> usize {
    literals.iter().map(|l| l.atom.size()).sum()
}

pub fn is_tautology(literals: &[Literal]) -> bool {
    literals.iter().any(|l| l.positive && literals.iter().any(|k| !k.positive && k.atom == l.atom))
}

/// Sorts, removes duplicates, and renames variables to `X0, X1, ...` in
/// order of first occurrence.
pub fn normalize(mut literals: Vec<Literal>) -> Vec<Literal> {
    literals.sort();
    literals.dedup();
    let mut literals = rename_canonical(&literals);
    literals.sort();
    literals.dedup();
    rename_canonical(&literals)
}

fn rename_canonical(literals: &[Literal]) -> Vec<Literal> {
    let mut order = Vec::new();
    for l in literals {
        l.atom.args.iter().for_each(|t| t.vars_in_order(&mut order));
    }
    let renaming: Substitution = order.iter().enumerate().map(|(i, v)| (v.clone(), Term::Var(format!("X{i}")))).collect();
    literals.iter().map(|l| l.apply(&renaming)).collect()
}

pub(crate) fn fmt_literals(literals: &[Literal]) -> String {
    if literals.is_empty() {
        return "false".into();
    }
    literals.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} ", self.id, fmt_literals(&self.literals))?;
        match &self.provenance {
            Provenance::Input { name } => write!(f, "[input:{name}] subst={{}}"),
            Provenance::Resolve { left, right, left_lit, right_lit, unifier } => {
                write!(f, "[resolve({left},{right}) lits=({left_lit},{right_lit})] subst={unifier}")
            }
            Provenance::Factor { parent, first, second, unifier } => {
                write!(f, "[factor({parent}) lits=({first},{second})] subst={unifier}")
            }
        }
    }
}
