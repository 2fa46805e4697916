//! Slot-indexed evaluator used by the enumerator. The reference evaluator
//! in `eval` stays the semantic yardstick; this one trades clarity for not
//! allocating per quantifier step.

use super::ModelError;
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone)]
enum CTerm {
    Slot(usize),
    /// Index into the extra-cell vector.
    Cell(usize),
    Rev(Box<CTerm>),
    Fun { offset: usize, args: Vec<CTerm> },
}

#[derive(Debug, Clone)]
enum CForm {
    Undir(CTerm, CTerm),
    False,
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Imp(Box<CForm>, Box<CForm>),
    Forall(usize, Box<CForm>),
    Exists(usize, Box<CForm>),
}

/// Constants and non-`rev` function symbols whose values are enumerated as
/// "extra cells": constants first (in name order), then each function's
/// table (in name order, entries in argument order).
#[derive(Debug, Clone, Default)]
pub(crate) struct ExtraSymbols {
    pub consts: Vec<String>,
    pub funs: Vec<(String, usize)>,
}

impl ExtraSymbols {
    pub fn collect<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut consts = std::collections::BTreeSet::new();
        let mut funs = std::collections::BTreeSet::new();
        for f in formulas {
            consts.extend(f.constants());
            funs.extend(f.functions().into_iter().filter(|(name, arity)| !(name == "rev" && *arity == 1)));
        }
        ExtraSymbols { consts: consts.into_iter().collect(), funs: funs.into_iter().collect() }
    }

    pub fn cell_count(&self, n: usize) -> Option<usize> {
        self.funs.iter().try_fold(self.consts.len(), |acc, (_, a)| acc.checked_add(n.checked_pow(*a as u32)?))
    }

    fn fun_offset(&self, name: &str, arity: usize, n: usize) -> Option<usize> {
        let mut offset = self.consts.len();
        for (f, a) in &self.funs {
            if f == name && *a == arity {
                return Some(offset);
            }
            offset += n.pow(*a as u32);
        }
        None
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    form: CForm,
    slots: usize,
    pub cost: usize,
    pub uses_extra: bool,
}

/// Tables for one candidate interpretation.
pub(crate) struct Tables<'a> {
    pub n: usize,
    pub rev: &'a [usize],
    pub undir: &'a [bool],
    pub extra: &'a [usize],
}

struct Compiler<'a> {
    symbols: &'a ExtraSymbols,
    n: usize,
    scope: Vec<String>,
    max_depth: usize,
    uses_extra: bool,
}

impl Compiler<'_> {
    fn term(&mut self, t: &Term) -> Result<CTerm, ModelError> {
        Ok(match t {
            Term::Var(x) => match self.scope.iter().rposition(|v| v == x) {
                Some(slot) => CTerm::Slot(slot),
                None => return Err(ModelError::FreeVariable(x.clone())),
            },
            Term::Const(c) => {
                self.uses_extra = true;
                let i = self.symbols.consts.iter().position(|k| k == c).ok_or_else(|| ModelError::UnmappedConstant(c.clone()))?;
                CTerm::Cell(i)
            }
            Term::App(f, args) if f == "rev" && args.len() == 1 => CTerm::Rev(Box::new(self.term(&args[0])?)),
            Term::App(f, args) => {
                self.uses_extra = true;
                let offset = self
                    .symbols
                    .fun_offset(f, args.len(), self.n)
                    .ok_or_else(|| ModelError::Uninterpreted(format!("{f}/{}", args.len())))?;
                CTerm::Fun { offset, args: args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()? }
            }
        })
    }

    fn form(&mut self, f: &Formula) -> Result<CForm, ModelError> {
        Ok(match f {
            Formula::Atom(a) if a.pred == "Undir" && a.args.len() == 2 => CForm::Undir(self.term(&a.args[0])?, self.term(&a.args[1])?),
            Formula::Atom(a) => return Err(ModelError::Uninterpreted(format!("{}/{}", a.pred, a.args.len()))),
            Formula::False => CForm::False,
            Formula::And(a, b) => CForm::And(Box::new(self.form(a)?), Box::new(self.form(b)?)),
            Formula::Or(a, b) => CForm::Or(Box::new(self.form(a)?), Box::new(self.form(b)?)),
            Formula::Imp(a, b) => CForm::Imp(Box::new(self.form(a)?), Box::new(self.form(b)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.scope.len();
                self.scope.push(v.clone());
                self.max_depth = self.max_depth.max(self.scope.len());
                let body = self.form(body);
                self.scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Forall(..)) {
                    CForm::Forall(slot, body)
                } else {
                    CForm::Exists(slot, body)
                }
            }
        })
    }
}

impl Compiled {
    /// Compiles a closed formula for domain size `n`.
    pub fn new(f: &Formula, symbols: &ExtraSymbols, n: usize) -> Result<Self, ModelError> {
        let mut c = Compiler { symbols, n, scope: Vec::new(), max_depth: 0, uses_extra: false };
        let form = c.form(f)?;
        Ok(Compiled { form, slots: c.max_depth, cost: f.size(), uses_extra: c.uses_extra })
    }

    pub fn eval(&self, t: &Tables<'_>) -> bool {
        let mut env = [0usize; 16];
        if self.slots <= env.len() {
            eval_form(&self.form, t, &mut env)
        } else {
            let mut env = vec![0; self.slots];
            eval_form(&self.form, t, &mut env)
        }
    }
}

fn eval_term(term: &CTerm, t: &Tables<'_>, env: &[usize]) -> usize {
    match term {
        CTerm::Slot(i) => env[*i],
        CTerm::Cell(i) => t.extra[*i],
        CTerm::Rev(a) => t.rev[eval_term(a, t, env)],
        CTerm::Fun { offset, args } => {
            let index = args.iter().fold(0, |acc, a| acc * t.n + eval_term(a, t, env));
            t.extra[offset + index]
        }
    }
}

fn eval_form(f: &CForm, t: &Tables<'_>, env: &mut [usize]) -> bool {
    match f {
        CForm::Undir(a, b) => t.undir[eval_term(a, t, env) * t.n + eval_term(b, t, env)],
        CForm::False => false,
        CForm::And(a, b) => eval_form(a, t, env) && eval_form(b, t, env),
        CForm::Or(a, b) => eval_form(a, t, env) || eval_form(b, t, env),
        CForm::Imp(a, b) => !eval_form(a, t, env) || eval_form(b, t, env),
        CForm::Forall(slot, body) => (0..t.n).all(|x| {
            env[*slot] = x;
            eval_form(body, t, env)
        }),
        CForm::Exists(slot, body) => (0..t.n).any(|x| {
            env[*slot] = x;
            eval_form(body, t, env)
        }),
    }
}
