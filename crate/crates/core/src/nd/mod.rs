//! Intuitionistic natural deduction: a checker for hand-written proof
//! scripts. There is no rule for double-negation elimination or excluded
//! middle, so accepted scripts are constructive.

mod check;
mod script;
mod transform;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Substitution};

pub use check::{check_script, check_scripts, CheckFailure, CheckReport, Lemma, Reason};
pub use script::{parse_script, ScriptError};
pub use transform::{expand_axiom_instances, mutations, Mutation, MutationKind};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "rule", content = "name")]
pub enum NdRule {
    Hypothesis,
    /// Named axiom or lemma with its outer universals instantiated
    /// simultaneously.
    AxiomInstance(String),
    /// premises: implication, antecedent
    ImpElim,
    ImpIntro,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft,
    OrIntroRight,
    /// premises: disjunction, left case, right case; discharges one
    /// hypothesis per case
    OrElim,
    /// premises: A, ~A
    NegElim,
    ExFalso,
    ForallIntro,
    ForallElim,
}

impl NdRule {
    pub fn name(&self) -> &'static str {
        match self {
            NdRule::Hypothesis => "Hypothesis",
            NdRule::AxiomInstance(_) => "AxiomInstance",
            NdRule::ImpElim => "ImpElim",
            NdRule::ImpIntro => "ImpIntro",
            NdRule::AndIntro => "AndIntro",
            NdRule::AndElimLeft => "AndElimLeft",
            NdRule::AndElimRight => "AndElimRight",
            NdRule::OrIntroLeft => "OrIntroLeft",
            NdRule::OrIntroRight => "OrIntroRight",
            NdRule::OrElim => "OrElim",
            NdRule::NegElim => "NegElim",
            NdRule::ExFalso => "ExFalso",
            NdRule::ForallIntro => "ForallIntro",
            NdRule::ForallElim => "ForallElim",
        }
    }

    pub fn from_name(name: &str, arg: Option<&str>) -> Option<NdRule> {
        Some(match (name, arg) {
            ("AxiomInstance", Some(a)) => NdRule::AxiomInstance(a.to_string()),
            (_, Some(_)) => return None,
            ("Hypothesis", _) => NdRule::Hypothesis,
            ("ImpElim", _) => NdRule::ImpElim,
            ("ImpIntro", _) => NdRule::ImpIntro,
            ("AndIntro", _) => NdRule::AndIntro,
            ("AndElimLeft", _) => NdRule::AndElimLeft,
            ("AndElimRight", _) => NdRule::AndElimRight,
            ("OrIntroLeft", _) => NdRule::OrIntroLeft,
            ("OrIntroRight", _) => NdRule::OrIntroRight,
            ("OrElim", _) => NdRule::OrElim,
            ("NegElim", _) => NdRule::NegElim,
            ("ExFalso", _) => NdRule::ExFalso,
            ("ForallIntro", _) => NdRule::ForallIntro,
            ("ForallElim", _) => NdRule::ForallElim,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NdStep {
    pub id: usize,
    pub formula: Formula,
    pub rule: NdRule,
    pub premises: Vec<usize>,
    pub inst: Substitution,
    pub discharge: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NdScript {
    pub name: String,
    /// Problem whose axioms the script may cite.
    pub problem: String,
    /// Previously checked scripts citable through `AxiomInstance`.
    pub uses: Vec<String>,
    pub goal: Formula,
    pub steps: Vec<NdStep>,
}

impl NdScript {
    /// Axioms cited directly by `AxiomInstance` steps (lemmas excluded).
    pub fn cited_axioms(&self) -> BTreeSet<String> {
        self.cited().filter(|n| !self.uses.contains(n)).collect()
    }

    pub fn cited_lemmas(&self) -> BTreeSet<String> {
        self.cited().filter(|n| self.uses.contains(n)).collect()
    }

    fn cited(&self) -> impl Iterator<Item = String> + '_ {
        self.steps.iter().filter_map(|s| match &s.rule {
            NdRule::AxiomInstance(n) => Some(n.clone()),
            _ => None,
        })
    }
}

/// Axioms a script rests on. With `transitive`, lemma citations are
/// replaced by the axioms the lemma itself rests on.
pub fn used_axioms(s: &NdScript, lemmas: &BTreeMap<String, Lemma>, transitive: bool) -> BTreeSet<String> {
    let mut out = s.cited_axioms();
    if transitive {
        for l in s.cited_lemmas() {
            if let Some(lemma) = lemmas.get(&l) {
                out.extend(lemma.used_axioms.iter().cloned());
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("lemma dependencies form a cycle through {0:?}")]
    Cycle(Vec<String>),
    #[error("script `{script}` uses unknown script `{lemma}`")]
    UnknownLemma { script: String, lemma: String },
    #[error("duplicate script name `{0}`")]
    Duplicate(String),
}
