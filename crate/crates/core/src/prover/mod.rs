//! Clausification and saturation-based refutation with independently
//! checkable proofs.

mod clause;
mod clausify;
mod infer;
mod proof;
mod saturate;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clause::{is_tautology, literals_to_formula, normalize, Clause, Literal, Provenance};
pub use clausify::{clausify, ClauseSet, Clausifier, ClausifyError, NEGATED_GOAL};
pub use infer::{all_resolvents, factor, prime_variables, resolve, subsumes, subsumes_literals, InferenceError, Inferred};
pub use proof::RefutationProof;
pub use saturate::{saturate, Outcome, ProverConfig, Resource, Stats};
pub use verify::{same_clause, verify_refutation, ProofError};

use crate::syntax::{expand_defs, DefinedPredicate, DefinitionError, Formula, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error(transparent)]
    Definition(#[from] DefinitionError),
    #[error(transparent)]
    Clausify(#[from] ClausifyError),
}

/// One refutation attempt: the clausified axioms and one negated sub-goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub goal: Formula,
    pub outcome: Outcome,
    pub stats: Stats,
    /// Input clauses, ids `0..`.
    pub inputs: Vec<Clause>,
    pub skolems: Vec<(String, usize)>,
}

impl Attempt {
    /// Checks the refutation, if any, against the input clauses.
    pub fn verify(&self) -> Option<Result<(), ProofError>> {
        self.outcome.proof().map(|p| verify_refutation(p, &self.inputs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Every sub-goal was refuted.
    Refuted,
    /// Some sub-goal's clause set saturated, so the goal does not follow.
    Saturated,
    ResourceOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProveReport {
    pub status: Status,
    /// Totals over all attempts.
    pub stats: Stats,
    /// One entry per sub-goal, in order; stops at the first failure.
    pub attempts: Vec<Attempt>,
}

impl ProveReport {
    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn proofs(&self) -> impl Iterator<Item = &RefutationProof> {
        self.attempts.iter().filter_map(|a| a.outcome.proof())
    }

    /// Checks every refutation against its input clauses.
    pub fn verify(&self) -> Result<(), ProofError> {
        self.attempts.iter().filter_map(Attempt::verify).collect()
    }

    /// Axioms used by any of the refutations.
    pub fn used_axioms(&self) -> std::collections::BTreeSet<String> {
        self.proofs().flat_map(|p| p.used_axioms()).collect()
    }
}

/// Splits a goal at top-level conjunctions and biconditionals, and
/// distributes an implication over a conjunctive consequent. The goal
/// follows iff every part does.
pub fn split_goal(goal: &Formula) -> Vec<Formula> {
    match goal {
        Formula::And(a, b) => split_goal(a).into_iter().chain(split_goal(b)).collect(),
        Formula::Imp(a, b) if !matches!(**b, Formula::False) => {
            let parts = split_goal(b);
            if parts.len() == 1 {
                vec![goal.clone()]
            } else {
                parts.into_iter().map(|p| Formula::imp((**a).clone(), p)).collect()
            }
        }
        _ => vec![goal.clone()],
    }
}

/// Tries to refute `axioms ∧ ¬part` for each part of the goal after
/// expanding defined predicates.
pub fn prove(
    axioms: &[(String, Formula)],
    goal: &Formula,
    sig: &Signature,
    defs: &[DefinedPredicate],
    cfg: &ProverConfig,
) -> Result<ProveReport, ProveError> {
    let axioms = axioms
        .iter()
        .map(|(n, f)| Ok((n.clone(), expand_defs(f, defs, sig)?)))
        .collect::<Result<Vec<_>, DefinitionError>>()?;
    let goal = expand_defs(goal, defs, sig)?;
    let parts = split_goal(&goal);
    let sets = parts.iter().map(|p| clausify(&axioms, p, sig)).collect::<Result<Vec<_>, _>>()?;
    let mut report = ProveReport { status: Status::Refuted, stats: Stats::default(), attempts: Vec::new() };
    for (part, set) in parts.into_iter().zip(sets) {
        let (outcome, stats, _) = saturate(&set.clauses, cfg);
        report.stats.generated += stats.generated;
        report.stats.kept += stats.kept;
        report.stats.given += stats.given;
        let status = match outcome {
            Outcome::Refutation { .. } => Status::Refuted,
            Outcome::Saturated => Status::Saturated,
            Outcome::ResourceOut { .. } => Status::ResourceOut,
        };
        report.attempts.push(Attempt { goal: part, outcome, stats, inputs: set.clauses, skolems: set.skolems });
        if status != Status::Refuted {
            report.status = status;
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
