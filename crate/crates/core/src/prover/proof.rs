use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::clause::{Clause, Provenance};
use super::clausify::NEGATED_GOAL;

/// The ancestors of an empty clause, in increasing id order. The last step
/// is the empty clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationProof {
    pub steps: Vec<Clause>,
}

impl RefutationProof {
    pub(crate) fn extract(all: &[Clause], empty: usize) -> Self {
        let mut needed = BTreeSet::new();
        let mut stack = vec![empty];
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(all[id].provenance.parents());
            }
        }
        RefutationProof { steps: needed.into_iter().map(|id| all[id].clone()).collect() }
    }

    /// Names of the input formulas the refutation rests on, not counting
    /// the negated goal.
    pub fn used_axioms(&self) -> BTreeSet<String> {
        self.steps
            .iter()
            .filter_map(|c| match &c.provenance {
                Provenance::Input { name } if name != NEGATED_GOAL => Some(name.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for RefutationProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.steps {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
