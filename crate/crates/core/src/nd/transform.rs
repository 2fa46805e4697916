//! Script rewrites: unfolding axiom instances into `ForallElim` chains, and
//! the mutation catalog used to test that the checker is not lenient.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{NdRule, NdScript, NdStep};
use crate::syntax::{Formula, Substitution, Term};

/// Replaces each `AxiomInstance` that instantiates binders by the bare
/// axiom followed by one `ForallElim` per binder, renumbering steps from 1.
/// `lookup` gives the formula behind an axiom or lemma name; instances whose
/// name it does not know are left alone.
pub fn expand_axiom_instances(script: &NdScript, lookup: impl Fn(&str) -> Option<Formula>) -> NdScript {
    let mut steps = Vec::new();
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    let remap = |ids: &[usize], renumber: &BTreeMap<usize, usize>| ids.iter().map(|i| *renumber.get(i).unwrap_or(i)).collect::<Vec<_>>();
    for s in &script.steps {
        let base = match &s.rule {
            NdRule::AxiomInstance(name) if !s.inst.is_empty() => lookup(name),
            _ => None,
        };
        let Some(mut current) = base else {
            let id = steps.len() + 1;
            steps.push(NdStep {
                id,
                premises: remap(&s.premises, &renumber),
                discharge: remap(&s.discharge, &renumber),
                ..s.clone()
            });
            renumber.insert(s.id, id);
            continue;
        };
        let binders: Vec<String> = current.universal_prefix().0.into_iter().take(s.inst.len()).map(String::from).collect();
        let mut prev = steps.len() + 1;
        steps.push(NdStep {
            id: prev,
            formula: current.clone(),
            rule: s.rule.clone(),
            premises: Vec::new(),
            inst: Substitution::new(),
            discharge: Vec::new(),
        });
        for original in binders {
            let Formula::Forall(bound, body) = &current else { break };
            let Some(value) = s.inst.get(&original) else { break };
            let inst = Substitution::single(bound.clone(), value.clone());
            let next = inst.apply_formula(body);
            let id = steps.len() + 1;
            steps.push(NdStep { id, formula: next.clone(), rule: NdRule::ForallElim, premises: vec![prev], inst, discharge: Vec::new() });
            prev = id;
            current = next;
        }
        // the script's own rendering of the instance is kept for the last step
        steps.last_mut().expect("just pushed").formula = s.formula.clone();
        renumber.insert(s.id, prev);
    }
    NdScript { steps, ..script.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    DropPremise,
    SwapPremises,
    ChangeBinding,
    AlterConclusion,
    DropDischarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub kind: MutationKind,
    pub step: usize,
    pub script: NdScript,
}

/// Every single-step mutation from the fixed catalog: drop the last
/// premise, swap the first two premises when they cite different formulas,
/// wrap the first instantiation value in `rev`, replace the conclusion `F`
/// by `F & F`, drop the last discharged hypothesis.
pub fn mutations(script: &NdScript) -> Vec<Mutation> {
    let formula_of = |id: usize| script.steps.iter().find(|s| s.id == id).map(|s| &s.formula);
    let mut out = Vec::new();
    for (k, s) in script.steps.iter().enumerate() {
        let mut push = |kind, edit: &dyn Fn(&mut NdStep)| {
            let mut m = script.clone();
            edit(&mut m.steps[k]);
            out.push(Mutation { kind, step: s.id, script: m });
        };
        if !s.premises.is_empty() {
            push(MutationKind::DropPremise, &|st| {
                st.premises.pop();
            });
        }
        if s.premises.len() >= 2 && formula_of(s.premises[0]) != formula_of(s.premises[1]) {
            push(MutationKind::SwapPremises, &|st| st.premises.swap(0, 1));
        }
        if let Some((var, t)) = s.inst.iter().next() {
            let (var, t) = (var.clone(), t.clone());
            push(MutationKind::ChangeBinding, &move |st| {
                st.inst.insert(var.clone(), Term::rev(t.clone()));
            });
        }
        push(MutationKind::AlterConclusion, &|st| st.formula = Formula::and(st.formula.clone(), st.formula.clone()));
        if !s.discharge.is_empty() {
            push(MutationKind::DropDischarge, &|st| {
                st.discharge.pop();
            });
        }
    }
    out
}
