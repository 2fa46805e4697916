//! Given-clause saturation.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::clause::{is_tautology, Clause, Literal};
use super::infer::{all_resolvents, factor, subsumes, Inferred};
use super::proof::RefutationProof;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverConfig {
    /// Upper bound on inferred clauses, counted before any deletion.
    pub max_generated: usize,
    pub timeout: Duration,
    /// Given clauses picked by age versus by weight.
    pub pick_ratio: (usize, usize),
    pub subsumption: bool,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig { max_generated: 50_000, timeout: Duration::from_secs(10), pick_ratio: (1, 4), subsumption: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub generated: usize,
    pub kept: usize,
    pub given: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resource {
    Clauses,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Refutation { proof: RefutationProof },
    /// No new clause can be derived and the empty clause was not reached.
    Saturated,
    ResourceOut { resource: Resource },
}

impl Outcome {
    pub fn proof(&self) -> Option<&RefutationProof> {
        match self {
            Outcome::Refutation { proof } => Some(proof),
            _ => None,
        }
    }

    pub fn is_refutation(&self) -> bool {
        self.proof().is_some()
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Refutation { .. } => "refutation",
            Outcome::Saturated => "saturated",
            Outcome::ResourceOut { .. } => "resource_out",
        }
    }
}

struct State<'a> {
    cfg: &'a ProverConfig,
    /// Every kept clause, indexed by id.
    all: Vec<Clause>,
    alive: Vec<bool>,
    active: Vec<usize>,
    by_age: BTreeSet<(usize, usize)>,
    by_weight: BTreeSet<(usize, usize)>,
    /// Literal lists kept so far; with subsumption off this still drops
    /// exact duplicates (clauses are normalized, so variants too).
    seen: HashSet<Vec<Literal>>,
    stats: Stats,
}

impl State<'_> {
    fn subsumed(&self, lits: &Clause) -> bool {
        self.cfg.subsumption
            && self
                .active
                .iter()
                .chain(self.by_age.iter().map(|(_, id)| id))
                .any(|&id| self.alive[id] && subsumes(&self.all[id], lits))
    }

    fn dequeue(&mut self, id: usize) {
        let c = &self.all[id];
        self.by_age.remove(&(c.age, id));
        self.by_weight.remove(&(c.weight, id));
    }

    fn kill(&mut self, id: usize) {
        self.alive[id] = false;
        self.dequeue(id);
    }

    /// Adds a clause to the passive set unless it is redundant. Returns the
    /// new id.
    fn keep(&mut self, c: Clause) -> Option<usize> {
        if is_tautology(&c.literals) || self.subsumed(&c) {
            return None;
        }
        if !self.cfg.subsumption && !self.seen.insert(c.literals.clone()) {
            return None;
        }
        let id = self.all.len();
        debug_assert_eq!(c.id, id);
        if self.cfg.subsumption {
            let victims: Vec<usize> = self
                .active
                .iter()
                .chain(self.by_age.iter().map(|(_, id)| id))
                .copied()
                .filter(|&k| self.alive[k] && subsumes(&c, &self.all[k]))
                .collect();
            for k in victims {
                self.kill(k);
            }
            self.active.retain(|&k| self.alive[k]);
        }
        self.by_age.insert((c.age, id));
        self.by_weight.insert((c.weight, id));
        self.all.push(c);
        self.alive.push(true);
        self.stats.kept += 1;
        Some(id)
    }

    fn pick(&mut self, turn: usize) -> Option<usize> {
        let (by_age, by_weight) = self.cfg.pick_ratio;
        let period = (by_age + by_weight).max(1);
        let queue = if turn % period < by_age { &self.by_age } else { &self.by_weight };
        let &(_, id) = queue.iter().next().or_else(|| self.by_age.iter().next())?;
        self.dequeue(id);
        Some(id)
    }
}

/// Saturates `inputs` (ids `0..inputs.len()`). Returns the outcome, the
/// statistics and every kept clause.
pub fn saturate(inputs: &[Clause], cfg: &ProverConfig) -> (Outcome, Stats, Vec<Clause>) {
    let start = Instant::now();
    let mut st = State {
        cfg,
        all: Vec::new(),
        alive: Vec::new(),
        active: Vec::new(),
        by_age: BTreeSet::new(),
        by_weight: BTreeSet::new(),
        seen: HashSet::new(),
        stats: Stats::default(),
    };
    // inputs keep their ids even when redundant, so they are added verbatim
    for c in inputs {
        let id = st.all.len();
        let mut c = c.clone();
        c.id = id;
        if c.is_empty() {
            st.all.push(c);
            let proof = RefutationProof::extract(&st.all, id);
            return (Outcome::Refutation { proof }, st.stats, st.all);
        }
        st.by_age.insert((c.age, id));
        st.by_weight.insert((c.weight, id));
        st.seen.insert(c.literals.clone());
        st.all.push(c);
        st.alive.push(true);
        st.stats.kept += 1;
    }
    if cfg.subsumption {
        for id in 0..st.all.len() {
            if !st.alive[id] {
                continue;
            }
            let redundant = is_tautology(&st.all[id].literals)
                || (0..st.all.len()).any(|k| {
                    k != id
                        && st.alive[k]
                        && subsumes(&st.all[k], &st.all[id])
                        && (!subsumes(&st.all[id], &st.all[k]) || k < id)
                });
            if redundant {
                st.kill(id);
            }
        }
    }

    let mut turn = 0;
    while let Some(given) = st.pick(turn) {
        turn += 1;
        st.stats.given += 1;
        st.active.push(given);
        let mut fresh: Vec<Inferred> = factor(&st.all[given]);
        for &other in &st.active {
            fresh.extend(all_resolvents(&st.all[given], &st.all[other]));
        }
        let age = turn;
        for inf in fresh {
            st.stats.generated += 1;
            let c = Clause::new(st.all.len(), inf.literals, inf.provenance, age);
            let empty = c.is_empty();
            if let Some(id) = st.keep(c) {
                if empty {
                    let proof = RefutationProof::extract(&st.all, id);
                    return (Outcome::Refutation { proof }, st.stats, st.all);
                }
            }
            if st.stats.generated >= cfg.max_generated {
                return (Outcome::ResourceOut { resource: Resource::Clauses }, st.stats, st.all);
            }
        }
        if start.elapsed() > cfg.timeout {
            return (Outcome::ResourceOut { resource: Resource::Time }, st.stats, st.all);
        }
    }
    (Outcome::Saturated, st.stats, st.all)
}
