use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NdRule, NdScript, NdStep, RegistryError};
use crate::syntax::{Formula, Substitution, Term};

/// A checked script available for citation by later scripts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma {
    pub goal: Formula,
    /// Axioms the lemma rests on, through its own lemmas too.
    pub used_axioms: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    BadStepId { detail: String },
    BadPremise { detail: String },
    FormulaMismatch { expected: String },
    Eigenvariable { var: String, hypothesis: Option<usize> },
    Undischarged { hypotheses: Vec<usize> },
    UnknownAxiom { name: String },
    UnknownLemma { name: String },
    UnknownProblem { name: String },
    DeadHypothesis { hypothesis: usize },
    BadDischarge { detail: String },
    BadInstantiation { detail: String },
    GoalMismatch { goal: String },
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::BadStepId { detail } => write!(f, "bad step id: {detail}"),
            Reason::BadPremise { detail } => write!(f, "bad premise: {detail}"),
            Reason::FormulaMismatch { expected } => write!(f, "formula mismatch: rule yields `{expected}`"),
            Reason::Eigenvariable { var, hypothesis: Some(h) } => {
                write!(f, "eigenvariable `{var}` is free in live hypothesis {h}")
            }
            Reason::Eigenvariable { var, hypothesis: None } => write!(f, "eigenvariable `{var}` is free in the conclusion"),
            Reason::Undischarged { hypotheses } => write!(f, "undischarged hypotheses {hypotheses:?}"),
            Reason::UnknownAxiom { name } => write!(f, "unknown axiom `{name}`"),
            Reason::UnknownLemma { name } => write!(f, "unknown lemma `{name}`"),
            Reason::UnknownProblem { name } => write!(f, "unknown problem `{name}`"),
            Reason::DeadHypothesis { hypothesis } => write!(f, "hypothesis {hypothesis} was already discharged"),
            Reason::BadDischarge { detail } => write!(f, "bad discharge: {detail}"),
            Reason::BadInstantiation { detail } => write!(f, "bad instantiation: {detail}"),
            Reason::GoalMismatch { goal } => write!(f, "last step does not prove the goal `{goal}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    /// Offending step id; 0 for script-level failures.
    pub step: usize,
    pub reason: Reason,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub script: String,
    pub ok: bool,
    pub failure: Option<CheckFailure>,
    /// Axioms cited directly.
    pub used_axioms: BTreeSet<String>,
    /// Axioms cited directly or through lemmas.
    pub used_axioms_transitive: BTreeSet<String>,
}

struct Derived {
    formula: Formula,
    deps: BTreeSet<usize>,
    hypothesis: bool,
}

struct Checker<'a> {
    script: &'a NdScript,
    axioms: &'a [(String, Formula)],
    lemmas: &'a BTreeMap<String, Lemma>,
    done: BTreeMap<usize, Derived>,
    dead: BTreeSet<usize>,
}

fn mismatch(expected: &Formula) -> Reason {
    Reason::FormulaMismatch { expected: expected.to_string() }
}

fn require(cond: bool, reason: impl FnOnce() -> Reason) -> Result<(), Reason> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn same(a: &Formula, b: &Formula) -> bool {
    a.alpha_eq(b)
}

fn shape_error(rule: &str, what: &str, f: &Formula) -> Reason {
    Reason::BadPremise { detail: format!("{rule} needs {what}, got `{f}`") }
}

impl Checker<'_> {
    fn premise(&self, id: usize) -> Result<&Derived, Reason> {
        let d = self.done.get(&id).ok_or_else(|| Reason::BadPremise { detail: format!("{id} is not an earlier step") })?;
        if let Some(&h) = d.deps.iter().find(|h| self.dead.contains(h)) {
            return Err(Reason::DeadHypothesis { hypothesis: h });
        }
        Ok(d)
    }

    fn live_hypothesis(&self, id: usize) -> Result<&Derived, Reason> {
        let d = self.done.get(&id).ok_or_else(|| Reason::BadDischarge { detail: format!("{id} is not an earlier step") })?;
        require(d.hypothesis, || Reason::BadDischarge { detail: format!("step {id} is not a hypothesis") })?;
        require(!self.dead.contains(&id), || Reason::DeadHypothesis { hypothesis: id })?;
        Ok(d)
    }

    fn axiom(&self, name: &str) -> Result<&Formula, Reason> {
        if self.script.uses.iter().any(|u| u == name) {
            let lemma = self.lemmas.get(name).ok_or_else(|| Reason::UnknownLemma { name: name.into() })?;
            if let Some(missing) = lemma.used_axioms.iter().find(|a| !self.axioms.iter().any(|(n, _)| n == *a)) {
                return Err(Reason::UnknownAxiom { name: missing.clone() });
            }
            return Ok(&lemma.goal);
        }
        self.axioms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| Reason::UnknownAxiom { name: name.into() })
    }

    fn step(&mut self, s: &NdStep) -> Result<(), Reason> {
        if let Some((&last, _)) = self.done.iter().next_back() {
            require(s.id > last, || Reason::BadStepId { detail: format!("{} does not follow {last}", s.id) })?;
        }
        require(s.id > 0, || Reason::BadStepId { detail: "ids start at 1".into() })?;
        let arity = match s.rule {
            NdRule::Hypothesis | NdRule::AxiomInstance(_) => 0,
            NdRule::ImpElim | NdRule::AndIntro | NdRule::NegElim => 2,
            NdRule::OrElim => 3,
            _ => 1,
        };
        require(s.premises.len() == arity, || Reason::BadPremise {
            detail: format!("{} takes {arity} premises, got {}", s.rule.name(), s.premises.len()),
        })?;
        let takes_inst = matches!(s.rule, NdRule::AxiomInstance(_) | NdRule::ForallElim | NdRule::ForallIntro);
        require(takes_inst || s.inst.is_empty(), || Reason::BadInstantiation { detail: format!("{} takes no instantiation", s.rule.name()) })?;
        let takes_discharge = matches!(s.rule, NdRule::ImpIntro | NdRule::OrElim);
        require(takes_discharge || s.discharge.is_empty(), || Reason::BadDischarge { detail: format!("{} discharges nothing", s.rule.name()) })?;
        let premises = s.premises.iter().map(|&p| self.premise(p)).collect::<Result<Vec<_>, _>>()?;
        let union = |ds: &[&Derived]| ds.iter().flat_map(|d| d.deps.iter().copied()).collect::<BTreeSet<usize>>();
        let f = &s.formula;

        let mut deps = BTreeSet::new();
        let mut hypothesis = false;
        let mut discharged = Vec::new();
        match &s.rule {
            NdRule::Hypothesis => {
                deps.insert(s.id);
                hypothesis = true;
            }
            NdRule::AxiomInstance(name) => {
                let base = self.axiom(name)?;
                let (prefix, _) = base.universal_prefix();
                let k = s.inst.len();
                let domain: BTreeSet<&str> = s.inst.domain().map(String::as_str).collect();
                let binders: BTreeSet<&str> = prefix.iter().take(k).copied().collect();
                require(k <= prefix.len() && binders == domain && binders.len() == k, || Reason::BadInstantiation {
                    detail: format!("{{{}}} does not match the outer binders of `{name}`", domain.into_iter().collect::<Vec<_>>().join(",")),
                })?;
                let mut body = base;
                for _ in 0..k {
                    match body {
                        Formula::Forall(_, b) => body = b,
                        _ => unreachable!("prefix length checked"),
                    }
                }
                let expected = s.inst.apply_formula(body);
                require(same(f, &expected), || mismatch(&expected))?;
            }
            NdRule::ImpElim => {
                let (imp, ant) = (premises[0], premises[1]);
                let Formula::Imp(a, b) = &imp.formula else {
                    return Err(shape_error("ImpElim", "an implication first", &imp.formula));
                };
                require(same(a, &ant.formula), || Reason::BadPremise { detail: format!("antecedent `{a}` differs from `{}`", ant.formula) })?;
                require(same(f, b), || mismatch(b))?;
                deps = union(&premises);
            }
            NdRule::ImpIntro => {
                let Formula::Imp(a, b) = f else {
                    return Err(Reason::FormulaMismatch { expected: format!("an implication ending in `{}`", premises[0].formula) });
                };
                require(same(b, &premises[0].formula), || mismatch(&Formula::imp((**a).clone(), premises[0].formula.clone())))?;
                require(s.discharge.len() <= 1, || Reason::BadDischarge { detail: "ImpIntro discharges at most one hypothesis".into() })?;
                deps = union(&premises);
                if let Some(&h) = s.discharge.first() {
                    let hyp = self.live_hypothesis(h)?;
                    require(same(&hyp.formula, a), || Reason::BadDischarge { detail: format!("hypothesis {h} is not `{a}`") })?;
                    deps.remove(&h);
                    discharged.push(h);
                }
            }
            NdRule::AndIntro => {
                let expected = Formula::and(premises[0].formula.clone(), premises[1].formula.clone());
                require(same(f, &expected), || mismatch(&expected))?;
                deps = union(&premises);
            }
            NdRule::AndElimLeft | NdRule::AndElimRight => {
                let Formula::And(a, b) = &premises[0].formula else {
                    return Err(shape_error(s.rule.name(), "a conjunction", &premises[0].formula));
                };
                let expected = if s.rule == NdRule::AndElimLeft { a } else { b };
                require(same(f, expected), || mismatch(expected))?;
                deps = union(&premises);
            }
            NdRule::OrIntroLeft | NdRule::OrIntroRight => {
                let Formula::Or(a, b) = f else {
                    return Err(Reason::FormulaMismatch { expected: format!("a disjunction containing `{}`", premises[0].formula) });
                };
                let side = if s.rule == NdRule::OrIntroLeft { a } else { b };
                require(same(side, &premises[0].formula), || Reason::FormulaMismatch {
                    expected: format!("a disjunction with `{}` on the {} side", premises[0].formula, if s.rule == NdRule::OrIntroLeft { "left" } else { "right" }),
                })?;
                deps = union(&premises);
            }
            NdRule::OrElim => {
                let (d, c1, c2) = (premises[0], premises[1], premises[2]);
                let Formula::Or(a, b) = &d.formula else {
                    return Err(shape_error("OrElim", "a disjunction first", &d.formula));
                };
                require(s.discharge.len() == 2 && s.discharge[0] != s.discharge[1], || Reason::BadDischarge {
                    detail: "OrElim discharges two distinct case hypotheses".into(),
                })?;
                let (h1, h2) = (s.discharge[0], s.discharge[1]);
                let left = self.live_hypothesis(h1)?;
                require(same(&left.formula, a), || Reason::BadDischarge { detail: format!("hypothesis {h1} is not `{a}`") })?;
                let right = self.live_hypothesis(h2)?;
                require(same(&right.formula, b), || Reason::BadDischarge { detail: format!("hypothesis {h2} is not `{b}`") })?;
                require(same(f, &c1.formula), || mismatch(&c1.formula))?;
                require(same(f, &c2.formula), || mismatch(&c2.formula))?;
                deps = d.deps.clone();
                deps.extend(c1.deps.iter().filter(|&&x| x != h1));
                deps.extend(c2.deps.iter().filter(|&&x| x != h2));
                require(!deps.contains(&h1) && !deps.contains(&h2), || Reason::BadDischarge {
                    detail: "conclusion still depends on a case hypothesis".into(),
                })?;
                discharged.extend([h1, h2]);
            }
            NdRule::NegElim => {
                let (a, na) = (premises[0], premises[1]);
                let expected_neg = Formula::not(a.formula.clone());
                require(same(&na.formula, &expected_neg), || Reason::BadPremise {
                    detail: format!("second premise should be `{expected_neg}`, got `{}`", na.formula),
                })?;
                require(*f == Formula::False, || mismatch(&Formula::False))?;
                deps = union(&premises);
            }
            NdRule::ExFalso => {
                require(premises[0].formula == Formula::False, || shape_error("ExFalso", "`false`", &premises[0].formula))?;
                deps = union(&premises);
            }
            NdRule::ForallIntro => {
                let Formula::Forall(y, body) = f else {
                    return Err(Reason::FormulaMismatch { expected: format!("a universal generalizing `{}`", premises[0].formula) });
                };
                let x = match s.inst.iter().collect::<Vec<_>>().as_slice() {
                    [] => y.clone(),
                    [(k, Term::Var(x))] if *k == y => x.clone(),
                    _ => {
                        return Err(Reason::BadInstantiation { detail: format!("ForallIntro takes at most {{{y}:=<variable>}}") });
                    }
                };
                let instance = Substitution::single(y.clone(), Term::Var(x.clone())).apply_formula(body);
                require(same(&instance, &premises[0].formula), || mismatch(&Formula::forall(y.clone(), premises[0].formula.clone())))?;
                require(x == *y || !f.free_vars().contains(&x), || Reason::Eigenvariable { var: x.clone(), hypothesis: None })?;
                let live = self.done.iter().filter(|(id, d)| d.hypothesis && !self.dead.contains(id));
                for (&h, d) in live {
                    require(!d.formula.free_vars().contains(&x), || Reason::Eigenvariable { var: x.clone(), hypothesis: Some(h) })?;
                }
                deps = union(&premises);
            }
            NdRule::ForallElim => {
                let Formula::Forall(x, body) = &premises[0].formula else {
                    return Err(shape_error("ForallElim", "a universal", &premises[0].formula));
                };
                require(s.inst.len() == 1 && s.inst.contains(x), || Reason::BadInstantiation {
                    detail: format!("ForallElim instantiates exactly `{x}`"),
                })?;
                let expected = s.inst.apply_formula(body);
                require(same(f, &expected), || mismatch(&expected))?;
                deps = union(&premises);
            }
        }
        self.dead.extend(discharged);
        self.done.insert(s.id, Derived { formula: f.clone(), deps, hypothesis });
        Ok(())
    }

    fn run(&mut self) -> Result<(), CheckFailure> {
        for s in &self.script.steps {
            self.step(s).map_err(|reason| CheckFailure { step: s.id, reason })?;
        }
        let Some(last) = self.script.steps.last() else {
            return Err(CheckFailure { step: 0, reason: Reason::BadStepId { detail: "script has no steps".into() } });
        };
        let fail = |reason| Err(CheckFailure { step: last.id, reason });
        if !same(&last.formula, &self.script.goal) {
            return fail(Reason::GoalMismatch { goal: self.script.goal.to_string() });
        }
        let open: Vec<usize> = self.done[&last.id].deps.iter().copied().collect();
        if !open.is_empty() {
            return fail(Reason::Undischarged { hypotheses: open });
        }
        Ok(())
    }
}

/// Checks one script. `axioms` are the axioms of the script's problem;
/// `lemmas` holds previously checked scripts by name.
pub fn check_script(script: &NdScript, axioms: &[(String, Formula)], lemmas: &BTreeMap<String, Lemma>) -> CheckReport {
    let mut checker = Checker { script, axioms, lemmas, done: BTreeMap::new(), dead: BTreeSet::new() };
    let result = checker.run();
    let used_axioms = script.cited_axioms();
    let used_axioms_transitive = super::used_axioms(script, lemmas, true);
    CheckReport { script: script.name.clone(), ok: result.is_ok(), failure: result.err(), used_axioms, used_axioms_transitive }
}

/// Checks scripts in dependency order. `axioms_of` maps a problem name to
/// its axioms. Reports come back in input order; a script whose lemma
/// failed fails with `UnknownLemma`.
pub fn check_scripts(
    scripts: &[NdScript],
    axioms_of: impl Fn(&str) -> Option<Vec<(String, Formula)>>,
) -> Result<Vec<CheckReport>, RegistryError> {
    let index: BTreeMap<&str, usize> = scripts.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    if index.len() != scripts.len() {
        let mut seen = BTreeSet::new();
        let dup = scripts.iter().find(|s| !seen.insert(&s.name)).map(|s| s.name.clone()).unwrap_or_default();
        return Err(RegistryError::Duplicate(dup));
    }
    // depth-first topological order, visiting in input order
    let mut order = Vec::new();
    let mut state = vec![0u8; scripts.len()];
    fn visit(
        i: usize,
        scripts: &[NdScript],
        index: &BTreeMap<&str, usize>,
        state: &mut [u8],
        order: &mut Vec<usize>,
        path: &mut Vec<String>,
    ) -> Result<(), RegistryError> {
        match state[i] {
            2 => return Ok(()),
            1 => {
                path.push(scripts[i].name.clone());
                return Err(RegistryError::Cycle(path.clone()));
            }
            _ => {}
        }
        state[i] = 1;
        path.push(scripts[i].name.clone());
        for u in &scripts[i].uses {
            let &j = index.get(u.as_str()).ok_or_else(|| RegistryError::UnknownLemma { script: scripts[i].name.clone(), lemma: u.clone() })?;
            visit(j, scripts, index, state, order, path)?;
        }
        path.pop();
        state[i] = 2;
        order.push(i);
        Ok(())
    }
    for i in 0..scripts.len() {
        visit(i, scripts, &index, &mut state, &mut order, &mut Vec::new())?;
    }
    let mut lemmas = BTreeMap::new();
    let mut reports: Vec<Option<CheckReport>> = vec![None; scripts.len()];
    for i in order {
        let s = &scripts[i];
        let report = match axioms_of(&s.problem) {
            Some(axioms) => check_script(s, &axioms, &lemmas),
            None => CheckReport {
                script: s.name.clone(),
                ok: false,
                failure: Some(CheckFailure { step: 0, reason: Reason::UnknownProblem { name: s.problem.clone() } }),
                used_axioms: s.cited_axioms(),
                used_axioms_transitive: super::used_axioms(s, &lemmas, true),
            },
        };
        if report.ok {
            lemmas.insert(s.name.clone(), Lemma { goal: s.goal.clone(), used_axioms: report.used_axioms_transitive.clone() });
        }
        reports[i] = Some(report);
    }
    Ok(reports.into_iter().map(|r| r.expect("every script visited")).collect())
}
