//! Random formulas over the corpus signature and the finite-size
//! satisfiability oracle shared by the property and acceptance suites.

#![allow(dead_code)]

use orderax::models::{search, SearchQuery};
use orderax::prover::{literals_to_formula, Clausifier};
use orderax::syntax::{Formula, Signature, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["l", "m", "n"];

fn term(rng: &mut ChaCha8Rng) -> Term {
    let v = Term::var(VARS[rng.gen_range(0..VARS.len())]);
    match rng.gen_range(0..4) {
        0 => Term::rev(v),
        _ => v,
    }
}

fn open_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.05) { Formula::False } else { Formula::undir(term(rng), term(rng)) };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(open_formula(rng, d)),
        1 => Formula::and(open_formula(rng, d), open_formula(rng, d)),
        2 => Formula::or(open_formula(rng, d), open_formula(rng, d)),
        3 => Formula::imp(open_formula(rng, d), open_formula(rng, d)),
        4 => Formula::iff(open_formula(rng, d), open_formula(rng, d)),
        5 => Formula::forall(VARS[rng.gen_range(0..3)], open_formula(rng, d)),
        _ => Formula::exists(VARS[rng.gen_range(0..3)], open_formula(rng, d)),
    }
}

fn close(rng: &mut ChaCha8Rng, mut f: Formula) -> Formula {
    for v in f.free_vars() {
        f = if rng.gen_bool(0.7) { Formula::forall(v, f) } else { Formula::exists(v, f) };
    }
    f
}

/// A closed formula of connective depth at most 3 below its outer binders,
/// or a conjunction of two such.
pub fn random_closed(rng: &mut ChaCha8Rng) -> Formula {
    let f = open_formula(rng, 3);
    let f = close(rng, f);
    if rng.gen_bool(0.5) {
        let g = open_formula(rng, 2);
        Formula::and(f, close(rng, g))
    } else {
        f
    }
}

/// The clause set of `f` as universally closed formulas, Skolem symbols
/// left uninterpreted.
pub fn clause_formulas(f: &Formula) -> Vec<Formula> {
    let sig = Signature::geometry();
    let mut c = Clausifier::new(&sig);
    c.add("f", f).expect("closed, no definitions");
    c.finish().clauses.iter().map(|c| literals_to_formula(&c.literals)).collect()
}

/// Table cells the search must enumerate at size `n` for the non-`rev`
/// symbols of `fs`.
pub fn extra_cells(fs: &[Formula], n: usize) -> usize {
    let consts: std::collections::BTreeSet<String> = fs.iter().flat_map(Formula::constants).collect();
    let funs: std::collections::BTreeSet<(String, usize)> =
        fs.iter().flat_map(Formula::functions).filter(|(name, a)| !(name == "rev" && *a == 1)).collect();
    consts.len() + funs.iter().map(|(_, a)| n.pow(*a as u32)).sum::<usize>()
}

pub fn satisfiable(fs: Vec<Formula>, size: usize) -> bool {
    search(&SearchQuery::new(fs, Vec::new(), size..=size)).expect("searchable").is_found()
}

/// Outcome of one equisatisfiability comparison.
pub struct Agreement {
    pub formula: Formula,
    /// Satisfiable at sizes 1, 2, 3: (formula, clause set).
    pub by_size: Vec<(bool, bool)>,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.by_size.iter().all(|(a, b)| a == b)
    }
}

/// Compares satisfiability of `f` and its clause set at sizes 1..=3. Returns
/// `None` when the Skolem tables would make the size-3 search too large.
pub fn compare(f: &Formula) -> Option<Agreement> {
    let clauses = clause_formulas(f);
    if extra_cells(&clauses, 3) > 4 {
        return None;
    }
    let by_size = (1..=3).map(|n| (satisfiable(vec![f.clone()], n), satisfiable(clauses.clone(), n))).collect();
    Some(Agreement { formula: f.clone(), by_size })
}

/// At least `count` comparisons from the seeded generator.
pub fn equisatisfiability_sample(seed: u64, count: usize) -> Vec<Agreement> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        if let Some(a) = compare(&random_closed(&mut rng)) {
            out.push(a);
        }
    }
    out
}
