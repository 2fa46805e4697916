//! Exhaustive interpretation search.
//!
//! Enumeration order, which is part of the output contract:
//!
//! 1. domain size, ascending;
//! 2. the `rev` table, by its displacement vector `d_i = (rev(i) - i) mod n`
//!    compared lexicographically (`d_0` most significant), so the identity
//!    comes first;
//! 3. the `Undir` table, read as the binary number whose bit `a*n + b` is
//!    `Undir(a,b)`, ascending (the pair `(0,0)` toggles fastest);
//! 4. the extra cells (constants by name, then each extra function's table),
//!    read as a base-`n` numeral with the first cell most significant.
//!
//! The `rev` tables of one size may be scanned concurrently; the reported
//! model is always the first in this order.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use super::compiled::{Compiled, ExtraSymbols, Tables};
use super::eval::{eval_closed, find_witness, Witness};
use super::interp::Interpretation;
use super::ModelError;
use crate::syntax::Formula;

/// Largest domain size searched unless the caller raises the cap.
pub const DEFAULT_SIZE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub satisfy: Vec<Formula>,
    pub falsify: Vec<Formula>,
    pub min_size: usize,
    pub max_size: usize,
}

impl SearchQuery {
    pub fn new(satisfy: Vec<Formula>, falsify: Vec<Formula>, sizes: std::ops::RangeInclusive<usize>) -> Self {
        SearchQuery { satisfy, falsify, min_size: *sizes.start(), max_size: *sizes.end() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchResult {
    Found {
        model: Interpretation,
        /// One entry per `falsify` formula.
        witnesses: Vec<Witness>,
        /// Interpretations visited up to and including the model.
        scanned: u64,
    },
    Exhausted {
        min_size: usize,
        max_size: usize,
        scanned: u64,
    },
}

impl SearchResult {
    pub fn model(&self) -> Option<&Interpretation> {
        match self {
            SearchResult::Found { model, .. } => Some(model),
            SearchResult::Exhausted { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchResult::Found { .. })
    }

    pub fn scanned(&self) -> u64 {
        match self {
            SearchResult::Found { scanned, .. } | SearchResult::Exhausted { scanned, .. } => *scanned,
        }
    }
}

struct Plan {
    n: usize,
    symbols: ExtraSymbols,
    cells: usize,
    /// (formula, required value), cheapest first, `rev`/`Undir`-only
    /// constraints ahead of those needing extra cells.
    base: Vec<(Compiled, bool)>,
    extra: Vec<(Compiled, bool)>,
    rev_count: u64,
    undir_count: u64,
    extra_count: u64,
}

impl Plan {
    fn new(q: &SearchQuery, n: usize) -> Result<Self, ModelError> {
        let symbols = ExtraSymbols::collect(q.satisfy.iter().chain(&q.falsify));
        let cells = symbols.cell_count(n).ok_or(ModelError::SearchSpaceTooLarge)?;
        let mut base = Vec::new();
        let mut extra = Vec::new();
        for (f, want) in q.satisfy.iter().map(|f| (f, true)).chain(q.falsify.iter().map(|f| (f, false))) {
            let c = Compiled::new(f, &symbols, n)?;
            if c.uses_extra {
                extra.push((c, want));
            } else {
                base.push((c, want));
            }
        }
        base.sort_by_key(|(c, _)| c.cost);
        extra.sort_by_key(|(c, _)| c.cost);
        let pow = |b: u64, e: usize| -> Result<u64, ModelError> {
            b.checked_pow(u32::try_from(e).map_err(|_| ModelError::SearchSpaceTooLarge)?).ok_or(ModelError::SearchSpaceTooLarge)
        };
        let n64 = n as u64;
        Ok(Plan {
            n,
            cells,
            rev_count: pow(n64, n)?,
            undir_count: pow(2, n * n)?,
            extra_count: pow(n64, cells)?,
            symbols,
            base,
            extra,
        })
    }

    fn total(&self) -> Result<u64, ModelError> {
        self.rev_count
            .checked_mul(self.undir_count)
            .and_then(|x| x.checked_mul(self.extra_count))
            .ok_or(ModelError::SearchSpaceTooLarge)
    }

    fn rev_table(&self, index: u64) -> Vec<usize> {
        let n = self.n;
        let mut digits = vec![0usize; n];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = (rest % n as u64) as usize;
            rest /= n as u64;
        }
        digits.iter().enumerate().map(|(i, d)| (i + d) % n).collect()
    }

    fn fill_extra(&self, index: u64, out: &mut [usize]) {
        let mut rest = index;
        for cell in out.iter_mut().rev() {
            *cell = (rest % self.n as u64) as usize;
            rest /= self.n as u64;
        }
    }

    fn accepts(constraints: &[(Compiled, bool)], t: &Tables<'_>) -> bool {
        constraints.iter().all(|(c, want)| c.eval(t) == *want)
    }

    /// Scans every interpretation with the given `rev` table, in order,
    /// calling `visit` with the position within this rev block for each
    /// accepted one.
    fn scan_rev<B>(&self, rev_index: u64, mut visit: impl FnMut(u64, &Tables<'_>) -> ControlFlow<B>) -> ControlFlow<B> {
        let n = self.n;
        let rev = self.rev_table(rev_index);
        let mut undir = vec![false; n * n];
        let mut extra = vec![0usize; self.cells];
        for u in 0..self.undir_count {
            for (k, bit) in undir.iter_mut().enumerate() {
                *bit = (u >> k) & 1 == 1;
            }
            let t = Tables { n, rev: &rev, undir: &undir, extra: &extra };
            if !Self::accepts(&self.base, &t) {
                continue;
            }
            for e in 0..self.extra_count {
                self.fill_extra(e, &mut extra);
                let t = Tables { n, rev: &rev, undir: &undir, extra: &extra };
                if Self::accepts(&self.extra, &t) {
                    visit(u * self.extra_count + e, &t)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn materialize(&self, t: &Tables<'_>) -> Interpretation {
        let mut m = Interpretation::from_tables(self.n, t.rev.to_vec(), t.undir.to_vec());
        for (c, v) in self.symbols.consts.iter().zip(t.extra) {
            m = m.with_constant(c.clone(), *v).expect("in range");
        }
        let mut offset = self.symbols.consts.len();
        for (f, arity) in &self.symbols.funs {
            let len = self.n.pow(*arity as u32);
            m = m.with_function(f.clone(), *arity, t.extra[offset..offset + len].to_vec()).expect("in range");
            offset += len;
        }
        m
    }
}

fn validate(q: &SearchQuery, cap: usize) -> Result<(), ModelError> {
    if q.min_size == 0 || q.min_size > q.max_size {
        return Err(ModelError::InvalidSizes { min: q.min_size, max: q.max_size });
    }
    if q.max_size > cap {
        return Err(ModelError::SizeCap { requested: q.max_size, cap });
    }
    for f in q.satisfy.iter().chain(&q.falsify) {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(ModelError::FreeVariable(v));
        }
    }
    Ok(())
}

/// Searches with the default size cap.
pub fn search(q: &SearchQuery) -> Result<SearchResult, ModelError> {
    search_with_cap(q, DEFAULT_SIZE_CAP)
}

/// Returns the first interpretation (in the documented order) satisfying
/// every `satisfy` formula and falsifying every `falsify` formula.
pub fn search_with_cap(q: &SearchQuery, cap: usize) -> Result<SearchResult, ModelError> {
    validate(q, cap)?;
    let mut scanned: u64 = 0;
    for n in q.min_size..=q.max_size {
        let plan = Plan::new(q, n)?;
        let per_rev = plan.undir_count * plan.extra_count;
        let hit = (0..plan.rev_count).into_par_iter().find_map_first(|r| {
            match plan.scan_rev(r, |pos, t| ControlFlow::Break((r * per_rev + pos, plan.materialize(t)))) {
                ControlFlow::Break(found) => Some(found),
                ControlFlow::Continue(()) => None,
            }
        });
        if let Some((index, model)) = hit {
            return finish(q, model, scanned + index + 1);
        }
        scanned = scanned.checked_add(plan.total()?).ok_or(ModelError::SearchSpaceTooLarge)?;
    }
    Ok(SearchResult::Exhausted { min_size: q.min_size, max_size: q.max_size, scanned })
}

fn finish(q: &SearchQuery, model: Interpretation, scanned: u64) -> Result<SearchResult, ModelError> {
    // re-check with the reference evaluator
    for f in &q.satisfy {
        if !eval_closed(f, &model)? {
            return Err(ModelError::Inconsistent(format!("found model fails {f}")));
        }
    }
    let mut witnesses = Vec::new();
    for f in &q.falsify {
        match find_witness(f, &model)? {
            Some(w) => witnesses.push(w),
            None => return Err(ModelError::Inconsistent(format!("found model satisfies {f}"))),
        }
    }
    Ok(SearchResult::Found { model, witnesses, scanned })
}

/// Visits every interpretation meeting the query, sequentially and in
/// order, until `visit` breaks. Returns the number of interpretations
/// scanned.
pub fn for_each_model(
    q: &SearchQuery,
    cap: usize,
    mut visit: impl FnMut(&Interpretation) -> ControlFlow<()>,
) -> Result<u64, ModelError> {
    validate(q, cap)?;
    let mut scanned: u64 = 0;
    for n in q.min_size..=q.max_size {
        let plan = Plan::new(q, n)?;
        let per_rev = plan.undir_count * plan.extra_count;
        for r in 0..plan.rev_count {
            let flow = plan.scan_rev(r, |pos, t| {
                let model = plan.materialize(t);
                match visit(&model) {
                    ControlFlow::Break(()) => ControlFlow::Break(r * per_rev + pos + 1),
                    ControlFlow::Continue(()) => ControlFlow::Continue(()),
                }
            });
            if let ControlFlow::Break(pos) = flow {
                return Ok(scanned + pos);
            }
        }
        scanned += plan.total()?;
    }
    Ok(scanned)
}
