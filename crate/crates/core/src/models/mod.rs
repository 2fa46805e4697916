//! Finite interpretations of `Undir`/`rev`, classical evaluation, and
//! exhaustive model search.

mod compiled;
mod eval;
mod interp;
mod search;

use thiserror::Error;

pub use eval::{check_model, eval, eval_closed, find_witness, Env, FormulaCheck, Witness};
pub use interp::{FnTable, Interpretation};
pub use search::{for_each_model, search, search_with_cap, SearchQuery, SearchResult, DEFAULT_SIZE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed interpretation: {0}")]
    Malformed(String),
    #[error("constant `{0}` has no value")]
    UnmappedConstant(String),
    #[error("variable `{0}` is free")]
    FreeVariable(String),
    #[error("symbol {0} has no interpretation")]
    Uninterpreted(String),
    #[error("max size {requested} exceeds the cap of {cap}")]
    SizeCap { requested: usize, cap: usize },
    #[error("invalid size range {min}..{max}")]
    InvalidSizes { min: usize, max: usize },
    #[error("search space does not fit in 64 bits")]
    SearchSpaceTooLarge,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
