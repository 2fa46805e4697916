use std::collections::BTreeMap;

use serde::Serialize;

use super::interp::Interpretation;
use super::ModelError;
use crate::syntax::{Formula, Term};

/// Variable assignment.
pub type Env = BTreeMap<String, usize>;

/// Values of the outermost universally quantified variables at which a
/// formula fails, in binder order.
pub type Witness = Vec<(String, usize)>;

fn term_value(t: &Term, m: &Interpretation, env: &Env) -> Result<usize, ModelError> {
    match t {
        Term::Var(x) => env.get(x).copied().ok_or_else(|| ModelError::FreeVariable(x.clone())),
        Term::Const(c) => m.constant(c).ok_or_else(|| ModelError::UnmappedConstant(c.clone())),
        Term::App(f, args) if f == "rev" && args.len() == 1 => Ok(m.rev(term_value(&args[0], m, env)?)),
        Term::App(f, args) => {
            let vals = args.iter().map(|a| term_value(a, m, env)).collect::<Result<Vec<_>, _>>()?;
            m.apply(f, &vals).ok_or_else(|| ModelError::Uninterpreted(format!("{f}/{}", args.len())))
        }
    }
}

/// Classical truth value of `f` in `m` under `env`.
pub fn eval(f: &Formula, m: &Interpretation, env: &Env) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::Atom(a) if a.pred == "Undir" && a.args.len() == 2 => {
            m.undir(term_value(&a.args[0], m, env)?, term_value(&a.args[1], m, env)?)
        }
        Formula::Atom(a) => return Err(ModelError::Uninterpreted(format!("{}/{}", a.pred, a.args.len()))),
        Formula::False => false,
        Formula::And(a, b) => eval(a, m, env)? && eval(b, m, env)?,
        Formula::Or(a, b) => eval(a, m, env)? || eval(b, m, env)?,
        Formula::Imp(a, b) => !eval(a, m, env)? || eval(b, m, env)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut inner = env.clone();
            for x in 0..m.size() {
                inner.insert(v.clone(), x);
                if eval(body, m, &inner)? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Evaluates a closed formula.
pub fn eval_closed(f: &Formula, m: &Interpretation) -> Result<bool, ModelError> {
    eval(f, m, &Env::new())
}

/// `None` when `f` holds; otherwise the lexicographically first assignment
/// to the leading universal variables falsifying the body (empty when `f`
/// has no leading universals).
pub fn find_witness(f: &Formula, m: &Interpretation) -> Result<Option<Witness>, ModelError> {
    let (vars, body) = f.universal_prefix();
    let n = m.size();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let env: Env = vars.iter().map(|v| v.to_string()).zip(digits.iter().copied()).collect();
        if !eval(body, m, &env)? {
            return Ok(Some(vars.iter().map(|v| v.to_string()).zip(digits).collect()));
        }
        // odometer, last variable fastest
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Evaluates each named closed formula in `m`.
pub fn check_model(m: &Interpretation, formulas: &[(String, Formula)]) -> Result<Vec<FormulaCheck>, ModelError> {
    formulas
        .iter()
        .map(|(name, f)| {
            if let Some(v) = f.free_vars().into_iter().next() {
                return Err(ModelError::FreeVariable(v));
            }
            let witness = find_witness(f, m)?;
            Ok(FormulaCheck { name: name.clone(), holds: witness.is_none(), witness })
        })
        .collect()
}
