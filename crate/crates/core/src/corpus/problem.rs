//! Problem files.
//!
//! ```text
//! # comment
//! problem G3
//! kind prove                      # or model-search
//! logic constructive              # optional, informational
//! constant c                      # optional
//! define Con(l,m) := Undir(l,m) & Undir(l,rev(m))
//! axiom I.5: forall l. ~Undir(l,l)
//! axiom SYM                       # built-in axiom by name
//! goal forall l. forall m. ...
//! satisfy I.5, I.6                # names or formulas
//! falsify SYM
//! sizes 1..3
//! expect refutation               # no-refutation | found | exhausted
//! script S1
//! ```

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{builtin_axiom, CorpusError};
use crate::syntax::{DefinedPredicate, Formula, Parser, Signature, SymbolKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Refutation,
    NoRefutation,
    Found,
    Exhausted,
    ScriptOk,
}

impl Expected {
    pub fn label(self) -> &'static str {
        match self {
            Expected::Refutation => "refutation",
            Expected::NoRefutation => "no-refutation",
            Expected::Found => "found",
            Expected::Exhausted => "exhausted",
            Expected::ScriptOk => "script-ok",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Logic {
    #[default]
    Classical,
    Constructive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemKind {
    Prove {
        goal: Formula,
    },
    ModelSearch {
        satisfy: Vec<(String, Formula)>,
        falsify: Vec<(String, Formula)>,
        sizes: RangeInclusive<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub kind: ProblemKind,
    pub logic: Logic,
    pub axioms: Vec<(String, Formula)>,
    pub definitions: Vec<DefinedPredicate>,
    pub signature: Signature,
    pub expected: Expected,
    /// Scripts that certify the goal constructively.
    pub scripts: Vec<String>,
}

impl Problem {
    pub fn goal(&self) -> Option<&Formula> {
        match &self.kind {
            ProblemKind::Prove { goal } => Some(goal),
            ProblemKind::ModelSearch { .. } => None,
        }
    }

    pub fn kind_label(&self) -> &'static str {
        match self.kind {
            ProblemKind::Prove { .. } => "prove",
            ProblemKind::ModelSearch { .. } => "model-search",
        }
    }
}

fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|x| !x.is_empty());
    out
}

fn parse_sizes(s: &str) -> Option<RangeInclusive<usize>> {
    let (a, b) = s.split_once("..")?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    Some(a..=b)
}

struct Lines<'a> {
    file: &'a str,
    line: usize,
}

impl Lines<'_> {
    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, CorpusError> {
        Err(CorpusError::Syntax { file: self.file.to_string(), line: self.line, msg: msg.into() })
    }

    fn formula(&self, p: &Parser<'_>, src: &str) -> Result<Formula, CorpusError> {
        let f = p.formula(src).map_err(|source| CorpusError::Formula { file: self.file.to_string(), line: self.line, source })?;
        if let Some(v) = f.free_vars().into_iter().next() {
            return self.syntax(format!("formula has free variable `{v}`"));
        }
        Ok(f)
    }
}

/// Parses one problem file. `file` names the source in error messages.
pub fn parse_problem(file: &str, text: &str) -> Result<Problem, CorpusError> {
    let mut sig = Signature::geometry();
    let mut at = Lines { file, line: 0 };
    let mut name = None;
    let mut kind = None;
    let mut logic = Logic::default();
    let mut axioms: Vec<(String, Formula)> = Vec::new();
    let mut definitions = Vec::new();
    let mut goal = None;
    let mut satisfy = Vec::new();
    let mut falsify = Vec::new();
    let mut sizes = None;
    let mut expected = None;
    let mut scripts = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        at.line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (word, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match word {
            "problem" => name = Some(rest.to_string()),
            "kind" => {
                kind = Some(match rest {
                    "prove" => "prove",
                    "model-search" => "model-search",
                    _ => return at.syntax(format!("unknown kind `{rest}`")),
                })
            }
            "logic" => {
                logic = match rest {
                    "classical" => Logic::Classical,
                    "constructive" => Logic::Constructive,
                    _ => return at.syntax(format!("unknown logic `{rest}`")),
                }
            }
            "constant" => {
                for c in split_list(rest) {
                    if sig.add_constant(c).is_err() {
                        return at.syntax(format!("`{c}` is already declared"));
                    }
                }
            }
            "define" => {
                let Some((head, body)) = rest.split_once(":=") else {
                    return at.syntax("expected `define P(x,..) := formula`");
                };
                let head = head.trim();
                let Some((pred, params)) = head.strip_suffix(')').and_then(|h| h.split_once('(')) else {
                    return at.syntax(format!("`{head}` is not of the form P(x,..)"));
                };
                let params: Vec<String> = split_list(params).into_iter().map(String::from).collect();
                match sig.kind(pred) {
                    Some(SymbolKind::Defined(n)) if n == params.len() => {}
                    None => {
                        sig.add_defined(pred, params.len()).expect("checked undeclared");
                    }
                    _ => return at.syntax(format!("`{pred}` cannot be defined here")),
                }
                let body = Parser::new(&sig).formula(body).map_err(|source| CorpusError::Formula { file: file.to_string(), line: at.line, source })?;
                let def = DefinedPredicate::new(pred, params, body).map_err(|e| CorpusError::Syntax { file: file.to_string(), line: at.line, msg: e.to_string() })?;
                definitions.retain(|d: &DefinedPredicate| d.name != def.name);
                definitions.push(def);
            }
            "axiom" => {
                let (axiom_name, formula) = match rest.split_once(':') {
                    Some((n, f)) => (n.trim(), at.formula(&Parser::new(&sig), f)?),
                    None => match builtin_axiom(rest) {
                        Some(f) => (rest, f),
                        None => return at.syntax(format!("no built-in axiom `{rest}`; write `axiom {rest}: <formula>`")),
                    },
                };
                if axiom_name.is_empty() || axiom_name.contains(char::is_whitespace) {
                    return at.syntax(format!("bad axiom name `{axiom_name}`"));
                }
                if axioms.iter().any(|(n, _)| n == axiom_name) {
                    return at.syntax(format!("axiom `{axiom_name}` declared twice"));
                }
                axioms.push((axiom_name.to_string(), formula));
            }
            "goal" => goal = Some(at.formula(&Parser::new(&sig), rest)?),
            "satisfy" | "falsify" => {
                let mut items = Vec::new();
                for item in split_list(rest) {
                    let entry = match axioms.iter().find(|(n, _)| n == item) {
                        Some(a) => a.clone(),
                        None => match builtin_axiom(item) {
                            Some(f) => (item.to_string(), f),
                            None => {
                                let f = at.formula(&Parser::new(&sig), item)?;
                                (f.to_string(), f)
                            }
                        },
                    };
                    items.push(entry);
                }
                let target = if word == "satisfy" { &mut satisfy } else { &mut falsify };
                target.extend(items);
            }
            "sizes" => match parse_sizes(rest) {
                Some(r) if *r.start() >= 1 && r.start() <= r.end() => sizes = Some(r),
                _ => return at.syntax(format!("bad size range `{rest}`; expected a..b with 1 <= a <= b")),
            },
            "expect" => {
                expected = Some(match rest {
                    "refutation" => Expected::Refutation,
                    "no-refutation" => Expected::NoRefutation,
                    "found" => Expected::Found,
                    "exhausted" => Expected::Exhausted,
                    _ => return at.syntax(format!("unknown outcome `{rest}`")),
                })
            }
            "script" => scripts.extend(split_list(rest).into_iter().map(String::from)),
            _ => return at.syntax(format!("unknown directive `{word}`")),
        }
    }

    let missing = |what: &'static str| CorpusError::Missing { file: file.to_string(), what };
    let name = name.ok_or_else(|| missing("problem"))?;
    let kind_word = kind.ok_or_else(|| missing("kind"))?;
    let kind = match kind_word {
        "prove" => {
            if !satisfy.is_empty() || !falsify.is_empty() || sizes.is_some() {
                return Err(CorpusError::Invalid { file: file.to_string(), msg: "prove problems take no satisfy/falsify/sizes".into() });
            }
            ProblemKind::Prove { goal: goal.ok_or_else(|| missing("goal"))? }
        }
        _ => {
            if goal.is_some() {
                return Err(CorpusError::Invalid { file: file.to_string(), msg: "model-search problems take no goal".into() });
            }
            ProblemKind::ModelSearch { satisfy, falsify, sizes: sizes.ok_or_else(|| missing("sizes"))? }
        }
    };
    let expected = expected.ok_or_else(|| missing("expect"))?;
    let consistent = match kind {
        ProblemKind::Prove { .. } => matches!(expected, Expected::Refutation | Expected::NoRefutation),
        ProblemKind::ModelSearch { .. } => matches!(expected, Expected::Found | Expected::Exhausted),
    };
    if !consistent {
        return Err(CorpusError::Invalid { file: file.to_string(), msg: format!("`expect {}` does not fit kind {kind_word}", expected.label()) });
    }
    if !definitions.iter().any(|d| d.name == "Con") {
        definitions.push(DefinedPredicate::convergence());
    }
    Ok(Problem { name, kind, logic, axioms, definitions, signature: sig, expected, scripts })
}
