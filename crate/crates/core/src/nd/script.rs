//! Text format for proof scripts.
//!
//! ```text
//! script S4
//! problem G1
//! uses S1, S2            # optional
//! goal forall l. ...
//! 1. Undir(l,m) & Undir(l,rev(m)) ; Hypothesis
//! 2. Undir(l,m) ; AndElimLeft premises=[1]
//! 3. Undir(l,m) -> Undir(l,n) | Undir(m,n) ; AxiomInstance(I.6) inst={l:=l, m:=m, n:=n}
//! ```

use std::fmt;

use thiserror::Error;

use super::{NdRule, NdScript, NdStep};
use crate::syntax::{ParseError, Parser, Signature, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError::Syntax { line, msg: msg.into() })
}

/// Splits at commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
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
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn parse_ids(line: usize, s: &str) -> Result<Vec<usize>, ScriptError> {
    split_top(s)
        .into_iter()
        .map(|x| x.parse().or_else(|_| syntax(line, format!("`{x}` is not a step id"))))
        .collect()
}

fn parse_inst(line: usize, s: &str, p: &Parser<'_>) -> Result<Substitution, ScriptError> {
    let mut inst = Substitution::new();
    for binding in split_top(s) {
        let Some((var, term)) = binding.split_once(":=") else {
            return syntax(line, format!("`{binding}` is not of the form x:=t"));
        };
        let var = var.trim();
        if var.is_empty() || !var.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            return syntax(line, format!("`{var}` is not a variable"));
        }
        let t = p.term(term).map_err(|source| ScriptError::Formula { line, source })?;
        if inst.insert(var, t).is_some() {
            return syntax(line, format!("`{var}` bound twice"));
        }
    }
    Ok(inst)
}

fn parse_step(line: usize, text: &str, p: &Parser<'_>) -> Result<NdStep, ScriptError> {
    let Some((head, justification)) = text.split_once(';') else {
        return syntax(line, "expected `<id>. <formula> ; <rule> ...`");
    };
    let Some((id, formula)) = head.split_once('.') else {
        return syntax(line, "expected a step id followed by `.`");
    };
    let id: usize = id.trim().parse().or_else(|_| syntax(line, format!("`{}` is not a step id", id.trim())))?;
    let formula = p.formula(formula).map_err(|source| ScriptError::Formula { line, source })?;

    let rest = justification.trim();
    let name_end = rest.find(|c: char| c == '(' || c.is_whitespace()).unwrap_or(rest.len());
    let name = &rest[..name_end];
    let mut rest = &rest[name_end..];
    let mut arg = None;
    if let Some(r) = rest.strip_prefix('(') {
        let Some(close) = r.find(')') else {
            return syntax(line, "unclosed `(` after rule name");
        };
        arg = Some(r[..close].trim());
        rest = &r[close + 1..];
    }
    let Some(rule) = NdRule::from_name(name, arg) else {
        return syntax(line, format!("unknown rule `{name}`"));
    };

    let mut step = NdStep { id, formula, rule, premises: Vec::new(), inst: Substitution::new(), discharge: Vec::new() };
    let mut rest = rest.trim_start();
    while !rest.is_empty() {
        let Some((key, value)) = rest.split_once('=') else {
            return syntax(line, format!("unexpected `{rest}`"));
        };
        let value = value.trim_start();
        let (open, close) = match value.chars().next() {
            Some('[') => ('[', ']'),
            Some('{') => ('{', '}'),
            _ => return syntax(line, format!("`{}` needs a bracketed value", key.trim())),
        };
        let Some(end) = value.find(close) else {
            return syntax(line, format!("unclosed `{open}`"));
        };
        let inner = &value[1..end];
        match (key.trim(), open) {
            ("premises", '[') => step.premises = parse_ids(line, inner)?,
            ("discharge", '[') => step.discharge = parse_ids(line, inner)?,
            ("inst", '{') => step.inst = parse_inst(line, inner, p)?,
            (k, _) => return syntax(line, format!("unknown field `{k}`")),
        }
        rest = value[end + 1..].trim_start();
    }
    Ok(step)
}

/// Parses a script; identifiers not declared in `sig` are variables.
pub fn parse_script(text: &str, sig: &Signature) -> Result<NdScript, ScriptError> {
    let p = Parser::new(sig);
    let (mut name, mut problem, mut goal) = (None, None, None);
    let mut uses = Vec::new();
    let mut steps = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (word, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match word {
            "script" => name = Some(rest.to_string()),
            "problem" => problem = Some(rest.to_string()),
            "uses" => uses.extend(split_top(rest).into_iter().filter(|s| !s.is_empty()).map(String::from)),
            "goal" => goal = Some(p.formula(rest).map_err(|source| ScriptError::Formula { line, source })?),
            _ if word.starts_with(|c: char| c.is_ascii_digit()) => steps.push(parse_step(line, content, &p)?),
            _ => return syntax(line, format!("unknown directive `{word}`")),
        }
    }
    Ok(NdScript {
        name: name.ok_or(ScriptError::MissingHeader("script"))?,
        problem: problem.ok_or(ScriptError::MissingHeader("problem"))?,
        uses,
        goal: goal.ok_or(ScriptError::MissingHeader("goal"))?,
        steps,
    })
}

fn fmt_ids(ids: &[usize]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NdStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} ; {}", self.id, self.formula, self.rule.name())?;
        if let NdRule::AxiomInstance(name) = &self.rule {
            write!(f, "({name})")?;
        }
        if !self.premises.is_empty() {
            write!(f, " premises=[{}]", fmt_ids(&self.premises))?;
        }
        if !self.inst.is_empty() {
            write!(f, " inst={}", self.inst)?;
        }
        if !self.discharge.is_empty() {
            write!(f, " discharge=[{}]", fmt_ids(&self.discharge))?;
        }
        Ok(())
    }
}

impl fmt::Display for NdScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "script {}", self.name)?;
        writeln!(f, "problem {}", self.problem)?;
        if !self.uses.is_empty() {
            writeln!(f, "uses {}", self.uses.join(", "))?;
        }
        writeln!(f, "goal {}", self.goal)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
