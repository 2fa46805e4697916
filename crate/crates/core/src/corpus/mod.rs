//! The bundled problems and proof scripts, and the reproduction run over
//! them.

mod problem;
mod run;

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::nd::{parse_script, NdScript, ScriptError};
use crate::syntax::{parse_formula, DefinedPredicate, Formula, ParseError, Signature};

pub use problem::{parse_problem, Expected, Logic, Problem, ProblemKind};
pub use run::{
    cross_check, render_text, run_all, Agreement, CrossCheck, CrossSearch, Headline, Occurrence, Redundancy, Row, RowDetail, RunConfig,
    RunReport,
};

/// The named axioms, in the order they are usually listed.
pub const AXIOMS: &[(&str, &str)] = &[
    ("I.5", "forall l. ~Undir(l,l)"),
    ("I.6", "forall l. forall m. forall n. (Undir(l,m) -> Undir(l,n) | Undir(m,n))"),
    (
        "I.7",
        "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,n) & Undir(l,rev(n)) | Undir(m,n) & Undir(m,rev(n)))",
    ),
    ("I.8", "forall l. forall m. (Undir(l,m) | Undir(l,rev(m)))"),
    ("SYM", "forall l. forall m. (Undir(l,rev(m)) -> Undir(m,rev(l)))"),
    ("w1", "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,n) | Undir(m,n))"),
    ("w2", "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,n) | Undir(m,rev(n)))"),
    ("w3", "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,rev(n)) | Undir(m,n))"),
    ("w4", "forall l. forall m. forall n. (Undir(l,m) & Undir(l,rev(m)) -> Undir(l,rev(n)) | Undir(m,rev(n)))"),
];

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../../corpus/", $name)))),*]
    };
}

/// Bundled problem files as (file name, text).
pub const PROBLEM_FILES: &[(&str, &str)] =
    corpus_files!["G0.p", "G1.p", "G2.p", "G3.p", "G4.p", "G5.p", "G6.p", "G7.p", "G8.p", "M1.p", "M2.p", "M3.p"];

/// Bundled proof scripts as (file name, text).
pub const SCRIPT_FILES: &[(&str, &str)] =
    corpus_files!["S1.nd", "S2.nd", "S3.nd", "S4.nd", "S5.nd", "S6.nd", "S7.nd", "S8.nd"];

/// Bundled but not part of the registry: a prove problem that should fail.
pub const EXTRA_FILES: &[(&str, &str)] = corpus_files!["I5-implies-I6.p"];

pub fn builtin_axiom(name: &str) -> Option<Formula> {
    AXIOMS.iter().find(|(n, _)| *n == name).map(|(_, s)| parse_formula(s).expect("built-in axiom parses"))
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}:{line}: {msg}")]
    Syntax { file: String, line: usize, msg: String },
    #[error("{file}:{line}: {source}")]
    Formula {
        file: String,
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("{file}: missing `{what}` line")]
    Missing { file: String, what: &'static str },
    #[error("{file}: {msg}")]
    Invalid { file: String, msg: String },
    #[error("{file}: {source}")]
    Script {
        file: String,
        #[source]
        source: ScriptError,
    },
    #[error("axiom `{name}` is given two different formulas")]
    AxiomConflict { name: String },
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A script slot: the parsed script, or why its file did not parse. Broken
/// scripts stay in the registry so a run reports them instead of aborting.
pub type ScriptEntry = Result<NdScript, String>;

#[derive(Debug, Clone)]
pub struct Registry {
    pub axioms: BTreeMap<String, Formula>,
    pub definitions: Vec<DefinedPredicate>,
    pub problems: BTreeMap<String, Problem>,
    pub scripts: BTreeMap<String, ScriptEntry>,
}

/// The built-in registry.
pub fn load_corpus() -> Result<Registry, CorpusError> {
    Registry::from_sources(PROBLEM_FILES, SCRIPT_FILES)
}

fn stem(file: &str) -> &str {
    let base = file.rsplit(['/', '\\']).next().unwrap_or(file);
    base.rsplit_once('.').map_or(base, |(s, _)| s)
}

impl Registry {
    pub fn empty() -> Self {
        let axioms = AXIOMS.iter().map(|(n, _)| (n.to_string(), builtin_axiom(n).expect("listed"))).collect();
        Registry { axioms, definitions: vec![DefinedPredicate::convergence()], problems: BTreeMap::new(), scripts: BTreeMap::new() }
    }

    /// Builds a registry from (file name, text) pairs. Problem files must
    /// parse; script files that do not are kept as broken entries.
    pub fn from_sources(problems: &[(&str, &str)], scripts: &[(&str, &str)]) -> Result<Registry, CorpusError> {
        let mut r = Registry::empty();
        let mut seen = 0;
        for (file, text) in problems {
            let p = parse_problem(file, text)?;
            if r.problems.contains_key(&p.name) {
                return Err(CorpusError::Duplicate(p.name));
            }
            r.insert_problem(p)?;
        }
        for (file, text) in scripts {
            let name = r.insert_script_source(file, text);
            if r.scripts.len() != seen + 1 {
                return Err(CorpusError::Duplicate(name));
            }
            seen += 1;
        }
        Ok(r)
    }

    /// Adds or replaces a problem. Its axioms join the registry; an axiom
    /// name already bound to a different formula is an error.
    pub fn insert_problem(&mut self, p: Problem) -> Result<(), CorpusError> {
        for (name, f) in &p.axioms {
            match self.axioms.get(name) {
                Some(known) if !known.alpha_eq(f) => return Err(CorpusError::AxiomConflict { name: name.clone() }),
                Some(_) => {}
                None => {
                    self.axioms.insert(name.clone(), f.clone());
                }
            }
        }
        for d in &p.definitions {
            if !self.definitions.iter().any(|k| k.name == d.name) {
                self.definitions.push(d.clone());
            }
        }
        self.problems.insert(p.name.clone(), p);
        Ok(())
    }

    /// Adds or replaces a script from source and returns its name (the
    /// script header, or the file stem when the file does not parse).
    pub fn insert_script_source(&mut self, file: &str, text: &str) -> String {
        match parse_script(text, &Signature::geometry()) {
            Ok(s) => {
                let name = s.name.clone();
                self.scripts.insert(name.clone(), Ok(s));
                name
            }
            Err(e) => {
                let name = stem(file).to_string();
                self.scripts.insert(name.clone(), Err(e.to_string()));
                name
            }
        }
    }

    pub fn load_problem_file(&mut self, path: &Path) -> Result<String, CorpusError> {
        let text = read(path)?;
        let p = parse_problem(&path.display().to_string(), &text)?;
        let name = p.name.clone();
        self.insert_problem(p)?;
        Ok(name)
    }

    pub fn load_script_file(&mut self, path: &Path) -> Result<String, CorpusError> {
        let text = read(path)?;
        Ok(self.insert_script_source(&path.display().to_string(), &text))
    }

    pub fn axioms_of(&self, problem: &str) -> Option<Vec<(String, Formula)>> {
        self.problems.get(problem).map(|p| p.axioms.clone())
    }

    pub fn script(&self, name: &str) -> Option<&NdScript> {
        self.scripts.get(name).and_then(|s| s.as_ref().ok())
    }
}

pub fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests;
