use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is already declared")]
    Duplicate(String),
    #[error("the signature must declare {0}")]
    MissingRequired(&'static str),
}

/// What kind of symbol a name denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate(usize),
    /// A predicate introduced by definition; must be expanded before proving.
    Defined(usize),
    Function(usize),
    Constant,
}

/// Predicates, function symbols and constants of a problem. Names are unique
/// across all kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    predicates: Vec<(String, usize)>,
    defined: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Signature {
    /// Just `Undir/2` and `rev/1`.
    pub fn minimal() -> Self {
        Signature {
            predicates: vec![("Undir".into(), 2)],
            defined: Vec::new(),
            functions: vec![("rev".into(), 1)],
            constants: Vec::new(),
        }
    }

    /// The ordered-affine-geometry signature: the five basic relations, the
    /// four constructions, and the defined convergence predicate `Con/2`.
    pub fn geometry() -> Self {
        let mut sig = Signature::minimal();
        for p in ["DiPt", "DiLn", "LApt", "LCon"] {
            sig.predicates.push((p.into(), 2));
        }
        for f in ["ln", "pt", "par"] {
            sig.functions.push((f.into(), 2));
        }
        sig.defined.push(("Con".into(), 2));
        sig
    }

    pub fn kind(&self, name: &str) -> Option<SymbolKind> {
        if let Some((_, n)) = self.predicates.iter().find(|(p, _)| p == name) {
            return Some(SymbolKind::Predicate(*n));
        }
        if let Some((_, n)) = self.defined.iter().find(|(p, _)| p == name) {
            return Some(SymbolKind::Defined(*n));
        }
        if let Some((_, n)) = self.functions.iter().find(|(f, _)| f == name) {
            return Some(SymbolKind::Function(*n));
        }
        if self.constants.iter().any(|c| c == name) {
            return Some(SymbolKind::Constant);
        }
        None
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.kind(name).is_some()
    }

    pub fn is_constant(&self, name: &str) -> bool {
        matches!(self.kind(name), Some(SymbolKind::Constant))
    }

    pub fn is_defined_predicate(&self, name: &str) -> bool {
        matches!(self.kind(name), Some(SymbolKind::Defined(_)))
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.fresh(name)?;
        self.predicates.push((name.into(), arity));
        Ok(())
    }

    pub fn add_defined(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.fresh(name)?;
        self.defined.push((name.into(), arity));
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        self.fresh(name)?;
        self.functions.push((name.into(), arity));
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SignatureError> {
        self.fresh(name)?;
        self.constants.push(name.into());
        Ok(())
    }

    fn fresh(&self, name: &str) -> Result<(), SignatureError> {
        if self.is_declared(name) {
            Err(SignatureError::Duplicate(name.into()))
        } else {
            Ok(())
        }
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    pub fn defined(&self) -> &[(String, usize)] {
        &self.defined
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = std::collections::BTreeSet::new();
        let names = self
            .predicates
            .iter()
            .chain(&self.defined)
            .chain(&self.functions)
            .map(|(n, _)| n)
            .chain(&self.constants);
        for n in names {
            if !seen.insert(n) {
                return Err(SignatureError::Duplicate(n.clone()));
            }
        }
        if !self.predicates.contains(&("Undir".into(), 2)) {
            return Err(SignatureError::MissingRequired("Undir/2"));
        }
        if !self.functions.contains(&("rev".into(), 1)) {
            return Err(SignatureError::MissingRequired("rev/1"));
        }
        Ok(())
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::geometry()
    }
}
