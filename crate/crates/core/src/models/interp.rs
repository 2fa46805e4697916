use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::ModelError;

/// Table of an extra function symbol (e.g. a Skolem function). Entry index
/// is the argument tuple read as a base-`size` number, first argument most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FnTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// A finite structure for the `Undir`/`rev` signature over `{0, …, size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    size: usize,
    rev: Vec<usize>,
    undir: Vec<bool>,
    consts: BTreeMap<String, usize>,
    functions: BTreeMap<String, FnTable>,
}

impl Interpretation {
    pub fn new(size: usize, rev: Vec<usize>, undir_pairs: &[(usize, usize)]) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::Malformed("domain must be non-empty".into()));
        }
        if rev.len() != size || rev.iter().any(|&x| x >= size) {
            return Err(ModelError::Malformed(format!("rev table must map each of 0..{size} into 0..{size}")));
        }
        let mut undir = vec![false; size * size];
        for &(a, b) in undir_pairs {
            if a >= size || b >= size {
                return Err(ModelError::Malformed(format!("undir pair ({a},{b}) out of range")));
            }
            undir[a * size + b] = true;
        }
        Ok(Interpretation { size, rev, undir, consts: BTreeMap::new(), functions: BTreeMap::new() })
    }

    pub(crate) fn from_tables(size: usize, rev: Vec<usize>, undir: Vec<bool>) -> Self {
        debug_assert_eq!(undir.len(), size * size);
        Interpretation { size, rev, undir, consts: BTreeMap::new(), functions: BTreeMap::new() }
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: usize) -> Result<Self, ModelError> {
        if value >= self.size {
            return Err(ModelError::Malformed(format!("constant value {value} out of range")));
        }
        self.consts.insert(name.into(), value);
        Ok(self)
    }

    pub fn with_function(mut self, name: impl Into<String>, arity: usize, values: Vec<usize>) -> Result<Self, ModelError> {
        let name = name.into();
        let expected = self.size.checked_pow(arity as u32).ok_or_else(|| ModelError::Malformed("table too large".into()))?;
        if values.len() != expected || values.iter().any(|&v| v >= self.size) {
            return Err(ModelError::Malformed(format!("table for {name}/{arity} must have {expected} in-range entries")));
        }
        self.functions.insert(name, FnTable { arity, values });
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rev(&self, x: usize) -> usize {
        self.rev[x]
    }

    pub fn rev_table(&self) -> &[usize] {
        &self.rev
    }

    pub fn undir(&self, a: usize, b: usize) -> bool {
        self.undir[a * self.size + b]
    }

    pub fn undir_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        (0..n * n).filter(|&k| self.undir[k]).map(|k| (k / n, k % n)).collect()
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.consts.get(name).copied()
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.consts
    }

    pub fn function(&self, name: &str) -> Option<&FnTable> {
        self.functions.get(name)
    }

    pub fn functions(&self) -> &BTreeMap<String, FnTable> {
        &self.functions
    }

    /// Value of an extra function symbol, `None` when undeclared or applied
    /// at the wrong arity.
    pub fn apply(&self, name: &str, args: &[usize]) -> Option<usize> {
        let table = self.functions.get(name)?;
        if table.arity != args.len() {
            return None;
        }
        let index = args.iter().fold(0, |acc, &a| acc * self.size + a);
        table.values.get(index).copied()
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size={}", self.size)?;
        f.write_str("rev:")?;
        for (i, r) in self.rev.iter().enumerate() {
            write!(f, " {i}->{r}")?;
        }
        f.write_str("\nundir: {")?;
        for (i, (a, b)) in self.undir_pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str("}")?;
        if !self.consts.is_empty() {
            f.write_str("\nconst:")?;
            for (c, v) in &self.consts {
                write!(f, " {c}={v}")?;
            }
        }
        for (name, table) in &self.functions {
            write!(f, "\nfn {name}/{}:", table.arity)?;
            for (index, v) in table.values.iter().enumerate() {
                let mut args = vec![0; table.arity];
                let mut rest = index;
                for slot in args.iter_mut().rev() {
                    *slot = rest % self.size;
                    rest /= self.size;
                }
                let args: Vec<String> = args.iter().map(usize::to_string).collect();
                write!(f, " {}->{v}", args.join(","))?;
            }
        }
        Ok(())
    }
}

fn bad(msg: impl Into<String>) -> ModelError {
    ModelError::Malformed(msg.into())
}

fn number(s: &str) -> Result<usize, ModelError> {
    s.trim().parse().map_err(|_| bad(format!("expected a number, found `{s}`")))
}

impl FromStr for Interpretation {
    type Err = ModelError;

    /// Accepts exactly the format produced by `Display`; blank lines and
    /// `#` comments are ignored.
    fn from_str(s: &str) -> Result<Self, ModelError> {
        let mut size = None;
        let mut rev = None;
        let mut pairs = None;
        let mut consts = Vec::new();
        let mut functions = Vec::new();
        for raw in s.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("size=") {
                size = Some(number(rest)?);
            } else if let Some(rest) = line.strip_prefix("rev:") {
                let mut table = BTreeMap::new();
                for entry in rest.split_whitespace() {
                    let (a, b) = entry.split_once("->").ok_or_else(|| bad(format!("bad rev entry `{entry}`")))?;
                    table.insert(number(a)?, number(b)?);
                }
                rev = Some(table);
            } else if let Some(rest) = line.strip_prefix("undir:") {
                let body = rest.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(|| bad("undir set must be braced"))?;
                let mut out = Vec::new();
                let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
                for chunk in compact.split("),").filter(|c| !c.is_empty()) {
                    let inner = chunk.trim_start_matches('(').trim_end_matches(')');
                    let (a, b) = inner.split_once(',').ok_or_else(|| bad(format!("bad undir pair `{chunk}`")))?;
                    out.push((number(a)?, number(b)?));
                }
                pairs = Some(out);
            } else if let Some(rest) = line.strip_prefix("const:") {
                for entry in rest.split_whitespace() {
                    let (c, v) = entry.split_once('=').ok_or_else(|| bad(format!("bad const entry `{entry}`")))?;
                    consts.push((c.to_string(), number(v)?));
                }
            } else if let Some(rest) = line.strip_prefix("fn ") {
                let (head, body) = rest.split_once(':').ok_or_else(|| bad("fn line needs `:`"))?;
                let (name, arity) = head.trim().split_once('/').ok_or_else(|| bad("fn line needs name/arity"))?;
                let arity = number(arity)?;
                let mut entries = Vec::new();
                for entry in body.split_whitespace() {
                    let (args, v) = entry.split_once("->").ok_or_else(|| bad(format!("bad fn entry `{entry}`")))?;
                    let args = args.split(',').filter(|a| !a.is_empty()).map(number).collect::<Result<Vec<_>, _>>()?;
                    entries.push((args, number(v)?));
                }
                functions.push((name.to_string(), arity, entries));
            } else {
                return Err(bad(format!("unrecognized line `{line}`")));
            }
        }
        let size = size.ok_or_else(|| bad("missing `size=`"))?;
        let rev = rev.ok_or_else(|| bad("missing `rev:`"))?;
        if rev.len() != size || rev.keys().copied().ne(0..size) {
            return Err(bad("rev table must list every element exactly once"));
        }
        let mut m = Interpretation::new(size, rev.into_values().collect(), &pairs.ok_or_else(|| bad("missing `undir:`"))?)?;
        for (c, v) in consts {
            m = m.with_constant(c, v)?;
        }
        for (name, arity, entries) in functions {
            let mut values = vec![usize::MAX; size.pow(arity as u32)];
            for (args, v) in entries {
                if args.len() != arity || args.iter().any(|&a| a >= size) {
                    return Err(bad(format!("bad argument tuple for {name}")));
                }
                values[args.iter().fold(0, |acc, &a| acc * size + a)] = v;
            }
            m = m.with_function(name, arity, values)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format() {
        let m = Interpretation::new(3, vec![1, 2, 0], &[(0, 1), (1, 0)]).unwrap().with_constant("c0", 2).unwrap();
        let text = m.to_string();
        assert_eq!(text, "size=3\nrev: 0->1 1->2 2->0\nundir: {(0,1),(1,0)}\nconst: c0=2");
        assert_eq!(text.parse::<Interpretation>().unwrap(), m);
    }

    #[test]
    fn functions_round_trip() {
        let m = Interpretation::new(2, vec![0, 1], &[]).unwrap().with_function("sk0", 2, vec![1, 0, 0, 1]).unwrap();
        assert_eq!(m.apply("sk0", &[0, 0]), Some(1));
        assert_eq!(m.apply("sk0", &[1, 1]), Some(1));
        let text = m.to_string();
        assert!(text.ends_with("fn sk0/2: 0,0->1 0,1->0 1,0->0 1,1->1"), "{text}");
        assert_eq!(text.parse::<Interpretation>().unwrap(), m);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Interpretation::new(2, vec![0, 2], &[]).is_err());
        assert!(Interpretation::new(2, vec![0, 1], &[(0, 2)]).is_err());
        assert!("size=2\nrev: 0->1\nundir: {}".parse::<Interpretation>().is_err());
        assert!("size=2\nrev: 0->1 1->0".parse::<Interpretation>().is_err());
    }
}
