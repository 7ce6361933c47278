//! Finite relational signatures.
//!
//! A signature is an ordered list of relation symbols together with
//! *relators*: coordinate maps `from -> to` that every structure must be
//! closed under. A relator with `coords = [c_0, .., c_{k-1}]` sends a tuple
//! `t` of `from` to `(t[c_0], .., t[c_{k-1}])`, which must then lie in `to`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A tuple of universe elements.
pub type Tuple = SmallVec<[u32; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relator {
    pub from: String,
    pub to: String,
    pub coords: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<RelationSymbol>,
    relators: Vec<Relator>,
    /// `(from, to)` symbol indices, parallel to `relators`.
    links: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SignatureFile {
    symbols: Vec<RelationSymbol>,
    #[serde(default)]
    relators: Vec<Relator>,
}

impl Signature {
    pub fn new(symbols: Vec<RelationSymbol>, relators: Vec<Relator>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.arity == 0 {
                return Err(Error::Signature(format!("symbol `{}` has arity 0", s.name)));
            }
            if !is_identifier(&s.name) || s.name == "in" || s.name == "true" || s.name == "false" {
                return Err(Error::Signature(format!("`{}` is not a valid symbol name", s.name)));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(Error::Signature(format!("duplicate symbol `{}`", s.name)));
            }
        }
        if symbols.len() > u16::MAX as usize {
            return Err(Error::Signature("too many symbols".into()));
        }
        let find = |name: &str| {
            symbols
                .iter()
                .position(|s| s.name == name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };
        let mut links = Vec::with_capacity(relators.len());
        for r in &relators {
            let from = find(&r.from)?;
            let to = find(&r.to)?;
            if r.coords.len() != symbols[to].arity {
                return Err(Error::Signature(format!(
                    "relator {} -> {} has {} coordinates but `{}` has arity {}",
                    r.from,
                    r.to,
                    r.coords.len(),
                    r.to,
                    symbols[to].arity
                )));
            }
            if let Some(&c) = r.coords.iter().find(|&&c| c >= symbols[from].arity) {
                return Err(Error::Signature(format!(
                    "relator {} -> {} uses coordinate {} but `{}` has arity {}",
                    r.from, r.to, c, r.from, symbols[from].arity
                )));
            }
            links.push((from, to));
        }
        Ok(Signature {
            symbols,
            relators,
            links,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SignatureFile = serde_json::from_str(text)?;
        Signature::new(file.symbols, file.relators)
    }

    pub fn to_json(&self) -> String {
        let file = SignatureFile {
            symbols: self.symbols.clone(),
            relators: self.relators.clone(),
        };
        serde_json::to_string(&file).expect("signature serializes")
    }

    pub fn symbols(&self) -> &[RelationSymbol] {
        &self.symbols
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    /// Relators paired with their resolved `(from, to)` symbol indices.
    pub fn links(&self) -> impl Iterator<Item = (&Relator, usize, usize)> {
        self.relators.iter().zip(&self.links).map(|(r, &(f, t))| (r, f, t))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.symbols[symbol].name
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Image of `t` under the coordinate map of `relator`.
    pub fn induced_tuple(&self, relator: &Relator, t: &[u32]) -> Result<Tuple> {
        let from = self
            .symbol_index(&relator.from)
            .ok_or_else(|| Error::UnknownSymbol(relator.from.clone()))?;
        if t.len() != self.arity(from) {
            return Err(Error::Arity {
                symbol: relator.from.clone(),
                expected: self.arity(from),
                found: t.len(),
            });
        }
        Ok(relator.coords.iter().map(|&c| t[c]).collect())
    }

    /// One unary symbol `W` and no relators.
    pub fn unary() -> Self {
        Signature::new(vec![sym("W", 1)], vec![]).unwrap()
    }

    /// One binary symbol `E` and no relators (directed graphs with loops).
    pub fn binary() -> Self {
        Signature::new(vec![sym("E", 2)], vec![]).unwrap()
    }

    /// Digraphs `E` whose edge sources lie in the marked vertex set `W`.
    pub fn domain_digraph() -> Self {
        Signature::new(
            vec![sym("E", 2), sym("W", 1)],
            vec![Relator {
                from: "E".into(),
                to: "W".into(),
                coords: vec![0],
            }],
        )
        .unwrap()
    }

    /// A binary `E` closed under swapping coordinates (undirected graphs with loops).
    pub fn undirected_graph() -> Self {
        Signature::new(
            vec![sym("E", 2)],
            vec![Relator {
                from: "E".into(),
                to: "E".into(),
                coords: vec![1, 0],
            }],
        )
        .unwrap()
    }
}

fn sym(name: &str, arity: usize) -> RelationSymbol {
    RelationSymbol {
        name: name.into(),
        arity,
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
