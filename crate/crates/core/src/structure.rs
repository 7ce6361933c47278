//! Finite structures over a signature, the substructure lattice, and
//! kinship-class enumeration.
//!
//! A structure on the universe `{0, .., n-1}` stores, per symbol, the set of
//! tuples it contains as a bitmask over the lexicographically ranked tuple
//! space `n^arity`. Structures are totally ordered by comparing these masks as
//! integers, symbol by symbol in declaration order; this order drives
//! enumeration, canonical forms and class numbering.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::signature::{Signature, Tuple};

/// Default upper bound on the number of candidate structures enumerated.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// The first relator closure failure found in a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub relator: usize,
    pub from: String,
    pub to: String,
    pub tuple: Tuple,
    pub image: Tuple,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "relator #{} ({} -> {}) sends {:?} to {:?}, which is missing from {}",
            self.relator,
            self.from,
            self.to,
            self.tuple.as_slice(),
            self.image.as_slice(),
            self.to
        )
    }
}

/// Number of tuples in `n^arity`, or `None` on overflow.
pub fn tuple_count(n: usize, arity: usize) -> Option<usize> {
    let mut c: usize = 1;
    for _ in 0..arity {
        c = c.checked_mul(n)?;
    }
    Some(c)
}

/// Lexicographic rank of `t` in `n^len(t)`.
pub fn tuple_rank(t: &[u32], n: usize) -> usize {
    t.iter().fold(0, |acc, &e| acc * n + e as usize)
}

pub fn tuple_unrank(mut rank: usize, n: usize, arity: usize) -> Tuple {
    let mut t = Tuple::from_elem(0, arity);
    for slot in t.iter_mut().rev() {
        *slot = (rank % n) as u32;
        rank /= n;
    }
    t
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Bits, op: impl Fn(u64, u64) -> u64) -> Bits {
        Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    /// Integer comparison, most significant word first.
    fn cmp_as_int(&self, other: &Bits) -> Ordering {
        self.words.iter().rev().cmp(other.words.iter().rev())
    }
}

/// A structure on the universe `{0, .., n-1}`.
///
/// Tuples are always in range and duplicate-free; relator closure is *not*
/// enforced on construction, see [`Structure::validate`].
#[derive(Clone)]
pub struct Structure {
    sig: Arc<Signature>,
    n: usize,
    rels: Vec<Bits>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rels == other.rels && (Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig)
    }
}

impl Eq for Structure {}

impl Hash for Structure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.rels.hash(state);
    }
}

impl PartialOrd for Structure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Structure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            self.rels
                .iter()
                .zip(&other.rels)
                .map(|(a, b)| a.cmp_as_int(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

#[derive(Deserialize)]
struct StructureFile {
    n: usize,
    relations: BTreeMap<String, Vec<Vec<u32>>>,
}

impl Structure {
    pub fn empty(sig: &Arc<Signature>, n: usize) -> Self {
        let rels = (0..sig.len())
            .map(|s| Bits::zeros(tuple_count(n, sig.arity(s)).expect("tuple space overflow")))
            .collect();
        Structure {
            sig: Arc::clone(sig),
            n,
            rels,
        }
    }

    /// Builds a structure from per-symbol tuple lists given in symbol order.
    /// Duplicates, wrong arities and out-of-range elements are rejected.
    pub fn new<T: AsRef<[u32]>>(sig: &Arc<Signature>, n: usize, relations: &[Vec<T>]) -> Result<Self> {
        if relations.len() != sig.len() {
            return Err(Error::Mismatch(format!(
                "expected {} relations, got {}",
                sig.len(),
                relations.len()
            )));
        }
        let mut s = Structure::empty(sig, n);
        for (symbol, tuples) in relations.iter().enumerate() {
            for t in tuples {
                s.insert_checked(symbol, t.as_ref())?;
            }
        }
        Ok(s)
    }

    /// Builds a structure from `(symbol name, tuples)` pairs; unnamed symbols are empty.
    pub fn from_named(sig: &Arc<Signature>, n: usize, relations: &[(&str, &[&[u32]])]) -> Result<Self> {
        let mut s = Structure::empty(sig, n);
        for (name, tuples) in relations {
            let symbol = sig
                .symbol_index(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            for t in tuples.iter() {
                s.insert_checked(symbol, t)?;
            }
        }
        Ok(s)
    }

    fn insert_checked(&mut self, symbol: usize, t: &[u32]) -> Result<()> {
        let arity = self.sig.arity(symbol);
        if t.len() != arity {
            return Err(Error::Arity {
                symbol: self.sig.name(symbol).to_string(),
                expected: arity,
                found: t.len(),
            });
        }
        if let Some(&e) = t.iter().find(|&&e| e as usize >= self.n) {
            return Err(Error::OutOfRange {
                element: e as usize,
                n: self.n,
            });
        }
        let r = tuple_rank(t, self.n);
        if self.rels[symbol].get(r) {
            return Err(Error::DuplicateTuple {
                symbol: self.sig.name(symbol).to_string(),
                tuple: t.to_vec(),
            });
        }
        self.rels[symbol].set(r);
        Ok(())
    }

    /// Adds a tuple, ignoring it if already present. Panics if out of range.
    pub fn insert(&mut self, symbol: usize, t: &[u32]) {
        assert_eq!(t.len(), self.sig.arity(symbol), "arity mismatch");
        assert!(t.iter().all(|&e| (e as usize) < self.n), "element out of range");
        let r = tuple_rank(t, self.n);
        self.rels[symbol].set(r);
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, symbol: usize, t: &[u32]) -> bool {
        t.len() == self.sig.arity(symbol)
            && t.iter().all(|&e| (e as usize) < self.n)
            && self.rels[symbol].get(tuple_rank(t, self.n))
    }

    /// Tuples of `symbol` in lexicographic order.
    pub fn tuples(&self, symbol: usize) -> impl Iterator<Item = Tuple> + '_ {
        let arity = self.sig.arity(symbol);
        self.rels[symbol].ones().map(move |r| tuple_unrank(r, self.n, arity))
    }

    /// All `(symbol, tuple)` pairs, symbols in declaration order.
    pub fn facts(&self) -> impl Iterator<Item = (usize, Tuple)> + '_ {
        (0..self.sig.len()).flat_map(move |s| self.tuples(s).map(move |t| (s, t)))
    }

    pub fn relation_len(&self, symbol: usize) -> usize {
        self.rels[symbol].count()
    }

    /// Total number of tuples across all relations.
    pub fn magnitude(&self) -> usize {
        self.rels.iter().map(Bits::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitude() == 0
    }

    /// Checks relator closure, reporting the first failure in relator order
    /// and then lexicographic tuple order.
    pub fn validate(&self) -> Result<(), Violation> {
        for (i, (relator, from, to)) in self.sig.links().enumerate() {
            let arity = self.sig.arity(from);
            for r in self.rels[from].ones() {
                let t = tuple_unrank(r, self.n, arity);
                let image: Tuple = relator.coords.iter().map(|&c| t[c]).collect();
                if !self.rels[to].get(tuple_rank(&image, self.n)) {
                    return Err(Violation {
                        relator: i,
                        from: relator.from.clone(),
                        to: relator.to.clone(),
                        tuple: t,
                        image,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn check_kindred(&self, other: &Structure) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!(
                "universe sizes {} and {} differ",
                self.n, other.n
            )));
        }
        if !Arc::ptr_eq(&self.sig, &other.sig) && self.sig != other.sig {
            return Err(Error::Mismatch("signatures differ".into()));
        }
        Ok(())
    }

    /// `self ≤ other`: every relation of `self` is contained in `other`'s.
    pub fn is_substructure_of(&self, other: &Structure) -> Result<bool> {
        self.check_kindred(other)?;
        Ok(self.rels.iter().zip(&other.rels).all(|(a, b)| a.is_subset(b)))
    }

    pub fn join(&self, other: &Structure) -> Result<Structure> {
        self.check_kindred(other)?;
        Ok(self.zip_rels(other, |a, b| a | b))
    }

    pub fn meet(&self, other: &Structure) -> Result<Structure> {
        self.check_kindred(other)?;
        Ok(self.zip_rels(other, |a, b| a & b))
    }

    fn zip_rels(&self, other: &Structure, op: impl Fn(u64, u64) -> u64 + Copy) -> Structure {
        Structure {
            sig: Arc::clone(&self.sig),
            n: self.n,
            rels: self
                .rels
                .iter()
                .zip(&other.rels)
                .map(|(a, b)| a.zip_with(b, op))
                .collect(),
        }
    }

    /// Componentwise image under `h: [0, n) -> [0, target_n)`.
    pub fn image(&self, h: &[u32], target_n: usize) -> Result<Structure> {
        if h.len() != self.n {
            return Err(Error::Mismatch(format!(
                "map has {} entries for a universe of size {}",
                h.len(),
                self.n
            )));
        }
        if let Some(&e) = h.iter().find(|&&e| e as usize >= target_n) {
            return Err(Error::OutOfRange {
                element: e as usize,
                n: target_n,
            });
        }
        let mut out = Structure::empty(&self.sig, target_n);
        for (symbol, t) in self.facts() {
            let mapped: Tuple = t.iter().map(|&e| h[e as usize]).collect();
            out.insert(symbol, &mapped);
        }
        Ok(out)
    }

    /// Whether `h` is a morphism `self -> target`, i.e. `h(self) ≤ target`.
    pub fn is_morphism(&self, h: &[u32], target: &Structure) -> Result<bool> {
        self.image(h, target.n)?.is_substructure_of(target)
    }

    /// The same tuples viewed in a universe of size `n >= self.n()`.
    pub fn embed(&self, n: usize) -> Structure {
        assert!(n >= self.n, "cannot embed into a smaller universe");
        let id: Vec<u32> = (0..self.n as u32).collect();
        self.image(&id, n).expect("inclusion is in range")
    }

    pub fn from_json(sig: &Arc<Signature>, text: &str) -> Result<Structure> {
        let file: StructureFile = serde_json::from_str(text)?;
        let mut s = Structure::empty(sig, file.n);
        for (name, tuples) in &file.relations {
            let symbol = sig
                .symbol_index(name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            for t in tuples {
                s.insert_checked(symbol, t)?;
            }
        }
        Ok(s)
    }

    /// Compact JSON with symbols in declaration order and sorted tuple lists.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"n\":{},\"relations\":{{", self.n);
        for symbol in 0..self.sig.len() {
            if symbol > 0 {
                out.push(',');
            }
            out.push('"');
            out.push_str(self.sig.name(symbol));
            out.push_str("\":[");
            for (i, t) in self.tuples(symbol).enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('[');
                for (j, e) in t.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&e.to_string());
                }
                out.push(']');
            }
            out.push(']');
        }
        out.push_str("}}");
        out
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Every relator-closed structure of `sig` on `n` elements, in structure order.
pub fn enumerate_kinship(sig: &Arc<Signature>, n: usize, cap: u64) -> Result<Vec<Structure>> {
    let mut widths = Vec::with_capacity(sig.len());
    let mut bits: u64 = 0;
    for s in 0..sig.len() {
        let w = tuple_count(n, sig.arity(s)).ok_or(Error::CapExceeded { bits: u64::MAX, cap })?;
        widths.push(w);
        bits = bits.saturating_add(w as u64);
    }
    if bits >= 64 || (1u64 << bits) > cap {
        return Err(Error::CapExceeded { bits, cap });
    }

    // Rank maps for each relator, `from` rank -> `to` rank.
    let maps: Vec<(usize, usize, Vec<usize>)> = sig
        .links()
        .map(|(r, from, to)| {
            let map = (0..widths[from])
                .map(|rank| {
                    let t = tuple_unrank(rank, n, sig.arity(from));
                    let image: Tuple = r.coords.iter().map(|&c| t[c]).collect();
                    tuple_rank(&image, n)
                })
                .collect();
            (from, to, map)
        })
        .collect();

    // Symbol 0 occupies the most significant bits so that counting up walks
    // the structure order.
    let mut shifts = vec![0u32; widths.len()];
    let mut acc = 0u32;
    for s in (0..widths.len()).rev() {
        shifts[s] = acc;
        acc += widths[s] as u32;
    }

    let mut out = Vec::new();
    'candidates: for code in 0..(1u64 << bits) {
        let mask = |s: usize| (code >> shifts[s]) & ((1u64 << widths[s]) - 1);
        for (from, to, map) in &maps {
            let (src, dst) = (mask(*from), mask(*to));
            let mut m = src;
            while m != 0 {
                let r = m.trailing_zeros() as usize;
                m &= m - 1;
                if dst >> map[r] & 1 == 0 {
                    continue 'candidates;
                }
            }
        }
        let mut s = Structure::empty(sig, n);
        for (symbol, rel) in s.rels.iter_mut().enumerate() {
            if let Some(w) = rel.words.first_mut() {
                *w = mask(symbol);
            }
        }
        out.push(s);
    }
    Ok(out)
}
