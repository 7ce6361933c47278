//! The symmetric group acting on structures, canonical forms and
//! isomorphism classes of a kinship class.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structure::Structure;

/// A bijection of `{0, .., n-1}`, stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &e in &mapping {
            let e = e as usize;
            if e >= n || std::mem::replace(&mut seen[e], true) {
                return Err(Error::Permutation(format!("{mapping:?} is not a bijection")));
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// Swaps `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, j);
        p
    }

    /// `k -> k + 1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Permutation((0..n as u32).map(|k| (k + 1) % n as u32).collect())
    }

    /// Generators of the full symmetric group: `(0 1)` and the `n`-cycle.
    pub fn generators(n: usize) -> Vec<Self> {
        if n < 2 {
            return Vec::new();
        }
        vec![Self::transposition(n, 0, 1), Self::cycle(n)]
    }

    /// All `n!` permutations, lexicographically.
    pub fn all(n: usize) -> impl Iterator<Item = Self> {
        (0..n as u32).permutations(n).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, e: u32) -> u32 {
        self.0[e as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&e| self.0[e as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            inv[e as usize] = i as u32;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Relabels every tuple of `a` componentwise through `sigma`.
pub fn act_on_structure(sigma: &Permutation, a: &Structure) -> Result<Structure> {
    if sigma.len() != a.n() {
        return Err(Error::Mismatch(format!(
            "permutation of {} points acting on a universe of size {}",
            sigma.len(),
            a.n()
        )));
    }
    a.image(sigma.as_slice(), a.n())
}

/// The least structure in the orbit of `a`, by exhaustive search over `Σ_n`.
pub fn canonical_form(a: &Structure) -> Structure {
    Permutation::all(a.n())
        .map(|sigma| act_on_structure(&sigma, a).expect("sizes agree"))
        .min()
        .unwrap_or_else(|| a.clone())
}

/// One orbit of the symmetric group on a kinship class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClass {
    pub id: usize,
    /// Least member in structure order.
    pub canonical: Structure,
    /// Members in structure order.
    pub members: Vec<Structure>,
    pub magnitude: usize,
}

impl IsoClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partitions `kinship` into orbits, ordered by `(magnitude, canonical form)`.
pub fn iso_classes(kinship: &[Structure]) -> Vec<IsoClass> {
    let mut orbits: HashMap<Structure, Vec<Structure>> = HashMap::new();
    for s in kinship {
        orbits.entry(canonical_form(s)).or_default().push(s.clone());
    }
    let mut classes: Vec<IsoClass> = orbits
        .into_iter()
        .map(|(canonical, mut members)| {
            members.sort();
            IsoClass {
                id: 0,
                magnitude: canonical.magnitude(),
                canonical,
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| {
        a.magnitude
            .cmp(&b.magnitude)
            .then_with(|| a.canonical.cmp(&b.canonical))
    });
    for (id, c) in classes.iter_mut().enumerate() {
        c.id = id;
    }
    classes
}

/// One line per class: `z[<id>] = <canonical> (size=<k>, magnitude=<m>)`.
pub fn classes_manifest(classes: &[IsoClass]) -> String {
    let mut out = String::new();
    for c in classes {
        out.push_str(&format!(
            "z[{}] = {} (size={}, magnitude={})\n",
            c.id,
            c.canonical,
            c.size(),
            c.magnitude
        ));
    }
    out
}
