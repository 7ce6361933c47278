//! Model checking by counting substructures.
//!
//! For an isomorphism-invariant `Γ`, `realize(Γ) = g(S)` for some integer
//! polynomial `g` in the class variables, and `s_ψ(A)` is the number of
//! class-`ψ` substructures of `A`. So `A ⊨ Γ` iff `g(counts(A)) > 0`.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::symfun::{Decomposer, Decomposition, Kinship, ZPolynomial};

use super::ast::Formula;
use super::semantics::{models, realize};

/// Number of substructures in each isomorphism class, indexed by class id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector(pub Vec<u64>);

impl CountVector {
    pub fn get(&self, class: usize) -> u64 {
        self.0[class]
    }

    pub fn as_bigints(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }
}

/// Counts, for every class of `kin`, the members lying below `a`.
pub fn count_substructures(a: &Structure, kin: &Kinship) -> Result<CountVector> {
    if a.n() != kin.n() || a.signature() != kin.signature() {
        return Err(Error::Mismatch(format!(
            "structure on {} elements is not in the kinship class of size {}",
            a.n(),
            kin.n()
        )));
    }
    let mut counts = Vec::with_capacity(kin.classes().len());
    for class in kin.classes() {
        let mut c = 0;
        for b in &class.members {
            if b.is_substructure_of(a)? {
                c += 1;
            }
        }
        counts.push(c);
    }
    Ok(CountVector(counts))
}

/// `g` evaluated at the substructure counts of `a`; equals `g(S)` evaluated at `a`.
pub fn evaluate_by_counting(g: &ZPolynomial, a: &Structure, kin: &Kinship) -> Result<(BigInt, CountVector)> {
    let counts = count_substructures(a, kin)?;
    let value = g.poly().evaluate_z(&counts.as_bigints())?;
    Ok((value, counts))
}

/// Outcome of [`check_by_counting`] with its diagnostics.
#[derive(Debug, Clone)]
pub struct CountingCheck {
    pub holds: bool,
    /// `g` evaluated at the count vector.
    pub value: BigInt,
    /// `realize(Γ)` evaluated directly on the structure; equals `value`.
    pub direct_value: BigInt,
    pub counts: CountVector,
    pub decomposition: Decomposition,
}

/// Decides `a ⊨ formula` from substructure counts alone.
pub fn check_by_counting(formula: &Formula, a: &Structure, decomposer: &Decomposer) -> Result<CountingCheck> {
    let kin = decomposer.kinship();
    let f = realize(formula, kin.signature(), kin.n())?;
    let decomposition = match decomposer.decompose(&f) {
        Ok(d) => d,
        Err(Error::NotSymmetric | Error::NotStructural) => return Err(Error::NotInvariant),
        Err(e) => return Err(e),
    };
    let (value, counts) = evaluate_by_counting(&decomposition.g, a, kin)?;
    let direct_value = f.evaluate(a)?;
    if value != direct_value {
        return Err(Error::Verification(format!(
            "counting gives {value} but the realization evaluates to {direct_value}"
        )));
    }
    Ok(CountingCheck {
        holds: value.is_positive(),
        value,
        direct_value,
        counts,
        decomposition,
    })
}

/// Both deciders side by side, as reported by the command line.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub direct: bool,
    pub counting: CountingCheck,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.direct == self.counting.holds
    }
}

pub fn compare(formula: &Formula, a: &Structure, decomposer: &Decomposer) -> Result<Comparison> {
    Ok(Comparison {
        direct: models(a, formula)?,
        counting: check_by_counting(formula, a, decomposer)?,
    })
}
