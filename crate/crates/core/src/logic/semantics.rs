//! Direct semantics and polynomial realization of formulas.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{is_structural, Polynomial, Var};
use crate::signature::{Signature, Tuple};
use crate::structure::{tuple_count, tuple_unrank, Structure};

use super::ast::{Formula, TupleExpr};

type Env<'a> = Vec<(&'a str, Tuple)>;

fn resolve(args: &TupleExpr, env: &Env<'_>, sig: &Signature, symbol: usize, n: usize) -> Result<Tuple> {
    let t = match args {
        TupleExpr::Lit(t) => t.clone(),
        TupleExpr::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| Error::FreeVariable(v.clone()))?,
    };
    if symbol >= sig.len() || t.len() != sig.arity(symbol) || t.iter().any(|&e| e as usize >= n) {
        return Err(Error::ForeignVariable(format!(
            "{}({:?}) in a universe of size {n}",
            sig.symbols().get(symbol).map_or("?", |s| s.name.as_str()),
            t.as_slice()
        )));
    }
    Ok(t)
}

fn carrier(sig: &Signature, symbol: usize, n: usize) -> Result<impl Iterator<Item = Tuple>> {
    if symbol >= sig.len() {
        return Err(Error::UnknownSymbol(format!("#{symbol}")));
    }
    let arity = sig.arity(symbol);
    let count = tuple_count(n, arity).ok_or_else(|| Error::Mismatch("tuple space overflow".into()))?;
    Ok((0..count).map(move |r| tuple_unrank(r, n, arity)))
}

/// `a ⊨ formula`, by direct recursion; quantifiers range over all of `A^arity`.
pub fn models(a: &Structure, formula: &Formula) -> Result<bool> {
    fn go<'f>(a: &Structure, f: &'f Formula, env: &mut Env<'f>) -> Result<bool> {
        let sig = a.signature();
        Ok(match f {
            Formula::Const(b) => *b,
            Formula::Atom { symbol, args } => {
                let t = resolve(args, env, sig, *symbol, a.n())?;
                a.contains(*symbol, &t)
            }
            Formula::Or(x, y) => {
                let left = go(a, x, env)?;
                let right = go(a, y, env)?;
                left || right
            }
            Formula::And(x, y) => {
                let left = go(a, x, env)?;
                let right = go(a, y, env)?;
                left && right
            }
            Formula::Exists { var, symbol, body } | Formula::Forall { var, symbol, body } => {
                let exists = matches!(f, Formula::Exists { .. });
                let mut result = !exists;
                for t in carrier(sig, *symbol, a.n())? {
                    env.push((var, t));
                    let v = go(a, body, env);
                    env.pop();
                    if v? == exists {
                        result = exists;
                    }
                }
                result
            }
        })
    }
    go(a, formula, &mut Vec::new())
}

/// The polynomial realization: atoms to variables, `|` to `+`, `&` to `·`,
/// `∃` to a sum and `∀` to a product over `A^arity`.
pub fn realize(formula: &Formula, sig: &Signature, n: usize) -> Result<Polynomial> {
    fn go<'f>(f: &'f Formula, sig: &Signature, n: usize, env: &mut Env<'f>) -> Result<Polynomial> {
        Ok(match f {
            Formula::Const(b) => Polynomial::constant(i32::from(*b)),
            Formula::Atom { symbol, args } => {
                let t = resolve(args, env, sig, *symbol, n)?;
                Polynomial::var(Var::X {
                    symbol: *symbol as u16,
                    tuple: t,
                })
            }
            Formula::Or(x, y) => &go(x, sig, n, env)? + &go(y, sig, n, env)?,
            Formula::And(x, y) => &go(x, sig, n, env)? * &go(y, sig, n, env)?,
            Formula::Exists { var, symbol, body } => {
                let mut acc = Polynomial::zero();
                for t in carrier(sig, *symbol, n)? {
                    env.push((var, t));
                    let p = go(body, sig, n, env);
                    env.pop();
                    acc = &acc + &p?;
                }
                acc
            }
            Formula::Forall { var, symbol, body } => {
                let mut acc = Polynomial::one();
                for t in carrier(sig, *symbol, n)? {
                    env.push((var, t));
                    let p = go(body, sig, n, env);
                    env.pop();
                    acc = &acc * &p?;
                }
                acc
            }
        })
    }
    go(formula, sig, n, &mut Vec::new())
}

/// Whether the realization lies in the algebra generated by the `y_A`.
pub fn is_structural_formula(formula: &Formula, sig: &Arc<Signature>, n: usize) -> Result<bool> {
    Ok(is_structural(&realize(formula, sig, n)?, sig, n))
}

/// Whether the realization is structural and symmetric.
pub fn is_isomorphism_invariant(formula: &Formula, sig: &Arc<Signature>, n: usize) -> Result<bool> {
    let p = realize(formula, sig, n)?;
    Ok(is_structural(&p, sig, n) && p.is_symmetric(n))
}

/// Degree of the realization: the largest class magnitude a counting
/// decomposition may need.
pub fn weight_bound(formula: &Formula, sig: &Signature, n: usize) -> Result<usize> {
    Ok(realize(formula, sig, n)?.degree())
}

/// `⋁_{A∈P} ⋀_N ⋀_{t∈A(N)} N(t)`: holds exactly on structures containing some member of `P`.
pub fn property_formula(structures: &[Structure]) -> Result<Formula> {
    if let Some(first) = structures.first() {
        for s in &structures[1..] {
            s.is_substructure_of(first)?;
        }
    }
    Ok(Formula::disjunction(structures.iter().map(|s| {
        Formula::conjunction(s.facts().map(|(symbol, t)| Formula::atom(symbol, &t)))
    })))
}
