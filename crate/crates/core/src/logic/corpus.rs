//! Formula generators used by the property tests and the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::signature::{Signature, Tuple};
use crate::structure::{tuple_count, tuple_unrank};

use super::ast::{Formula, TupleExpr};

/// Every ground atom over `sig` on `n` elements, symbol by symbol.
pub fn ground_atoms(sig: &Signature, n: usize) -> Vec<Formula> {
    let mut atoms = Vec::new();
    for symbol in 0..sig.len() {
        let arity = sig.arity(symbol);
        let count = tuple_count(n, arity).expect("small universe");
        for r in 0..count {
            atoms.push(Formula::atom(symbol, &tuple_unrank(r, n, arity)));
        }
    }
    atoms
}

/// All ground formulas built from atoms with `|` and `&` using at most
/// `max_connectives` connectives, grouped by connective count.
pub fn ground_formulas(sig: &Signature, n: usize, max_connectives: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![ground_atoms(sig, n)];
    for k in 1..=max_connectives {
        let mut level = Vec::new();
        for i in 0..k {
            let j = k - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    level.push(Formula::or(a.clone(), b.clone()));
                    level.push(Formula::and(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

/// Seeded random closed formulas, each headed by a quantifier, with
/// quantifier nesting depth between 1 and `max_depth`.
///
/// Variables are named after their nesting level, so no variable is ever
/// shadowed.
pub fn random_quantified(sig: &Signature, n: usize, count: usize, max_depth: usize, seed: u64) -> Vec<Formula> {
    assert!(max_depth >= 1, "quantified formulas need depth at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Generator { sig, n, rng: &mut rng };
    (0..count)
        .map(|_| {
            let mut scope = Vec::new();
            g.quantifier(max_depth, 3, &mut scope)
        })
        .collect()
}

struct Generator<'a, R> {
    sig: &'a Signature,
    n: usize,
    rng: &'a mut R,
}

impl<R: Rng> Generator<'_, R> {
    fn formula(&mut self, depth: usize, budget: usize, scope: &mut Vec<(String, usize)>) -> Formula {
        let roll: f64 = self.rng.gen();
        if depth > 0 && roll < 0.3 {
            self.quantifier(depth, budget, scope)
        } else if budget > 0 && roll < 0.65 {
            let left_budget = self.rng.gen_range(0..budget);
            let a = self.formula(depth, left_budget, scope);
            let b = self.formula(depth, budget - 1 - left_budget, scope);
            if self.rng.gen_bool(0.5) {
                Formula::or(a, b)
            } else {
                Formula::and(a, b)
            }
        } else {
            self.atom(scope)
        }
    }

    fn quantifier(&mut self, depth: usize, budget: usize, scope: &mut Vec<(String, usize)>) -> Formula {
        let symbol = self.rng.gen_range(0..self.sig.len());
        let var = format!("v{}", scope.len());
        scope.push((var.clone(), symbol));
        let body = Box::new(self.formula(depth - 1, budget, scope));
        scope.pop();
        if self.rng.gen_bool(0.5) {
            Formula::Exists { var, symbol, body }
        } else {
            Formula::Forall { var, symbol, body }
        }
    }

    fn atom(&mut self, scope: &[(String, usize)]) -> Formula {
        if !scope.is_empty() && self.rng.gen_bool(0.7) {
            let (var, bound) = &scope[self.rng.gen_range(0..scope.len())];
            let arity = self.sig.arity(*bound);
            let fitting: Vec<usize> = (0..self.sig.len()).filter(|&s| self.sig.arity(s) == arity).collect();
            let symbol = fitting[self.rng.gen_range(0..fitting.len())];
            return Formula::Atom {
                symbol,
                args: TupleExpr::Var(var.clone()),
            };
        }
        let symbol = self.rng.gen_range(0..self.sig.len());
        let tuple: Tuple = (0..self.sig.arity(symbol))
            .map(|_| self.rng.gen_range(0..self.n.max(1) as u32))
            .collect();
        Formula::Atom {
            symbol,
            args: TupleExpr::Lit(tuple),
        }
    }
}

/// `⋁ E(a,b) & E(b,c) & E(c,a)` over pairwise distinct `a, b, c < n`: some
/// three elements form a directed 3-cycle.
pub fn ground_triangle(symbol: usize, n: u32) -> Formula {
    let mut disjuncts = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != b && b != c && a != c {
                    disjuncts.push(Formula::conjunction([
                        Formula::atom(symbol, &[a, b]),
                        Formula::atom(symbol, &[b, c]),
                        Formula::atom(symbol, &[c, a]),
                    ]));
                }
            }
        }
    }
    Formula::disjunction(disjuncts)
}
