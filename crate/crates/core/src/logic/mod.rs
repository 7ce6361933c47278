//! The kindred language: negation-free first-order formulas whose atoms
//! assert tuple membership and whose quantifiers range over whole tuples.

mod ast;
pub mod corpus;
mod counting;
mod parser;
mod semantics;

pub use ast::{Formula, TupleExpr};
pub use counting::{
    check_by_counting, compare, count_substructures, evaluate_by_counting, Comparison, CountVector, CountingCheck,
};
pub use parser::parse;
pub use semantics::{is_isomorphism_invariant, is_structural_formula, models, property_formula, realize, weight_bound};
