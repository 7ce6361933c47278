//! Symmetric polynomials over finite relational structures.
//!
//! The crate enumerates the structures of a finite signature on a fixed
//! universe, groups them into isomorphism classes, and works with the
//! polynomial algebra generated by the monomials `y_A`. Its two main
//! results are [`symfun::Decomposer::decompose`], which writes any symmetric
//! structural polynomial in terms of the elementary symmetric polynomials
//! `s_ψ`, and [`logic::check_by_counting`], which decides a negation-free
//! formula on a structure from counts of its substructures.

pub mod error;
pub mod linalg;
pub mod logic;
pub mod poly;
pub mod report;
pub mod signature;
pub mod structure;
pub mod symfun;
pub mod symmetry;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Var};
pub use signature::{RelationSymbol, Relator, Signature, Tuple};
pub use structure::{enumerate_kinship, Structure, Violation, DEFAULT_ENUMERATION_CAP};
pub use symfun::{Decomposer, Decomposition, Kinship, ZPolynomial};
pub use symmetry::{act_on_structure, canonical_form, iso_classes, IsoClass, Permutation};
