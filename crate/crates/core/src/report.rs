//! The worked domain-digraph example: six variables, twenty-five structures,
//! and an algebraic dependence among the elementary symmetric polynomials.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{y_monomial, Monomial, Polynomial, Var};
use crate::signature::Signature;
use crate::structure::Structure;
use crate::symfun::{Kinship, ZPolynomial};

/// Edges and domain vertices of one structure.
type Support = (&'static [&'static [u32]], &'static [&'static [u32]]);

/// Supports of the six classes in `s_{00,0}s_{01,0} − s_{00,01,0}s_0 + s_{00,01,0,1} − s_{00,10,0,1}`.
const CLASSES: [Support; 6] = [
    (&[&[0, 0]], &[&[0]]),
    (&[&[0, 1]], &[&[0]]),
    (&[&[0, 0], &[0, 1]], &[&[0]]),
    (&[], &[&[0]]),
    (&[&[0, 0], &[0, 1]], &[&[0], &[1]]),
    (&[&[0, 0], &[1, 0]], &[&[0], &[1]]),
];

pub struct PaperExample {
    pub kinship: Kinship,
    /// The dependence as a polynomial in the class variables.
    pub relation: ZPolynomial,
    /// `relation` with every `z` replaced by its `s`.
    pub expanded: Polynomial,
}

impl PaperExample {
    pub fn compute() -> Result<Self> {
        let sig = Arc::new(Signature::domain_digraph());
        let kinship = Kinship::new(&sig, 2)?;
        let mut z = Vec::new();
        for (edges, domain) in CLASSES {
            let a = Structure::from_named(&sig, 2, &[("E", edges), ("W", domain)])?;
            let id = kinship
                .class_of(&a)
                .ok_or_else(|| Error::Verification(format!("{a} is not a domain digraph on two elements")))?;
            z.push(Var::Z(id as u32));
        }
        let product = |i: usize, j: usize| Monomial::var(z[i].clone()).mul(&Monomial::var(z[j].clone()));
        let mut relation = Polynomial::zero();
        relation.add_term(product(0, 1), 1.into());
        relation.add_term(product(2, 3), (-1).into());
        relation.add_term(Monomial::var(z[4].clone()), 1.into());
        relation.add_term(Monomial::var(z[5].clone()), (-1).into());
        let expanded = kinship.expand(&relation)?;
        Ok(PaperExample {
            relation: kinship.zpoly(relation),
            kinship,
            expanded,
        })
    }

    pub fn verified(&self) -> bool {
        self.kinship.x_vars().len() == 6 && self.kinship.structures().len() == 25 && self.expanded.is_zero()
    }

    /// Human-readable report; the last line is the machine-checked summary.
    pub fn to_text(&self) -> String {
        let kin = &self.kinship;
        let sig = kin.signature();
        let mut out = String::new();
        let xs: Vec<String> = kin
            .x_vars()
            .into_iter()
            .map(|v| Polynomial::var(v).to_text(sig).trim_start_matches("1*").to_owned())
            .collect();
        writeln!(out, "X = {{{}}}", xs.join(", ")).unwrap();
        writeln!(out, "Y ({} monomials):", kin.structures().len()).unwrap();
        for a in kin.structures() {
            let y = Polynomial::term(y_monomial(a), 1).to_text(sig);
            writeln!(out, "  {}", y.trim_start_matches("1*")).unwrap();
        }
        writeln!(out, "classes:").unwrap();
        out.push_str(&kin.manifest());
        writeln!(out, "relation: {}", self.relation).unwrap();
        writeln!(out, "expanded: {}", self.expanded.to_text(sig)).unwrap();
        write!(
            out,
            "|X|={} |structures|={} dependence={} {}",
            xs.len(),
            kin.structures().len(),
            self.expanded.to_text(sig),
            if self.verified() { "verified" } else { "FAILED" }
        )
        .unwrap();
        out
    }
}
