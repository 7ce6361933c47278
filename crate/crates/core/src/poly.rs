//! Sparse multivariate polynomials with integer coefficients.
//!
//! Two kinds of variables occur: `x[N;t]`, the indicator that tuple `t`
//! belongs to relation `N`, and `z[k]`, standing for the elementary
//! symmetric polynomial of isomorphism class `k`. Terms are kept in a
//! graded order: by total degree, then lexicographically on the sorted
//! sequence of variables with repetition.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::signature::{Signature, Tuple};
use crate::structure::Structure;
use crate::symmetry::Permutation;

/// A polynomial variable. `X` variables sort before `Z` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X { symbol: u16, tuple: Tuple },
    Z(u32),
}

impl Var {
    pub fn x(symbol: usize, tuple: &[u32]) -> Var {
        Var::X {
            symbol: symbol as u16,
            tuple: Tuple::from_slice(tuple),
        }
    }

    pub fn mentions(&self, element: u32) -> bool {
        matches!(self, Var::X { tuple, .. } if tuple.contains(&element))
    }

    fn write(&self, sig: &Signature, out: &mut String) {
        match self {
            Var::X { symbol, tuple } => {
                out.push_str("x[");
                out.push_str(sig.name(*symbol as usize));
                out.push(';');
                for (i, e) in tuple.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&e.to_string());
                }
                out.push(']');
            }
            Var::Z(k) => {
                out.push_str(&format!("z[{k}]"));
            }
        }
    }
}

/// A product of variables with positive exponents, sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs.
    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - d)),
                }
            } else if j < other.0.len() && other.0[j].0 < *v {
                return None;
            } else {
                out.push((v.clone(), *e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), e * k)).collect())
    }

    fn expanded(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().flat_map(|(v, e)| std::iter::repeat_n(v, *e as usize))
    }

    fn write(&self, sig: &Signature, out: &mut String) {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            v.write(sig, out);
            if *e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.expanded().cmp(other.expanded()))
    }
}

/// A polynomial with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// The part of `self` of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: usize) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.terms.keys().flat_map(Monomial::vars)
    }

    pub fn has_z_vars(&self) -> bool {
        self.vars().any(|v| matches!(v, Var::Z(_)))
    }

    pub fn has_x_vars(&self) -> bool {
        self.vars().any(|v| matches!(v, Var::X { .. }))
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(t, k)| (t.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term containing a variable accepted by `killed`.
    pub fn substitute_zero_where(&self, killed: impl Fn(&Var) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.vars().any(&killed))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets every variable in `vars` to zero.
    pub fn substitute_zero(&self, vars: &HashSet<Var>) -> Polynomial {
        self.substitute_zero_where(|v| vars.contains(v))
    }

    /// Replaces every `z[k]` by `table(k)` and expands. `X` variables pass through.
    pub fn substitute<'a>(&self, table: impl Fn(u32) -> Option<&'a Polynomial>) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.powers() {
                match v {
                    Var::Z(k) => {
                        let s = table(*k).ok_or(Error::MissingSubstitution(*k))?;
                        prod = &prod * &s.pow(*e);
                    }
                    Var::X { .. } => kept.push((v.clone(), *e)),
                }
            }
            if !kept.is_empty() {
                prod = prod.mul_monomial(&Monomial(kept));
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Value at `a`, with `x[N;t]` read as `[t ∈ N]`.
    pub fn evaluate(&self, a: &Structure) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut present = true;
            for v in m.vars() {
                match v {
                    Var::Z(k) => return Err(Error::ZVariable(*k)),
                    Var::X { symbol, tuple } => {
                        let s = *symbol as usize;
                        if s >= a.signature().len()
                            || tuple.len() != a.signature().arity(s)
                            || tuple.iter().any(|&e| e as usize >= a.n())
                        {
                            let mut name = String::new();
                            v.write(a.signature(), &mut name);
                            return Err(Error::ForeignVariable(name));
                        }
                        present &= a.contains(s, tuple);
                    }
                }
            }
            if present {
                total += c;
            }
        }
        Ok(total)
    }

    /// Value with `z[k] = values[k]`. `X` variables are rejected.
    pub fn evaluate_z(&self, values: &[BigInt]) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.powers() {
                match v {
                    Var::Z(k) => {
                        let value = values.get(*k as usize).ok_or(Error::MissingSubstitution(*k))?;
                        term *= num_traits::pow(value.clone(), *e as usize);
                    }
                    Var::X { .. } => return Err(Error::ForeignVariable(format!("{v:?}"))),
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Relabels every `x[N;t]` as `x[N;σ(t)]`.
    pub fn act(&self, sigma: &Permutation) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut powers = Vec::with_capacity(m.powers().len());
            for (v, e) in m.powers() {
                match v {
                    Var::Z(k) => return Err(Error::ZVariable(*k)),
                    Var::X { symbol, tuple } => {
                        if tuple.iter().any(|&x| x as usize >= sigma.len()) {
                            return Err(Error::Mismatch(format!(
                                "variable {v:?} outside a universe of size {}",
                                sigma.len()
                            )));
                        }
                        let image = tuple.iter().map(|&x| sigma.apply(x)).collect();
                        powers.push((
                            Var::X {
                                symbol: *symbol,
                                tuple: image,
                            },
                            *e,
                        ));
                    }
                }
            }
            out.add_term(Monomial::from_powers(powers), c.clone());
        }
        Ok(out)
    }

    /// Invariance under `Σ_n`, checked on the two generators of the group.
    /// Polynomials with `Z` variables or foreign elements are not symmetric.
    pub fn is_symmetric(&self, n: usize) -> bool {
        let in_range = self
            .vars()
            .all(|v| matches!(v, Var::X { tuple, .. } if tuple.iter().all(|&e| (e as usize) < n)));
        in_range
            && Permutation::generators(n)
                .iter()
                .all(|g| self.act(g).is_ok_and(|q| q == *self))
    }

    /// Renders in the canonical text format.
    pub fn to_text(&self, sig: &Signature) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&c.to_string());
            if !m.is_one() {
                out.push('*');
                m.write(sig, &mut out);
            }
        }
        out
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Polynomial, &'a Signature);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.to_text(self.1))
            }
        }
        D(self, sig)
    }

    /// Parses the text format produced by [`Polynomial::to_text`].
    pub fn parse(text: &str, sig: &Signature) -> Result<Polynomial> {
        PolyParser {
            src: text.as_bytes(),
            pos: 0,
            sig,
        }
        .parse()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: std::collections::HashMap<Monomial, BigInt> = std::collections::HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *acc.entry(a.mul(b)).or_default() += ca * cb;
            }
        }
        Polynomial {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

/// The squarefree monomial `∏ x[N;t]` over all tuples of `a`.
pub fn y_monomial(a: &Structure) -> Monomial {
    Monomial(
        a.facts()
            .map(|(s, t)| {
                (
                    Var::X {
                        symbol: s as u16,
                        tuple: t,
                    },
                    1,
                )
            })
            .collect(),
    )
}

/// The structure whose relations are the tuples occurring in `m`, if it is
/// relator-closed.
pub fn support_structure(m: &Monomial, sig: &Arc<Signature>, n: usize) -> Result<Structure> {
    let mut s = Structure::empty(sig, n);
    for v in m.vars() {
        match v {
            Var::Z(k) => return Err(Error::ZVariable(*k)),
            Var::X { symbol, tuple } => {
                let symbol = *symbol as usize;
                if symbol >= sig.len() || tuple.len() != sig.arity(symbol) || tuple.iter().any(|&e| e as usize >= n) {
                    let mut name = String::new();
                    v.write(sig, &mut name);
                    return Err(Error::ForeignVariable(name));
                }
                s.insert(symbol, tuple);
            }
        }
    }
    s.validate().map_err(Error::Invalid)?;
    Ok(s)
}

/// Whether `m` is a product of monomials `y_A` of valid structures.
///
/// Greedy: divide by `y` of the support until reaching 1. This decides
/// membership exactly. If `m = ∏ y_{A_i}` then its support is the join of
/// the `A_i`, which is valid, and the factorization lemma writes the
/// product as `y_join · μ` with `μ` again a product of `y`s of strictly
/// smaller degree; conversely every successful run exhibits a factorization.
pub fn is_structural_monomial(m: &Monomial, sig: &Arc<Signature>, n: usize) -> bool {
    let mut rest = m.clone();
    while !rest.is_one() {
        let Ok(support) = support_structure(&rest, sig, n) else {
            return false;
        };
        rest = rest
            .checked_div(&y_monomial(&support))
            .expect("the support monomial divides");
    }
    true
}

/// Membership in the subalgebra generated by the `y_A`: every monomial must be structural.
pub fn is_structural(p: &Polynomial, sig: &Arc<Signature>, n: usize) -> bool {
    p.terms().all(|(m, _)| is_structural_monomial(m, sig, n))
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl PolyParser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::PolyParse {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", b as char))
        }
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        let d = self.digits()?;
        match d.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err("number too large"),
        }
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut p = Polynomial::zero();
        loop {
            let (m, c) = self.term()?;
            p.add_term(m, c);
            if self.peek().is_none() {
                return Ok(p);
            }
            self.expect(b'+')?;
        }
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let negative = self.eat(b'-');
        let mut coeff = BigInt::one();
        let mut powers = Vec::new();
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            coeff = self.digits()?.parse().expect("digits parse");
            if !self.eat(b'*') {
                return Ok((Monomial::one(), if negative { -coeff } else { coeff }));
            }
        }
        loop {
            powers.push(self.factor()?);
            if !self.eat(b'*') {
                break;
            }
        }
        if negative {
            coeff = -coeff;
        }
        Ok((Monomial::from_powers(powers), coeff))
    }

    fn factor(&mut self) -> Result<(Var, u32)> {
        let var = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                self.expect(b'[')?;
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                let Some(symbol) = self.sig.symbol_index(&name) else {
                    return self.err(format!("unknown symbol `{name}`"));
                };
                self.expect(b';')?;
                let mut tuple = Tuple::new();
                loop {
                    tuple.push(self.small()?);
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b']')?;
                if tuple.len() != self.sig.arity(symbol) {
                    return self.err(format!(
                        "`{name}` has arity {}, got {} coordinates",
                        self.sig.arity(symbol),
                        tuple.len()
                    ));
                }
                Var::X {
                    symbol: symbol as u16,
                    tuple,
                }
            }
            Some(b'z') => {
                self.pos += 1;
                self.expect(b'[')?;
                let k = self.small()?;
                self.expect(b']')?;
                Var::Z(k)
            }
            _ => return self.err("expected a variable"),
        };
        let e = if self.eat(b'^') { self.small()? } else { 1 };
        Ok((var, e))
    }
}
