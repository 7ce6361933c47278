//! Elementary symmetric polynomials of isomorphism classes and the
//! decomposition of symmetric structural polynomials into them.
//!
//! [`Kinship`] bundles everything known about one `(signature, n)`: the
//! kinship class, its isomorphism classes, their elementary symmetric
//! polynomials `s_ψ = Σ_{A∈ψ} y_A`, and cached linear-algebra bases for
//! products of the `s_ψ`. [`Decomposer`] stacks kinships for `0..=n` and
//! runs the inductive decomposition: restrict to the first `n-1` elements,
//! decompose there, lift, subtract, factor what remains by support, and
//! recurse on lower degree. Every candidate is checked by expansion; when the
//! support factorization does not collect into class sums the exact solver
//! takes over.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use log::debug;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Solution};
use crate::poly::{is_structural, support_structure, y_monomial, Monomial, Polynomial, Var};
use crate::signature::Signature;
use crate::structure::{enumerate_kinship, tuple_count, tuple_unrank, Structure, DEFAULT_ENUMERATION_CAP};
use crate::symmetry::{classes_manifest, iso_classes, IsoClass, Permutation};

/// Default bound on the number of `Z`-monomials in one linear system.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// A polynomial in the class variables `z[k]` of one `(signature, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPolynomial {
    sig: Arc<Signature>,
    n: usize,
    poly: Polynomial,
}

impl ZPolynomial {
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_text(&self) -> String {
        self.poly.to_text(&self.sig)
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightReport {
    pub weight: usize,
    /// Highest power of each `z[k]` occurring.
    pub degree_by_class: BTreeMap<usize, u32>,
}

struct WeightBasis {
    monomials: Vec<Monomial>,
    rows: HashMap<Monomial, usize>,
    echelon: Echelon,
}

/// A kinship class with its isomorphism classes and elementary symmetric polynomials.
pub struct Kinship {
    sig: Arc<Signature>,
    n: usize,
    structures: Vec<Structure>,
    classes: Vec<IsoClass>,
    class_of: HashMap<Structure, usize>,
    elementary: Vec<Polynomial>,
    basis_cap: usize,
    bases: Mutex<HashMap<usize, Arc<WeightBasis>>>,
}

impl Kinship {
    pub fn new(sig: &Arc<Signature>, n: usize) -> Result<Self> {
        Self::with_caps(sig, n, DEFAULT_ENUMERATION_CAP, DEFAULT_BASIS_CAP)
    }

    pub fn with_caps(sig: &Arc<Signature>, n: usize, enumeration_cap: u64, basis_cap: usize) -> Result<Self> {
        let structures = enumerate_kinship(sig, n, enumeration_cap)?;
        let classes = iso_classes(&structures);
        let mut class_of = HashMap::with_capacity(structures.len());
        for c in &classes {
            for m in &c.members {
                class_of.insert(m.clone(), c.id);
            }
        }
        let elementary = classes.iter().map(elementary_symmetric).collect();
        Ok(Kinship {
            sig: Arc::clone(sig),
            n,
            structures,
            classes,
            class_of,
            elementary,
            basis_cap,
            bases: Mutex::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn structures(&self) -> &[Structure] {
        &self.structures
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    pub fn manifest(&self) -> String {
        classes_manifest(&self.classes)
    }

    /// Class id of a member of this kinship class.
    pub fn class_of(&self, a: &Structure) -> Option<usize> {
        self.class_of.get(a).copied()
    }

    /// `s_ψ` for class `id`.
    pub fn elementary(&self, id: usize) -> &Polynomial {
        &self.elementary[id]
    }

    /// All variables `x[N;t]` of this `(signature, n)`, symbols in order, tuples lexicographic.
    pub fn x_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for s in 0..self.sig.len() {
            let arity = self.sig.arity(s);
            for r in 0..tuple_count(self.n, arity).unwrap_or(0) {
                out.push(Var::x(s, &tuple_unrank(r, self.n, arity)));
            }
        }
        out
    }

    pub fn zpoly(&self, poly: Polynomial) -> ZPolynomial {
        ZPolynomial {
            sig: Arc::clone(&self.sig),
            n: self.n,
            poly,
        }
    }

    /// `g` with every `z[k]` replaced by `s_k`.
    pub fn expand(&self, g: &Polynomial) -> Result<Polynomial> {
        g.substitute(|k| self.elementary.get(k as usize))
    }

    pub fn weight(&self, g: &ZPolynomial) -> Result<WeightReport> {
        let mut weight = 0;
        let mut degree_by_class: BTreeMap<usize, u32> = BTreeMap::new();
        for (m, _) in g.poly.terms() {
            let mut w = 0;
            for (v, e) in m.powers() {
                let Var::Z(k) = v else {
                    return Err(Error::ForeignVariable(format!("{v:?}")));
                };
                let class = self.classes.get(*k as usize).ok_or(Error::MissingSubstitution(*k))?;
                w += class.magnitude * *e as usize;
                let d = degree_by_class.entry(class.id).or_default();
                *d = (*d).max(*e);
            }
            weight = weight.max(w);
        }
        Ok(WeightReport {
            weight,
            degree_by_class,
        })
    }

    fn check_x_poly(&self, f: &Polynomial) -> Result<()> {
        for v in f.vars() {
            match v {
                Var::Z(k) => return Err(Error::ZVariable(*k)),
                Var::X { symbol, tuple } => {
                    let s = *symbol as usize;
                    if s >= self.sig.len()
                        || tuple.len() != self.sig.arity(s)
                        || tuple.iter().any(|&e| e as usize >= self.n)
                    {
                        return Err(Error::ForeignVariable(format!("{v:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Groups the terms of `f` by support: `f = Σ_A y_A · p_A`.
    pub fn support_decomposition(&self, f: &Polynomial) -> Result<BTreeMap<Structure, Polynomial>> {
        let mut parts: BTreeMap<Structure, Polynomial> = BTreeMap::new();
        for (m, c) in f.terms() {
            let support = support_structure(m, &self.sig, self.n).map_err(|_| Error::NotStructural)?;
            let rest = m
                .checked_div(&y_monomial(&support))
                .expect("the support monomial divides");
            parts.entry(support).or_default().add_term(rest, c.clone());
        }
        Ok(parts)
    }

    fn basis(&self, weight: usize) -> Result<Arc<WeightBasis>> {
        if let Some(b) = self.bases.lock().unwrap().get(&weight) {
            return Ok(Arc::clone(b));
        }
        let nonempty: Vec<&IsoClass> = self.classes.iter().filter(|c| c.magnitude > 0).collect();
        let count = count_multisets(&nonempty, weight, 0, self.basis_cap + 1);
        if count > self.basis_cap {
            return Err(Error::BasisCapExceeded {
                size: count,
                cap: self.basis_cap,
            });
        }
        let mut monomials = Vec::new();
        let mut expansions = Vec::new();
        self.collect_products(
            &nonempty,
            weight,
            0,
            Monomial::one(),
            Polynomial::one(),
            &mut monomials,
            &mut expansions,
        );

        let mut rows: HashMap<Monomial, usize> = HashMap::new();
        for e in &expansions {
            for (m, _) in e.terms() {
                let next = rows.len();
                rows.entry(m.clone()).or_insert(next);
            }
        }
        let matrix = expansions
            .iter()
            .map(|e| {
                let mut row = vec![BigInt::zero(); rows.len()];
                for (m, c) in e.terms() {
                    row[rows[m]] = c.clone();
                }
                row
            })
            .collect();
        let basis = Arc::new(WeightBasis {
            monomials,
            echelon: Echelon::new(matrix, rows.len()),
            rows,
        });
        self.bases.lock().unwrap().insert(weight, Arc::clone(&basis));
        Ok(basis)
    }

    #[allow(clippy::too_many_arguments)]
    fn collect_products(
        &self,
        classes: &[&IsoClass],
        remaining: usize,
        start: usize,
        z: Monomial,
        expansion: Polynomial,
        monomials: &mut Vec<Monomial>,
        expansions: &mut Vec<Polynomial>,
    ) {
        if remaining == 0 {
            monomials.push(z);
            expansions.push(expansion);
            return;
        }
        for (i, c) in classes.iter().enumerate().skip(start) {
            if c.magnitude > remaining {
                continue;
            }
            let z2 = z.mul(&Monomial::var(Var::Z(c.id as u32)));
            let e2 = &expansion * &self.elementary[c.id];
            self.collect_products(classes, remaining - c.magnitude, i, z2, e2, monomials, expansions);
        }
    }

    /// Solves for `g` of weight at most `d` with `g(S) = f` by exact linear
    /// algebra over all products of the `s_ψ`, one degree at a time.
    pub fn linear_solve(&self, f: &Polynomial, d: usize) -> Result<ZPolynomial> {
        self.check_x_poly(f)?;
        if f.degree() > d {
            return Err(Error::Mismatch(format!(
                "polynomial of degree {} exceeds the weight bound {d}",
                f.degree()
            )));
        }
        let mut g = Polynomial::constant(f.constant_term());
        for k in 1..=f.degree() {
            let part = f.homogeneous_part(k);
            if part.is_zero() {
                continue;
            }
            let basis = self.basis(k)?;
            let mut b = vec![BigInt::zero(); basis.rows.len()];
            for (m, c) in part.terms() {
                match basis.rows.get(m) {
                    Some(&i) => b[i] = c.clone(),
                    None => return Err(Error::NoRationalSolution(self.instance(f))),
                }
            }
            match basis.echelon.solve(&b) {
                Solution::Integer(x) => {
                    for (m, c) in basis.monomials.iter().zip(x) {
                        g.add_term(m.clone(), c);
                    }
                }
                Solution::RationalOnly(_) => return Err(Error::RationalOnly(self.instance(f))),
                Solution::Inconsistent => return Err(Error::NoRationalSolution(self.instance(f))),
            }
        }
        Ok(self.zpoly(g))
    }

    /// A ℤ-basis of the relations among products of the `s_ψ` of weight
    /// `1..=w`, one homogeneous weight at a time.
    pub fn find_dependencies(&self, w: usize) -> Result<Vec<ZPolynomial>> {
        let mut out = Vec::new();
        for k in 1..=w {
            let basis = self.basis(k)?;
            for v in basis.echelon.kernel() {
                let mut g = Polynomial::zero();
                for (m, c) in basis.monomials.iter().zip(v) {
                    g.add_term(m.clone(), c);
                }
                // Sign convention: the leading term is positive.
                if g.terms().last().is_some_and(|(_, c)| c.is_negative()) {
                    g = -g;
                }
                out.push(self.zpoly(g));
            }
        }
        Ok(out)
    }

    fn instance(&self, f: &Polynomial) -> String {
        format!(
            "signature {} n={} f={}",
            self.sig.to_json(),
            self.n,
            f.to_text(&self.sig)
        )
    }
}

fn count_multisets(classes: &[&IsoClass], remaining: usize, start: usize, limit: usize) -> usize {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for (i, c) in classes.iter().enumerate().skip(start) {
        if c.magnitude <= remaining {
            total += count_multisets(classes, remaining - c.magnitude, i, limit - total.min(limit));
            if total >= limit {
                return total;
            }
        }
    }
    total
}

/// `s_ψ = Σ_{A∈ψ} y_A`.
pub fn elementary_symmetric(class: &IsoClass) -> Polynomial {
    let mut p = Polynomial::zero();
    for a in &class.members {
        p.add_term(y_monomial(a), BigInt::from(1));
    }
    p
}

/// Writes `∏ y_{A_i}` as `y_{⋁A_i} · μ`. For two factors `μ = y_{A_1 ∧ A_2}`.
pub fn factor_monomial_product(structures: &[Structure]) -> Result<(Structure, Polynomial)> {
    let (first, rest) = structures
        .split_first()
        .ok_or_else(|| Error::Mismatch("empty product".into()))?;
    let mut join = first.clone();
    let mut product = y_monomial(first);
    for s in rest {
        join = join.join(s)?;
        product = product.mul(&y_monomial(s));
    }
    let mu = product
        .checked_div(&y_monomial(&join))
        .expect("y of the join divides the product");
    Ok((join, Polynomial::term(mu, 1)))
}

/// Counters describing how a decomposition was obtained.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionStats {
    /// Support groupings where every class collected into a single `p_ψ`.
    pub claim_held: usize,
    /// Support groupings where isomorphic supports carried different `p_A`.
    pub claim_failed: usize,
    /// Calls answered by the exact linear solver.
    pub fallbacks: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub g: ZPolynomial,
    pub weight: usize,
    pub degree: usize,
    pub stats: DecompositionStats,
}

/// Kinships for universes `0..=n` with the class lifting maps between them.
pub struct Decomposer {
    levels: Vec<Kinship>,
    /// `lift[m][k]`: class at level `m` of class `k` of level `m - 1`.
    lift: Vec<Vec<u32>>,
}

impl Decomposer {
    pub fn new(sig: &Arc<Signature>, n: usize) -> Result<Self> {
        Self::with_caps(sig, n, DEFAULT_ENUMERATION_CAP, DEFAULT_BASIS_CAP)
    }

    pub fn with_caps(sig: &Arc<Signature>, n: usize, enumeration_cap: u64, basis_cap: usize) -> Result<Self> {
        let levels = (0..=n)
            .map(|m| Kinship::with_caps(sig, m, enumeration_cap, basis_cap))
            .collect::<Result<Vec<_>>>()?;
        let mut lift = vec![Vec::new()];
        for m in 1..=n {
            let table = levels[m - 1]
                .classes
                .iter()
                .map(|c| {
                    levels[m]
                        .class_of(&c.canonical.embed(m))
                        .expect("an embedded structure stays valid") as u32
                })
                .collect();
            lift.push(table);
        }
        Ok(Decomposer { levels, lift })
    }

    pub fn kinship(&self) -> &Kinship {
        self.levels.last().expect("at least level 0")
    }

    pub fn level(&self, m: usize) -> &Kinship {
        &self.levels[m]
    }

    /// Finds `g` with `g(S) = f` and weight at most `degree(f)`.
    pub fn decompose(&self, f: &Polynomial) -> Result<Decomposition> {
        let top = self.kinship();
        top.check_x_poly(f)?;
        if !f.is_symmetric(top.n) {
            return Err(Error::NotSymmetric);
        }
        if !is_structural(f, &top.sig, top.n) {
            return Err(Error::NotStructural);
        }
        let mut stats = DecompositionStats::default();
        let g = self.decompose_at(top.n, f, &mut stats)?;
        let g = top.zpoly(g);
        if top.expand(g.poly())? != *f {
            return Err(Error::Verification(format!(
                "g = {} does not reproduce f = {}",
                g,
                f.to_text(&top.sig)
            )));
        }
        let weight = top.weight(&g)?.weight;
        let degree = f.degree();
        if weight > degree {
            return Err(Error::Verification(format!("weight {weight} exceeds degree {degree}")));
        }
        debug!(
            "decomposed degree {degree} polynomial: {} grouping(s) collected, {} did not, {} fallback(s)",
            stats.claim_held, stats.claim_failed, stats.fallbacks
        );
        Ok(Decomposition {
            g,
            weight,
            degree,
            stats,
        })
    }

    fn decompose_at(&self, m: usize, f: &Polynomial, stats: &mut DecompositionStats) -> Result<Polynomial> {
        if f.is_constant() {
            return Ok(f.clone());
        }
        let kin = &self.levels[m];
        if let Some(g) = self.candidate(m, f, stats)? {
            if kin.expand(&g)? == *f {
                return Ok(g);
            }
        }
        stats.fallbacks += 1;
        Ok(kin.linear_solve(f, f.degree())?.into_poly())
    }

    /// Steps of the inductive construction; `None` when the support grouping
    /// does not collect into class sums.
    fn candidate(&self, m: usize, f: &Polynomial, stats: &mut DecompositionStats) -> Result<Option<Polynomial>> {
        let kin = &self.levels[m];
        let last = (m - 1) as u32;
        let restricted = f.substitute_zero_where(|v| v.mentions(last));
        let lower = self.decompose_at(m - 1, &restricted, stats)?;
        let g1 = self.lift_up(m, &lower);
        let f1 = f - &kin.expand(&g1)?;
        if f1.is_zero() {
            return Ok(Some(g1));
        }

        let parts = kin.support_decomposition(&f1)?;
        let zero = Polynomial::zero();
        let mut collected = Vec::new();
        for class in &kin.classes {
            let p = parts.get(&class.canonical).unwrap_or(&zero);
            if class.members.iter().any(|a| parts.get(a).unwrap_or(&zero) != p) {
                stats.claim_failed += 1;
                debug!(
                    "n={m}: supports isomorphic to class {} carry different cofactors",
                    class.id
                );
                return Ok(None);
            }
            if !p.is_zero() {
                collected.push((class.id, p.clone()));
            }
        }
        stats.claim_held += 1;

        let mut g = g1;
        for (id, p) in collected {
            let inner = self.decompose_at(m, &p, stats)?;
            g = &g + &inner.mul_monomial(&Monomial::var(Var::Z(id as u32)));
        }
        Ok(Some(g))
    }

    fn lift_up(&self, m: usize, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mono, c) in g.terms() {
            let lifted = Monomial::from_powers(mono.powers().iter().map(|(v, e)| match v {
                Var::Z(k) => (Var::Z(self.lift[m][*k as usize]), *e),
                other => (other.clone(), *e),
            }));
            out.add_term(lifted, c.clone());
        }
        out
    }
}

/// Sum of the distinct images of `m` under `Σ_n`.
pub fn orbit_sum(m: &Monomial, n: usize) -> Polynomial {
    let single = Polynomial::term(m.clone(), 1);
    let images: BTreeSet<Monomial> = Permutation::all(n)
        .map(|sigma| {
            let p = single.act(&sigma).expect("X variables only");
            let image = p.terms().next().expect("nonzero").0.clone();
            image
        })
        .collect();
    let mut out = Polynomial::zero();
    for image in images {
        out.add_term(image, BigInt::from(1));
    }
    out
}

/// A random symmetric structural polynomial: up to three orbit sums of
/// random products of `y_A`, each of degree at most `max_degree`, with
/// coefficients drawn from `coeffs`.
pub fn random_symmetric<R: Rng>(
    kin: &Kinship,
    rng: &mut R,
    max_degree: usize,
    coeffs: std::ops::RangeInclusive<i64>,
) -> Polynomial {
    let nonempty: Vec<&Structure> = kin.structures.iter().filter(|s| !s.is_empty()).collect();
    let mut chosen: BTreeMap<Monomial, i64> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let target = rng.gen_range(0..=max_degree);
        let mut m = Monomial::one();
        let mut degree = 0;
        loop {
            let fits: Vec<&&Structure> = nonempty.iter().filter(|s| degree + s.magnitude() <= target).collect();
            if fits.is_empty() || (degree > 0 && rng.gen_bool(0.3)) {
                break;
            }
            let s = fits[rng.gen_range(0..fits.len())];
            m = m.mul(&y_monomial(s));
            degree += s.magnitude();
        }
        let orbit = orbit_sum(&m, kin.n);
        let representative = orbit.terms().next().expect("nonempty orbit").0.clone();
        chosen.insert(representative, rng.gen_range(coeffs.clone()));
    }
    let mut f = Polynomial::zero();
    for (m, c) in chosen {
        f = &f + &orbit_sum(&m, kin.n).scale(&BigInt::from(c));
    }
    f
}
