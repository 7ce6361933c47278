//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p kinship --test acceptance`; add `--release` for speed.

use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use kinship::logic::corpus::{ground_formulas, ground_triangle, random_quantified};
use kinship::logic::{self, evaluate_by_counting, Formula};
use kinship::poly::{is_structural, is_structural_monomial, y_monomial};
use kinship::report::PaperExample;
use kinship::symfun::random_symmetric;
use kinship::{
    act_on_structure, canonical_form, Decomposer, Decomposition, Kinship, Monomial, Permutation, Polynomial, Signature,
    Var,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed shared by every randomized criterion.
const SEED: u64 = 0x5eed_2024;
/// Random polynomials per signature in the round-trip criterion.
const ROUND_TRIPS: usize = 100;
/// Seeded quantified formulas added to the ground corpus.
const QUANTIFIED: usize = 50;
/// Seeded samples for the lattice and canonical-form checks.
const SAMPLES: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("domain digraph example", criterion_1),
        ("decomposition round trip", criterion_2),
        ("classical special case", criterion_3),
        ("positivity lemma", criterion_4),
        ("counting corollary", criterion_5),
        ("structural invariants", criterion_6),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{elapsed:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail}) [{elapsed:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

/// |X| = 6, 25 structures, and the displayed relation expands to exactly 0.
fn criterion_1() -> Outcome {
    let ex = PaperExample::compute().map_err(|e| e.to_string())?;
    let xs = ex.kinship.x_vars().len();
    let structures = ex.kinship.structures().len();
    ensure(xs == 6, || format!("|X|={xs}, expected 6"))?;
    ensure(structures == 25, || format!("{structures} structures, expected 25"))?;
    ensure(ex.expanded.is_zero(), || {
        format!("relation expands to {}", ex.expanded.to_text(ex.kinship.signature()))
    })?;
    let summary = ex.to_text();
    let last = summary.lines().last().unwrap_or_default();
    ensure(last == "|X|=6 |structures|=25 dependence=0 verified", || {
        format!("report ends with `{last}`")
    })?;
    Ok(last.to_owned())
}

/// Exact round trip and weight ≤ degree for 100 seeded polynomials on each of six kinship classes.
fn criterion_2() -> Outcome {
    let cases = [
        ("unary n=2", Signature::unary(), 2),
        ("unary n=3", Signature::unary(), 3),
        ("unary n=4", Signature::unary(), 4),
        ("binary n=2", Signature::binary(), 2),
        ("domain digraph n=2", Signature::domain_digraph(), 2),
        ("swap-closed binary n=3", Signature::undirected_graph(), 3),
    ];
    let mut total = 0;
    let mut fallbacks = 0;
    let mut claim_failed = 0;
    for (label, sig, n) in cases {
        let sig = Arc::new(sig);
        let dec = Decomposer::new(&sig, n).map_err(|e| format!("{label}: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for case in 0..ROUND_TRIPS {
            let f = random_symmetric(dec.kinship(), &mut rng, 4, -9..=9);
            let d = dec
                .decompose(&f)
                .map_err(|e| format!("{label} case {case}: THEOREM CHECK FAILED: {e}"))?;
            let back = dec.kinship().expand(d.g.poly()).map_err(|e| e.to_string())?;
            ensure(back == f, || {
                format!("{label} case {case}: substitute(g, S) != f for f = {}", f.to_text(&sig))
            })?;
            ensure(d.weight <= f.degree(), || {
                format!("{label} case {case}: weight {} > degree {}", d.weight, f.degree())
            })?;
            fallbacks += d.stats.fallbacks;
            claim_failed += d.stats.claim_failed;
            total += 1;
        }
    }
    Ok(format!(
        "{total}/{total} exact, weight <= degree; {claim_failed} grouping(s) fell through, {fallbacks} linear fallback(s)"
    ))
}

/// x0² + x1² + x2² = z1² − 2·z2, matched syntactically and by the linear solver.
fn criterion_3() -> Outcome {
    let sig = Arc::new(Signature::unary());
    let dec = Decomposer::new(&sig, 3).map_err(|e| e.to_string())?;
    let mut f = Polynomial::zero();
    for i in 0..3 {
        f = &f + &Polynomial::var(Var::x(0, &[i])).pow(2);
    }
    let d = dec.decompose(&f).map_err(|e| e.to_string())?;
    let size = |k: usize| dec.kinship().classes().iter().position(|c| c.magnitude == k).unwrap() as u32;
    let z1 = Polynomial::var(Var::Z(size(1)));
    let z2 = Polynomial::var(Var::Z(size(2)));
    let expected = &z1.pow(2) - &z2.scale(&BigInt::from(2));
    ensure(*d.g.poly() == expected, || {
        format!("got {}, expected {}", d.g, dec.kinship().zpoly(expected.clone()))
    })?;
    ensure(
        dec.kinship().expand(d.g.poly()).map_err(|e| e.to_string())? == f,
        || "g(S) != f".into(),
    )?;
    let oracle = dec.kinship().linear_solve(&f, 2).map_err(|e| e.to_string())?;
    ensure(*oracle.poly() == expected, || format!("linear solver gives {oracle}"))?;
    Ok(format!("g = {}", d.g))
}

fn corpus(sig: &Signature) -> Vec<Formula> {
    let mut all = ground_formulas(sig, 2, 3);
    all.extend(random_quantified(sig, 2, QUANTIFIED, 3, SEED));
    all
}

/// A ⊨ Γ ⇔ ξ(Γ)(A) > 0, and ξ(Γ)(A) ≥ 0, over the full corpus and all 25 domain digraphs.
fn criterion_4() -> Outcome {
    let sig = Arc::new(Signature::domain_digraph());
    let kin = Kinship::new(&sig, 2).map_err(|e| e.to_string())?;
    let formulas = corpus(&sig);
    let mut checks = 0;
    for gamma in &formulas {
        let p = logic::realize(gamma, &sig, 2).map_err(|e| e.to_string())?;
        for a in kin.structures() {
            let value = p.evaluate(a).map_err(|e| e.to_string())?;
            let holds = logic::models(a, gamma).map_err(|e| e.to_string())?;
            ensure(!value.is_negative(), || {
                format!("{} has value {value} on {a}", gamma.to_text(&sig))
            })?;
            ensure(holds == value.is_positive(), || {
                format!("{} on {a}: models={holds} but value={value}", gamma.to_text(&sig))
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "{} formulas x {} structures = {checks} checks, 0 exceptions",
        formulas.len(),
        kin.structures().len()
    ))
}

/// Counting agrees with direct semantics on every invariant corpus formula,
/// with g evaluated at counts equal to ξ(Γ)(A) and every ‖ψ‖ ≤ degree ξ(Γ).
fn criterion_5() -> Outcome {
    let sig = Arc::new(Signature::domain_digraph());
    let dec = Decomposer::new(&sig, 2).map_err(|e| e.to_string())?;
    let kin = dec.kinship();
    let mut cache: HashMap<Polynomial, Decomposition> = HashMap::new();
    let mut invariant = 0;
    let mut checks = 0;
    for gamma in corpus(&sig) {
        let text = gamma.to_text(&sig);
        let p = logic::realize(&gamma, &sig, 2).map_err(|e| e.to_string())?;
        if !(is_structural(&p, &sig, 2) && p.is_symmetric(2)) {
            continue;
        }
        invariant += 1;
        if !cache.contains_key(&p) {
            let d = dec.decompose(&p).map_err(|e| format!("{text}: {e}"))?;
            cache.insert(p.clone(), d);
        }
        let d = &cache[&p];
        let bound = p.degree();
        let largest = largest_class(d, kin);
        ensure(largest <= bound, || {
            format!("{text}: class of magnitude {largest} exceeds degree {bound}")
        })?;
        for a in kin.structures() {
            let (value, _) = evaluate_by_counting(&d.g, a, kin).map_err(|e| e.to_string())?;
            let direct = p.evaluate(a).map_err(|e| e.to_string())?;
            let holds = logic::models(a, &gamma).map_err(|e| e.to_string())?;
            ensure(value == direct, || {
                format!("{text} on {a}: counting {value} != realized {direct}")
            })?;
            ensure(holds == value.is_positive(), || {
                format!("{text} on {a}: models={holds}, counting={value}")
            })?;
            checks += 1;
        }
    }
    ensure(invariant > 0, || "no invariant formulas in the corpus".into())?;

    // The ground 3-cycle formula, plain binary signature, three elements.
    let graph = Arc::new(Signature::binary());
    let dec3 = Decomposer::new(&graph, 3).map_err(|e| e.to_string())?;
    let triangle = ground_triangle(0, 3);
    let bound = logic::weight_bound(&triangle, &graph, 3).map_err(|e| e.to_string())?;
    ensure(bound == 3, || format!("3-cycle weight bound {bound}, expected 3"))?;
    let mut largest = 0;
    for a in dec3.kinship().structures() {
        let check = logic::check_by_counting(&triangle, a, &dec3).map_err(|e| e.to_string())?;
        let holds = logic::models(a, &triangle).map_err(|e| e.to_string())?;
        ensure(check.holds == holds, || {
            format!("3-cycle on {a}: counting {} vs direct {holds}", check.holds)
        })?;
        largest = largest.max(largest_class(&check.decomposition, dec3.kinship()));
        checks += 1;
    }
    ensure(largest == 3, || {
        format!("3-cycle uses classes up to magnitude {largest}, expected exactly 3")
    })?;
    Ok(format!(
        "{invariant} invariant corpus formulas ({} distinct realizations), 3-cycle bound 3 over {} digraphs; {checks} checks",
        cache.len(),
        dec3.kinship().structures().len()
    ))
}

fn largest_class(d: &Decomposition, kin: &Kinship) -> usize {
    d.g.poly()
        .vars()
        .map(|v| match v {
            Var::Z(k) => kin.classes()[*k as usize].magnitude,
            Var::X { .. } => usize::MAX,
        })
        .max()
        .unwrap_or(0)
}

/// Homogeneity and symmetry of every s_ψ, distributivity and orbit-constancy
/// on seeded samples, and is_structural against exhaustive factorization.
fn criterion_6() -> Outcome {
    let mut homogeneous = 0;
    for (sig, n) in [
        (Signature::domain_digraph(), 2),
        (Signature::unary(), 4),
        (Signature::binary(), 3),
        (Signature::undirected_graph(), 3),
    ] {
        let kin = Kinship::new(&Arc::new(sig), n).map_err(|e| e.to_string())?;
        for c in kin.classes() {
            let s = kin.elementary(c.id);
            ensure(s.is_homogeneous(c.magnitude), || {
                format!("s[{}] is not homogeneous of degree {}", c.id, c.magnitude)
            })?;
            ensure(s.is_symmetric(n), || format!("s[{}] is not symmetric", c.id))?;
            homogeneous += 1;
        }
    }

    let binary = Arc::new(Signature::binary());
    let digraphs = Kinship::new(&binary, 3).map_err(|e| e.to_string())?;
    let all = digraphs.structures();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..SAMPLES {
        let pick = |rng: &mut ChaCha8Rng| &all[rng.gen_range(0..all.len())];
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let lhs = a.meet(&b.join(c).unwrap()).unwrap();
        let rhs = a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap();
        ensure(lhs == rhs, || {
            format!("meet does not distribute over join at {a}, {b}, {c}")
        })?;
        let lhs = a.join(&b.meet(c).unwrap()).unwrap();
        let rhs = a.join(b).unwrap().meet(&a.join(c).unwrap()).unwrap();
        ensure(lhs == rhs, || {
            format!("join does not distribute over meet at {a}, {b}, {c}")
        })?;
    }
    let perms: Vec<Permutation> = Permutation::all(3).collect();
    for _ in 0..SAMPLES {
        let sigma = &perms[rng.gen_range(0..perms.len())];
        let a = &all[rng.gen_range(0..all.len())];
        let moved = act_on_structure(sigma, a).unwrap();
        ensure(canonical_form(&moved) == canonical_form(a), || {
            format!("canonical form moves under {sigma} at {a}")
        })?;
    }

    let (monomials, structural) = structural_oracle_agreement()?;
    Ok(format!(
        "{homogeneous} s_psi homogeneous and symmetric, {SAMPLES} lattice triples, {SAMPLES} orbit pairs, {monomials} monomials ({structural} structural)"
    ))
}

/// Every monomial of degree ≤ 4 over two-element domain digraphs, checked
/// against a search over all factorizations into `y_A`.
fn structural_oracle_agreement() -> Result<(usize, usize), String> {
    let sig = Arc::new(Signature::domain_digraph());
    let kin = Kinship::new(&sig, 2).map_err(|e| e.to_string())?;
    let ys: Vec<Monomial> = kin
        .structures()
        .iter()
        .filter(|a| !a.is_empty())
        .map(y_monomial)
        .collect();
    let vars = kin.x_vars();
    let mut layer = vec![Monomial::one()];
    let mut all = vec![Monomial::one()];
    for _ in 0..4 {
        let mut next: Vec<Monomial> = layer
            .iter()
            .flat_map(|m| vars.iter().map(move |v| m.mul(&Monomial::var(v.clone()))))
            .collect();
        next.sort();
        next.dedup();
        all.extend(next.iter().cloned());
        layer = next;
    }
    let mut memo = HashMap::new();
    let mut structural = 0;
    for m in &all {
        let expected = factors(m, &ys, &mut memo);
        ensure(is_structural_monomial(m, &sig, 2) == expected, || {
            format!(
                "is_structural disagrees with factorization search at {}",
                Polynomial::term(m.clone(), 1).to_text(&sig)
            )
        })?;
        structural += usize::from(expected);
    }
    Ok((all.len(), structural))
}

fn factors(m: &Monomial, ys: &[Monomial], memo: &mut HashMap<Monomial, bool>) -> bool {
    if m.is_one() {
        return true;
    }
    if let Some(&known) = memo.get(m) {
        return known;
    }
    let found = ys
        .iter()
        .any(|y| m.checked_div(y).is_some_and(|rest| factors(&rest, ys, memo)));
    memo.insert(m.clone(), found);
    found
}
