use std::collections::BTreeSet;
use std::sync::Arc;

use kinship::{enumerate_kinship, Signature, Structure, DEFAULT_ENUMERATION_CAP};
use proptest::prelude::*;

/// All tuples of `arity` elements below `n`, built by nested counting.
fn all_tuples(n: u32, arity: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every subset of facts, kept when closed under each relator: an oracle
/// for the enumeration that shares nothing with it but `insert`.
fn filtered_kinship(sig: &Arc<Signature>, n: u32) -> BTreeSet<Structure> {
    let facts: Vec<(usize, Vec<u32>)> = (0..sig.len())
        .flat_map(|s| all_tuples(n, sig.arity(s)).into_iter().map(move |t| (s, t)))
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << facts.len() {
        let chosen: Vec<&(usize, Vec<u32>)> = (0..facts.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &facts[i])
            .collect();
        let closed = sig.relators().iter().all(|r| {
            let from = sig.symbol_index(&r.from).unwrap();
            let to = sig.symbol_index(&r.to).unwrap();
            chosen.iter().filter(|(s, _)| *s == from).all(|(_, t)| {
                let image: Vec<u32> = r.coords.iter().map(|&c| t[c]).collect();
                chosen.iter().any(|(s, u)| *s == to && *u == image)
            })
        });
        if closed {
            let mut a = Structure::empty(sig, n as usize);
            for (s, t) in chosen {
                a.insert(*s, t);
            }
            out.insert(a);
        }
    }
    out
}

fn signatures() -> Vec<Arc<Signature>> {
    vec![
        Arc::new(Signature::unary()),
        Arc::new(Signature::binary()),
        Arc::new(Signature::domain_digraph()),
        Arc::new(Signature::undirected_graph()),
    ]
}

#[test]
fn enumeration_matches_the_filter_oracle() {
    for sig in signatures() {
        for n in 0..=3u32 {
            if (0..sig.len())
                .map(|s| (n as usize).pow(sig.arity(s) as u32))
                .sum::<usize>()
                > 16
            {
                continue;
            }
            let listed = enumerate_kinship(&sig, n as usize, DEFAULT_ENUMERATION_CAP).unwrap();
            let as_set: BTreeSet<Structure> = listed.iter().cloned().collect();
            assert_eq!(as_set.len(), listed.len(), "duplicates for n={n}");
            assert_eq!(as_set, filtered_kinship(&sig, n), "n={n}");
        }
    }
}

#[test]
fn paper_listing_has_25_members() {
    let sig = Arc::new(Signature::domain_digraph());
    assert_eq!(enumerate_kinship(&sig, 2, DEFAULT_ENUMERATION_CAP).unwrap().len(), 25);
    assert_eq!(enumerate_kinship(&sig, 0, DEFAULT_ENUMERATION_CAP).unwrap().len(), 1);
}

#[test]
fn enumeration_cap_is_enforced() {
    let sig = Arc::new(Signature::binary());
    // Nine tuple bits: 512 candidate assignments.
    assert!(enumerate_kinship(&sig, 3, 511).is_err());
    assert_eq!(enumerate_kinship(&sig, 3, 512).unwrap().len(), 512);
}

#[test]
fn json_round_trip_and_errors() {
    let sig = Arc::new(Signature::domain_digraph());
    let text = r#"{"n":2,"relations":{"E":[[0,1],[0,0]],"W":[[0]]}}"#;
    let a = Structure::from_json(&sig, text).unwrap();
    assert_eq!(a.to_json(), r#"{"n":2,"relations":{"E":[[0,0],[0,1]],"W":[[0]]}}"#);
    assert_eq!(Structure::from_json(&sig, &a.to_json()).unwrap(), a);
    // Duplicates, bad arity, out-of-range elements, unknown symbols.
    for bad in [
        r#"{"n":2,"relations":{"E":[[0,1],[0,1]],"W":[[0]]}}"#,
        r#"{"n":2,"relations":{"E":[[0]],"W":[[0]]}}"#,
        r#"{"n":2,"relations":{"E":[[0,2]],"W":[[0]]}}"#,
        r#"{"n":2,"relations":{"F":[[0,1]],"W":[[0]]}}"#,
    ] {
        assert!(Structure::from_json(&sig, bad).is_err(), "{bad}");
    }
    // Relator violations are readable, and reported by validation.
    let open = Structure::from_json(&sig, r#"{"n":2,"relations":{"E":[[1,0]],"W":[[0]]}}"#).unwrap();
    let violation = open.validate().unwrap_err();
    assert_eq!(violation.tuple.as_slice(), &[1, 0]);
    assert_eq!(violation.image.as_slice(), &[1]);
    let sig_text = sig.to_json();
    assert_eq!(Signature::from_json(&sig_text).unwrap(), *sig);
}

fn kinship(sig: &Arc<Signature>, n: usize) -> Vec<Structure> {
    enumerate_kinship(sig, n, DEFAULT_ENUMERATION_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_laws(i in 0usize..512, j in 0usize..512, k in 0usize..512) {
        for (sig, n) in [(Arc::new(Signature::binary()), 3), (Arc::new(Signature::domain_digraph()), 2)] {
            let all = kinship(&sig, n);
            let (a, b, c) = (&all[i % all.len()], &all[j % all.len()], &all[k % all.len()]);
            let join = |x: &Structure, y: &Structure| x.join(y).unwrap();
            let meet = |x: &Structure, y: &Structure| x.meet(y).unwrap();
            prop_assert!(join(a, b).is_valid() && meet(a, b).is_valid());
            prop_assert_eq!(join(a, b), join(b, a));
            prop_assert_eq!(meet(a, b), meet(b, a));
            prop_assert_eq!(join(&join(a, b), c), join(a, &join(b, c)));
            prop_assert_eq!(meet(&meet(a, b), c), meet(a, &meet(b, c)));
            prop_assert_eq!(join(a, &meet(a, b)), a.clone());
            prop_assert_eq!(meet(a, &join(a, b)), a.clone());
            prop_assert_eq!(meet(a, &join(b, c)), join(&meet(a, b), &meet(a, c)));
            prop_assert_eq!(join(a, &meet(b, c)), meet(&join(a, b), &join(a, c)));
            // The order is the lattice order, and the magnitude is modular.
            prop_assert_eq!(a.is_substructure_of(b).unwrap(), join(a, b) == *b);
            prop_assert!(meet(a, b).is_substructure_of(a).unwrap());
            prop_assert_eq!(
                join(a, b).magnitude() + meet(a, b).magnitude(),
                a.magnitude() + b.magnitude()
            );
        }
    }

    #[test]
    fn partial_order(i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let sig = Arc::new(Signature::undirected_graph());
        let all = kinship(&sig, 3);
        let (a, b, c) = (&all[i], &all[j], &all[k]);
        let le = |x: &Structure, y: &Structure| x.is_substructure_of(y).unwrap();
        prop_assert!(le(a, a));
        if le(a, b) && le(b, a) {
            prop_assert_eq!(a, b);
        }
        if le(a, b) && le(b, c) {
            prop_assert!(le(a, c));
        }
        // Structure order extends inclusion.
        if le(a, b) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn images_compose(
        i in 0usize..25,
        h1 in proptest::collection::vec(0u32..3, 2),
        h2 in proptest::collection::vec(0u32..2, 3),
    ) {
        let sig = Arc::new(Signature::domain_digraph());
        let all = kinship(&sig, 2);
        let a = &all[i];
        let once = a.image(&h1, 3).unwrap();
        prop_assert!(once.is_valid());
        prop_assert!(a.is_morphism(&h1, &once).unwrap());
        let twice = once.image(&h2, 2).unwrap();
        let composed: Vec<u32> = h1.iter().map(|&e| h2[e as usize]).collect();
        prop_assert_eq!(twice, a.image(&composed, 2).unwrap());
        prop_assert!(once.magnitude() <= a.magnitude());
    }
}

#[test]
fn mixed_kinship_is_rejected() {
    let dd = Arc::new(Signature::domain_digraph());
    let a = Structure::empty(&dd, 2);
    assert!(a.join(&Structure::empty(&dd, 3)).is_err());
    let other = Arc::new(Signature::binary());
    assert!(a.meet(&Structure::empty(&other, 2)).is_err());
}
