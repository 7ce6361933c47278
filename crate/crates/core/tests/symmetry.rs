use std::collections::BTreeSet;
use std::sync::Arc;

use kinship::symmetry::classes_manifest;
use kinship::{
    act_on_structure, canonical_form, enumerate_kinship, iso_classes, Permutation, Signature, Structure,
    DEFAULT_ENUMERATION_CAP,
};
use proptest::prelude::*;

fn kinship(sig: &Signature, n: usize) -> Vec<Structure> {
    enumerate_kinship(&Arc::new(sig.clone()), n, DEFAULT_ENUMERATION_CAP).unwrap()
}

/// The orbit of `a`, closed under the two generators only.
fn orbit_by_generators(a: &Structure) -> BTreeSet<Structure> {
    let gens = Permutation::generators(a.n());
    let mut seen = BTreeSet::from([a.clone()]);
    let mut frontier = vec![a.clone()];
    while let Some(b) = frontier.pop() {
        for g in &gens {
            let c = act_on_structure(g, &b).unwrap();
            if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    seen
}

/// Burnside: the number of orbits is the average number of fixed points.
fn burnside(all: &[Structure], n: usize) -> usize {
    let mut fixed = 0;
    let mut group = 0;
    for sigma in Permutation::all(n) {
        group += 1;
        fixed += all
            .iter()
            .filter(|a| act_on_structure(&sigma, a).unwrap() == **a)
            .count();
    }
    assert_eq!(fixed % group, 0);
    fixed / group
}

#[test]
fn class_counts_agree_with_burnside() {
    let cases = [
        (Signature::unary(), 4, 5),
        (Signature::binary(), 2, 10),
        (Signature::binary(), 3, 104),
        (Signature::undirected_graph(), 3, 20),
        (Signature::domain_digraph(), 2, 15),
    ];
    for (sig, n, expected) in cases {
        let all = kinship(&sig, n);
        let classes = iso_classes(&all);
        assert_eq!(burnside(&all, n), expected);
        assert_eq!(classes.len(), expected);
        assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), all.len());
    }
}

#[test]
fn canonical_form_matches_the_generator_orbit() {
    for (sig, n) in [
        (Signature::domain_digraph(), 2),
        (Signature::binary(), 3),
        (Signature::unary(), 4),
    ] {
        for a in kinship(&sig, n) {
            let orbit = orbit_by_generators(&a);
            assert_eq!(canonical_form(&a), *orbit.first().unwrap());
        }
    }
}

#[test]
fn classes_are_orbits() {
    let all = kinship(&Signature::domain_digraph(), 2);
    let classes = iso_classes(&all);
    for (id, c) in classes.iter().enumerate() {
        assert_eq!(c.id, id);
        let members: BTreeSet<Structure> = c.members.iter().cloned().collect();
        assert_eq!(members, orbit_by_generators(&c.canonical));
        assert!(c.members.iter().all(|m| m.magnitude() == c.magnitude));
        assert_eq!(2 % c.size(), 0);
    }
    // Sorted by magnitude, then canonical form.
    for w in classes.windows(2) {
        assert!((w[0].magnitude, &w[0].canonical) < (w[1].magnitude, &w[1].canonical));
    }
    let manifest = classes_manifest(&classes);
    assert_eq!(manifest.lines().count(), 15);
    assert_eq!(
        manifest.lines().last().unwrap(),
        r#"z[14] = {"n":2,"relations":{"E":[[0,0],[0,1],[1,0],[1,1]],"W":[[0],[1]]}} (size=1, magnitude=6)"#
    );
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|p| Permutation::new(p).unwrap())
}

proptest! {
    #[test]
    fn action_is_a_group_action(sigma in permutation(3), tau in permutation(3), i in 0usize..512) {
        let all = kinship(&Signature::binary(), 3);
        let a = &all[i];
        let id = Permutation::identity(3);
        prop_assert_eq!(act_on_structure(&id, a).unwrap(), a.clone());
        let step = act_on_structure(&sigma, &act_on_structure(&tau, a).unwrap()).unwrap();
        prop_assert_eq!(act_on_structure(&sigma.compose(&tau), a).unwrap(), step);
        let there = act_on_structure(&sigma, a).unwrap();
        prop_assert_eq!(act_on_structure(&sigma.inverse(), &there).unwrap(), a.clone());
        prop_assert_eq!(there.magnitude(), a.magnitude());
        prop_assert_eq!(canonical_form(&there), canonical_form(a));
    }

    #[test]
    fn action_preserves_validity_and_order(sigma in permutation(3), i in 0usize..64, j in 0usize..64) {
        let all = kinship(&Signature::undirected_graph(), 3);
        let (a, b) = (&all[i], &all[j]);
        let (sa, sb) = (act_on_structure(&sigma, a).unwrap(), act_on_structure(&sigma, b).unwrap());
        prop_assert!(sa.is_valid());
        prop_assert_eq!(a.is_substructure_of(b).unwrap(), sa.is_substructure_of(&sb).unwrap());
        prop_assert_eq!(act_on_structure(&sigma, &a.join(b).unwrap()).unwrap(), sa.join(&sb).unwrap());
    }
}

#[test]
fn permutation_errors() {
    assert!(Permutation::new(vec![0, 0]).is_err());
    assert!(Permutation::new(vec![0, 2]).is_err());
    let sig = Arc::new(Signature::unary());
    assert!(act_on_structure(&Permutation::identity(3), &Structure::empty(&sig, 2)).is_err());
}
