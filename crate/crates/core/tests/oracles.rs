//! Library routines against brute-force oracles on the seeded corpus.

mod common;

use common::*;
use dgroup::Permutation;

#[test]
fn corpus_is_reproducible_and_transitive() {
    let a = corpus();
    let b = corpus();
    assert_eq!(a, b);
    assert_eq!(a.len(), CORPUS_SIZE);
    for (n, gens) in &a {
        assert!((2..=8).contains(n));
        assert!(dgroup::actions::is_transitive(&handle(*n, gens)));
    }
    let imprimitive = a
        .iter()
        .filter(|(n, gens)| !dgroup::actions::is_primitive(&handle(*n, gens)).unwrap())
        .count();
    assert!(imprimitive >= 10, "only {imprimitive} imprimitive groups");
}

#[test]
fn chain_order_and_membership_match_closure() {
    for (n, gens) in corpus() {
        let g = handle(n, &gens);
        let elements = closure(n, &gens);
        assert_eq!(g.order(), elements.len() as u128);
        let listed: std::collections::HashSet<Permutation> = g.elements(1_000_000).unwrap().collect();
        assert_eq!(listed.len(), elements.len());
        for e in &elements {
            assert!(g.has(e));
            assert!(listed.contains(e));
        }
    }
}

#[test]
fn minimal_block_containing_matches_exhaustive_search() {
    let a = agree_minimal_block(&corpus());
    assert!(a.comparisons > 500);
    assert!(a.mismatches.is_empty(), "{:#?}", a.mismatches);
}

#[test]
fn block_systems_match_exhaustive_search() {
    let a = agree_block_systems(&corpus());
    assert!(a.mismatches.is_empty(), "{:#?}", a.mismatches);
}

#[test]
fn kernels_match_exhaustive_search() {
    let a = agree_kernels(&corpus());
    assert!(a.comparisons >= 10);
    assert!(a.mismatches.is_empty(), "{:#?}", a.mismatches);
}

#[test]
fn centralizers_match_exhaustive_search() {
    let a = agree_centralizers(&corpus());
    assert_eq!(a.comparisons, 3 * CORPUS_SIZE);
    assert!(a.mismatches.is_empty(), "{:#?}", a.mismatches);
}

#[test]
fn split_test_matches_homomorphism_enumeration() {
    let (a, split, nonsplit) = agree_splits(&corpus());
    assert!(a.mismatches.is_empty(), "{:#?}", a.mismatches);
    assert!(split > 0 && nonsplit > 0, "split {split}, non-split {nonsplit}");
}

#[test]
fn split_oracle_on_known_groups() {
    // Z4 does not split over its subgroup of order 2; Z2 x Z2 does.
    let c4 = vec![Permutation::parse("(1 2 3 4)", 4).unwrap()];
    assert!(!brute_splits(4, &c4, &c4[0].pow(2), 2));
    let v4 = vec![
        Permutation::parse("(1 2)(3 4)", 4).unwrap(),
        Permutation::parse("(1 3)(2 4)", 4).unwrap(),
    ];
    assert!(brute_splits(4, &v4, &v4[0], 2));
}
