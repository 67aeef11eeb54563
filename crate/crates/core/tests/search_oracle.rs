//! The pruned search against a scan of every bijection.

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use moufang::catalog::{builtin, dihedral, enumerate_loops, quaternion};
use moufang::halfmorph::{
    classify_map, enumerate_half_isomorphisms, ElementMap, SearchOptions, VerdictFilter,
};
use moufang::LoopTable;

fn scan_all_bijections(a: &LoopTable, b: &LoopTable, proper_only: bool) -> Vec<Vec<usize>> {
    if a.order() != b.order() {
        return Vec::new();
    }
    (0..a.order())
        .permutations(a.order())
        .filter(|p| {
            let c = classify_map(&ElementMap::new(a, b, p.clone()).unwrap());
            c.is_half_isomorphism() && (!proper_only || c.is_proper())
        })
        .collect()
}

fn pruned(a: &LoopTable, b: &LoopTable, filter: VerdictFilter, parallel: bool) -> Vec<Vec<usize>> {
    let found = enumerate_half_isomorphisms(
        a,
        b,
        &SearchOptions {
            filter,
            first: false,
            parallel,
        },
    );
    for f in &found {
        let phi = ElementMap::new(a, b, f.images.clone()).unwrap();
        assert_eq!(classify_map(&phi), f.classification);
    }
    found.into_iter().map(|f| f.images).collect()
}

fn assert_equivalent(a: &LoopTable, b: &LoopTable) {
    let all = scan_all_bijections(a, b, false);
    let ctx = format!("{} -> {}", a.label(), b.label());
    assert_eq!(pruned(a, b, VerdictFilter::All, true), all, "{ctx}");
    assert_eq!(pruned(a, b, VerdictFilter::All, false), all, "{ctx}");
    assert_eq!(
        pruned(a, b, VerdictFilter::ProperOnly, true),
        scan_all_bijections(a, b, true),
        "{ctx}"
    );
    let first = enumerate_half_isomorphisms(
        a,
        b,
        &SearchOptions {
            first: true,
            ..SearchOptions::default()
        },
    );
    match first.as_slice() {
        [] => assert!(all.is_empty(), "{ctx}"),
        [f] => assert!(all.contains(&f.images), "{ctx}"),
        _ => panic!("{ctx}: first mode returned {} maps", first.len()),
    }
}

#[test]
fn named_loops_up_to_order_six() {
    let small: Vec<LoopTable> = builtin()
        .into_iter()
        .map(|e| e.table)
        .filter(|t| t.order() <= 6)
        .collect();
    for a in &small {
        for b in small.iter().filter(|b| b.order() == a.order()) {
            assert_equivalent(a, b);
        }
    }
}

#[test]
fn every_pair_of_order_at_most_five() {
    for n in 1..=5 {
        let loops = enumerate_loops(n).unwrap();
        for a in &loops {
            for b in &loops {
                assert_equivalent(a, b);
            }
        }
    }
}

#[test]
fn sampled_pairs_of_order_six() {
    let loops = enumerate_loops(6).unwrap();
    let mut rng = StdRng::seed_from_u64(0x6d6f_7566);
    for _ in 0..150 {
        let a = loops.choose(&mut rng).unwrap();
        let b = loops.choose(&mut rng).unwrap();
        assert_equivalent(a, b);
        assert_equivalent(a, a);
    }
}

#[test]
fn groups_of_order_eight() {
    let d4 = dihedral(4);
    let q8 = quaternion();
    for (a, b) in [(&d4, &d4), (&q8, &q8), (&d4, &q8)] {
        assert_equivalent(a, b);
    }
    // Automorphisms and anti-automorphisms of a nonabelian group are disjoint.
    assert_eq!(scan_all_bijections(&q8, &q8, false).len(), 48);
    assert_eq!(scan_all_bijections(&d4, &d4, false).len(), 16);
}
