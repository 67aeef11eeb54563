use std::sync::OnceLock;

use proptest::prelude::*;

use moufang::catalog::{builtin, enumerate_loops, Provenance};
use moufang::halfmorph::{classify_map, kernel, ElementMap, Verdict};
use moufang::identities::{is_group, is_moufang};
use moufang::structure::{generated_subloop, is_normal, quotient};
use moufang::{parse_loop, serialize_loop, LoopTable};

fn small_loops() -> &'static [Vec<LoopTable>] {
    static LOOPS: OnceLock<Vec<Vec<LoopTable>>> = OnceLock::new();
    LOOPS.get_or_init(|| (1..=6).map(|n| enumerate_loops(n).unwrap()).collect())
}

fn catalog_groups() -> &'static [LoopTable] {
    static GROUPS: OnceLock<Vec<LoopTable>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        builtin()
            .into_iter()
            .filter(|e| e.provenance == Provenance::GroupConstruction)
            .map(|e| e.table)
            .collect()
    })
}

/// `σ` must fix 0; the result is the isomorphic copy `σ(x)·σ(y) = σ(xy)`.
fn relabel(q: &LoopTable, sigma: &[usize]) -> LoopTable {
    let mut inv = vec![0; sigma.len()];
    for (x, &s) in sigma.iter().enumerate() {
        inv[s] = x;
    }
    LoopTable::from_fn(q.order(), None, |x, y| sigma[q.mul(inv[x], inv[y])]).unwrap()
}

fn relabeling(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|tail| std::iter::once(0).chain(tail).collect())
}

/// An enumerated loop of order `≤ 6` under a random relabelling.
fn any_loop() -> impl Strategy<Value = LoopTable> {
    (1usize..=6)
        .prop_flat_map(|n| (0..small_loops()[n - 1].len(), relabeling(n)))
        .prop_map(|(i, sigma)| {
            let q = &small_loops()[sigma.len() - 1][i];
            relabel(q, &sigma)
        })
}

proptest! {
    #[test]
    fn text_and_json_round_trip(q in any_loop()) {
        let named = q.clone().with_name("sample");
        prop_assert_eq!(&parse_loop(&serialize_loop(&named)).unwrap(), &named);
        prop_assert_eq!(&parse_loop(&named.to_json()).unwrap(), &named);
    }

    #[test]
    fn division_inverts_multiplication(q in any_loop(), x in 0usize..6, y in 0usize..6) {
        let (x, y) = (x % q.order(), y % q.order());
        prop_assert_eq!(q.mul(x, q.ldiv(x, y)), y);
        prop_assert_eq!(q.ldiv(x, q.mul(x, y)), y);
        prop_assert_eq!(q.mul(q.rdiv(y, x), x), y);
        prop_assert_eq!(q.rdiv(q.mul(y, x), x), y);
    }

    #[test]
    fn generation_is_monotone_and_idempotent(
        q in any_loop(),
        small in prop::collection::vec(0usize..6, 1..3),
        extra in prop::collection::vec(0usize..6, 0..3),
    ) {
        let n = q.order();
        let xs: Vec<usize> = small.iter().map(|x| x % n).collect();
        let ys: Vec<usize> = xs.iter().chain(&extra).map(|x| x % n).collect();
        let gx = generated_subloop(&q, &xs).unwrap();
        let gy = generated_subloop(&q, &ys).unwrap();
        prop_assert!(xs.iter().all(|&x| gx.contains(x)));
        prop_assert!(gx.is_subset(&gy));
        prop_assert_eq!(generated_subloop(&q, gx.elements()).unwrap(), gx.clone());
        prop_assert!(gx.closure_failure(&q).is_none());
    }

    #[test]
    fn relabelling_is_an_isomorphism(i in 0usize..9408, sigma in relabeling(6)) {
        let q = &small_loops()[5][i];
        let r = relabel(q, &sigma);
        let phi = ElementMap::new(q, &r, sigma).unwrap();
        prop_assert_eq!(classify_map(&phi).verdict, Verdict::Isomorphism);
        prop_assert_eq!(is_group(q).holds, is_group(&r).holds);
        prop_assert_eq!(is_moufang(q).unwrap().holds, is_moufang(&r).unwrap().holds);
    }

    /// Projections onto quotients, optionally followed by inversion in the
    /// quotient, are half-homomorphisms whose kernel is the normal subgroup.
    #[test]
    fn kernels_of_projections_are_closed(
        g in 0usize..64,
        gens in prop::collection::vec(0usize..16, 1..3),
        anti in any::<bool>(),
    ) {
        let q = &catalog_groups()[g % catalog_groups().len()];
        let gens: Vec<usize> = gens.iter().map(|x| x % q.order()).collect();
        let h = generated_subloop(q, &gens).unwrap();
        prop_assume!(is_normal(q, &h).unwrap());
        let quot = quotient(q, &h).unwrap();
        let images: Vec<usize> = if anti {
            quot.projection.iter().map(|&c| quot.table.inverse(c).unwrap()).collect()
        } else {
            quot.projection.clone()
        };
        let phi = ElementMap::new(q, &quot.table, images).unwrap();
        let c = classify_map(&phi);
        prop_assert!(c.is_half_homomorphism());
        prop_assert_eq!(c.bijective, h.len() == 1);
        let k = kernel(&phi).unwrap();
        prop_assert!(k.closure_failure(q).is_none());
        prop_assert_eq!(k, h);
    }
}
