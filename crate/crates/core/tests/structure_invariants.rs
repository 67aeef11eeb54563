use moufang::catalog::{builtin, builtin_by_name, enumerate_loops, paper_star, CatalogEntry};
use moufang::halfmorph::{classify_map, kernel, ElementMap, Verdict};
use moufang::identities::{is_automorphic, is_diassociative, is_group, is_moufang};
use moufang::structure::{
    is_normal, is_normal_by_inner_mappings, nucleus, quotient, squaring_on_quotient,
};
use moufang::LoopTable;

fn moufang_loops() -> Vec<LoopTable> {
    let mut out: Vec<LoopTable> = builtin().into_iter().map(|e| e.table).collect();
    for n in 1..=6 {
        out.extend(enumerate_loops(n).unwrap());
    }
    out.retain(|q| is_moufang(q).unwrap().holds);
    out
}

#[test]
fn nucleus_quotient_and_squaring() {
    let loops = moufang_loops();
    // 18 named Moufang loops plus the enumerated groups.
    assert_eq!(loops.len(), 18 + (1 + 1 + 1 + 4 + 6 + 80));
    for q in &loops {
        let n = nucleus(q).unwrap();
        assert!(n.closure_failure(q).is_none(), "{}", q.label());
        assert!(is_normal(q, &n).unwrap(), "{}", q.label());
        assert!(is_normal_by_inner_mappings(q, &n), "{}", q.label());
        let quot = quotient(q, &n).unwrap();
        assert_eq!(quot.table.order() * n.len(), q.order());
        let sq = squaring_on_quotient(&quot).unwrap();
        assert_eq!(sq.surjective, sq.injective, "{}", q.label());

        // The projection is a homomorphism with kernel N(Q).
        let proj = ElementMap::new(q, &quot.table, quot.projection.clone()).unwrap();
        let c = classify_map(&proj);
        assert!(c.homomorphism, "{}", q.label());
        assert_eq!(kernel(&proj).unwrap(), n);
    }
}

/// For nonabelian `G` the nucleus of the Chein double is the centre of `G`.
#[test]
fn chein_nucleus_is_the_centre() {
    for (g, name) in [("S3", "chein-S3"), ("D4", "chein-D4"), ("Q8", "chein-Q8")] {
        let g = builtin_by_name(g).unwrap().table;
        let centre: Vec<usize> = g
            .elements()
            .filter(|&z| g.elements().all(|x| g.mul(x, z) == g.mul(z, x)))
            .collect();
        let m = builtin_by_name(name).unwrap().table;
        assert_eq!(nucleus(&m).unwrap().elements(), centre.as_slice(), "{name}");
        assert!(!is_group(&m).holds);
        // |Q/N| = 2|G|/|Z(G)| is even, so squaring cannot be onto.
        let sq = squaring_on_quotient(&quotient(&m, &nucleus(&m).unwrap()).unwrap()).unwrap();
        assert!(!sq.surjective);
    }
}

#[test]
fn group_moufang_diassociative_chain() {
    for n in 1..=6 {
        for q in enumerate_loops(n).unwrap() {
            let group = is_group(&q).holds;
            let moufang = is_moufang(&q).unwrap().holds;
            let di = is_diassociative(&q);
            assert!(!group || moufang, "{}", q.label());
            assert!(!moufang || di.holds, "{}", q.label());
            // No nonassociative Moufang loop has order below 12.
            assert_eq!(group, moufang, "{}", q.label());
            assert!(di.reproduces(&q));
        }
    }
    for e in builtin() {
        let CatalogEntry { table: q, .. } = e;
        if is_moufang(&q).unwrap().holds {
            assert!(is_diassociative(&q).holds, "{}", q.label());
        }
    }
}

#[test]
fn regression_values() {
    let star = paper_star();
    assert_eq!(nucleus(&star).unwrap().elements(), &[0]);
    assert!(is_automorphic(&star).holds);

    let m = builtin_by_name("chein-S3").unwrap().table;
    let auto = is_automorphic(&m);
    assert!(!auto.holds);
    assert!(auto.reproduces(&m));
    assert_eq!(nucleus(&m).unwrap().elements(), &[0]);

    let id = ElementMap::identity(&m);
    assert_eq!(classify_map(&id).verdict, Verdict::Isomorphism);
    assert_eq!(
        classify_map(&id.compose_with_inversion().unwrap()).verdict,
        Verdict::AntiIsomorphism
    );
}
