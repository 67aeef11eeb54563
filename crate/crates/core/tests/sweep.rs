use moufang::catalog::{builtin, builtin_by_name};
use moufang::halfmorph::{
    ab_decomposition, classify_map, enumerate_half_isomorphisms, ElementMap, SearchOptions,
    VerdictFilter,
};
use moufang::scott::{
    find_scott_triple, verify_abelian_squares, verify_main_hypothesis_contradiction,
    verify_main_sweep, verify_scott_triple, PairCounts, SweepOptions,
};
use moufang::Error;

#[test]
fn named_catalog_sweep() {
    let report = verify_main_sweep(&builtin(), 16, &SweepOptions::default()).unwrap();
    assert_eq!(report.proper_moufang_orders, [16]);
    assert_eq!(report.lemmas.failures(), 0);

    let row = |s: &str, t: &str| {
        report
            .rows
            .iter()
            .find(|r| r.source == s && r.target == t)
            .unwrap_or_else(|| panic!("no row {s} -> {t}"))
    };
    let q8 = row("chein-Q8", "chein-Q8");
    assert!(!q8.hypothesis);
    assert_eq!(
        q8.counts,
        PairCounts {
            total: 3072,
            iso: 192,
            anti: 192,
            proper: 2688
        }
    );
    let first = &q8.findings[0];
    assert_eq!(
        first.map.images,
        [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 15, 14]
    );
    let scott = first.scott.as_ref().unwrap();
    assert_eq!(scott.triple.elements(), (2, 4, 12));
    assert!(first.hypothesis_false_confirmed);
    assert!(first.abelian_squares.unwrap().holds());

    assert_eq!(row("chein-S3", "chein-S3").counts.proper, 0);
    assert_eq!(row("chein-S3", "chein-S3").counts.total, 216);
    assert_eq!(row("chein-D4", "chein-D4").counts.proper, 0);
    assert_eq!(row("chein-D4", "chein-Q8").counts.total, 0);

    // The dot/star pair is reported although (Q,*) is not Moufang.
    let example = row("paper-dot", "paper-star");
    assert_eq!(example.moufang, [true, false]);
    assert_eq!(example.counts.proper, 12);
    assert!(example.findings[0].note.is_some());
}

#[test]
fn sweep_report_is_deterministic() {
    let catalog = builtin();
    let run = |parallel| {
        let options = SweepOptions {
            parallel,
            ..SweepOptions::default()
        };
        serde_json::to_string(&verify_main_sweep(&catalog, 12, &options).unwrap()).unwrap()
    };
    let a = run(true);
    assert_eq!(a, run(true));
    assert_eq!(a, run(false));
}

/// Every proper half-automorphism of the order-16 example passes the whole
/// Scott-triple chain.
#[test]
fn every_proper_map_of_chein_q8() {
    let m = builtin_by_name("chein-Q8").unwrap().table;
    let found = enumerate_half_isomorphisms(
        &m,
        &m,
        &SearchOptions {
            filter: VerdictFilter::ProperOnly,
            ..SearchOptions::default()
        },
    );
    assert_eq!(found.len(), 2688);
    for f in &found {
        let phi = ElementMap::new(&m, &m, f.images.clone()).unwrap();
        let d = ab_decomposition(&phi).unwrap();
        assert!(d.a_is_subloop && d.b_is_subloop && !d.covers);
        assert!(d.a.len() < 16 && d.b.len() < 16);

        let s = find_scott_triple(&phi).unwrap();
        let psi = ElementMap::new(&m, &m, s.images.clone()).unwrap();
        assert!(classify_map(&psi).is_proper());
        assert!(verify_scott_triple(&psi, &s.triple).unwrap().holds);
        assert!(verify_abelian_squares(&psi, &s.triple).unwrap().holds());
        let main = verify_main_hypothesis_contradiction(&psi, &s.triple).unwrap();
        assert!(!main.hypothesis_holds);
    }
}

#[test]
fn early_exit_finds_the_same_orders() {
    let catalog = builtin();
    let options = SweepOptions {
        early_exit: true,
        ..SweepOptions::default()
    };
    let report = verify_main_sweep(&catalog, 16, &options).unwrap();
    assert_eq!(report.proper_moufang_orders, [16]);
    assert_eq!(report.lemmas.maps_checked, 0);
    assert!(report.rows.iter().all(|r| r.counts.proper <= 1));
}

#[test]
fn non_proper_maps_are_rejected() {
    let m = builtin_by_name("chein-S3").unwrap().table;
    let id = ElementMap::identity(&m);
    assert!(matches!(find_scott_triple(&id), Err(Error::NotProper)));
}
