use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use moufang::catalog::{builtin, lookup, CatalogEntry, Provenance};
use moufang::halfmorph::{
    ab_decomposition, check_basic_lemma, classify_map, enumerate_half_isomorphisms,
    is_semi_isomorphism, kernel, ABDecomposition, BasicLemmaReport, ElementMap, Found,
    MapClassification, MapFile, SearchOptions, SemiReport, Verdict, VerdictFilter,
};
use moufang::identities::{is_group, is_moufang, summarize, IdentityReport};
use moufang::loop_table::{LoopFile, IDENTITY};
use moufang::scott::{find_scott_triple, ScottFinding};
use moufang::structure::{
    is_normal, is_normal_by_inner_mappings, nucleus as nucleus_of, quotient, squaring_on_quotient,
    SquaringReport,
};
use moufang::{serialize_loop, Element, LoopTable};

use crate::{bullet, load_loop, write_stdout, CliError, CliResult, Output};

/// Splits library results: traps abort the command, anything else becomes a
/// note in the report.
fn soft<T>(r: moufang::Result<T>) -> CliResult<Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_trap() => Err(e.into()),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn describe(r: &IdentityReport) -> String {
    match (&r.witness, &r.detail) {
        (None, _) => "yes".into(),
        (Some(w), Some(d)) => format!("no  (witness {w:?}: {d})"),
        (Some(w), None) => format!("no  (witness {w:?})"),
    }
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    order: usize,
    power_associative: bool,
    group: IdentityReport,
    commutative: IdentityReport,
    moufang: IdentityReport,
    diassociative: IdentityReport,
    automorphic: IdentityReport,
}

pub fn check(q: &LoopTable, out: Output) -> CliResult {
    let s = summarize(q)?;
    let report = CheckReport {
        name: q.label(),
        order: q.order(),
        power_associative: q.is_power_associative(),
        group: s.group,
        commutative: s.commutative,
        moufang: s.moufang,
        diassociative: s.diassociative,
        automorphic: s.automorphic,
    };
    let mut text = format!("{} (order {})\n", report.name, report.order);
    bullet(
        &mut text,
        "power-associative",
        if report.power_associative {
            "yes"
        } else {
            "no"
        },
    );
    for (label, r) in [
        ("group", &report.group),
        ("commutative", &report.commutative),
        ("moufang", &report.moufang),
        ("diassociative", &report.diassociative),
        ("automorphic", &report.automorphic),
    ] {
        bullet(&mut text, label, describe(r));
    }
    out.emit(&report, &text)
}

#[derive(Serialize)]
struct NucleusReport {
    name: String,
    order: usize,
    nucleus: Vec<Element>,
    normal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient: Option<LoopFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cosets: Option<Vec<Vec<Element>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    squaring: Option<SquaringReport>,
}

pub fn nucleus(q: &LoopTable, quotient_out: Option<&Path>, out: Output) -> CliResult {
    let n = nucleus_of(q)?;
    let normal = is_normal(q, &n)?;
    if normal != is_normal_by_inner_mappings(q, &n) {
        return Err(CliError::Failed(format!(
            "coset and inner-mapping normality tests disagree on the nucleus of {}",
            q.label()
        )));
    }
    let mut report = NucleusReport {
        name: q.label(),
        order: q.order(),
        nucleus: n.elements().to_vec(),
        normal,
        quotient: None,
        cosets: None,
        squaring: None,
    };
    let mut text = format!("{} (order {})\n", report.name, report.order);
    bullet(&mut text, "nucleus", format!("{:?}", report.nucleus));
    bullet(&mut text, "normal", normal);
    if normal {
        let quot = quotient(q, &n)?;
        let sq = squaring_on_quotient(&quot)?;
        bullet(&mut text, "quotient order", quot.table.order());
        bullet(&mut text, "squaring surjective", sq.surjective);
        if let Some(path) = quotient_out {
            let sidecar = path.with_extension("cosets.json");
            let cosets =
                serde_json::to_string_pretty(&quot.coset_map()).map_err(moufang::Error::from)?;
            std::fs::write(path, serialize_loop(&quot.table)).map_err(moufang::Error::from)?;
            std::fs::write(&sidecar, cosets + "\n").map_err(moufang::Error::from)?;
            bullet(
                &mut text,
                "wrote",
                format!("{} and {}", path.display(), sidecar.display()),
            );
        }
        report.quotient = Some(quot.table.to_file());
        report.cosets = Some(quot.cosets);
        report.squaring = Some(sq);
    } else if quotient_out.is_some() {
        return Err(CliError::Input(format!(
            "the nucleus of {} is not normal, so there is no quotient to write",
            q.label()
        )));
    }
    out.emit(&report, &text)
}

#[derive(Serialize)]
struct KernelReport {
    elements: Vec<Element>,
    normal: bool,
}

#[derive(Serialize)]
struct ClassifyReport {
    source: String,
    target: String,
    images: Vec<Element>,
    classification: MapClassification,
    #[serde(skip_serializing_if = "Option::is_none")]
    basic_lemma: Option<BasicLemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semi: Option<SemiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<ABDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scott: Option<ScottFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel: Option<KernelReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

pub fn classify(path: &Path, out: Output) -> CliResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: MapFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let base = path.parent();
    let source = load_loop(&file.source, base)?;
    let target = load_loop(&file.target, base)?;
    let phi = ElementMap::new(&source, &target, file.images.clone())
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let classification = classify_map(&phi);

    let mut report = ClassifyReport {
        source: file.source,
        target: file.target,
        images: file.images,
        classification,
        basic_lemma: None,
        semi: None,
        decomposition: None,
        scott: None,
        kernel: None,
        notes: Vec::new(),
    };
    let c = &report.classification;
    if c.is_half_isomorphism() {
        report.basic_lemma = Some(check_basic_lemma(&phi)?);
        report.semi = Some(is_semi_isomorphism(&phi));
        match soft(ab_decomposition(&phi))? {
            Ok(d) => report.decomposition = Some(d),
            Err(note) => report.notes.push(format!("A/B decomposition: {note}")),
        }
    }
    if c.is_proper() {
        match soft(find_scott_triple(&phi))? {
            Ok(s) => report.scott = Some(s),
            Err(note) => report.notes.push(format!("Scott triple: {note}")),
        }
    }
    if c.is_half_homomorphism() && phi.apply(IDENTITY) == IDENTITY {
        let k = kernel(&phi)?;
        report.kernel = Some(KernelReport {
            normal: is_normal(&source, &k)?,
            elements: k.elements().to_vec(),
        });
    }

    let c = &report.classification;
    let mut text = format!("{} -> {}\n", report.source, report.target);
    bullet(&mut text, "verdict", format!("{:?}", c.verdict));
    bullet(&mut text, "direct pairs", c.direct_pairs);
    bullet(&mut text, "reversed pairs", c.reversed_pairs);
    if let Some(w) = &c.proper_witnesses {
        bullet(&mut text, "direct only", format!("{:?}", w.direct));
        bullet(&mut text, "reversed only", format!("{:?}", w.reversed));
    }
    if let Some(v) = c.violation {
        bullet(&mut text, "violation", format!("{v:?}"));
    }
    if let Some(b) = &report.basic_lemma {
        bullet(&mut text, "basic lemma", b.holds());
    }
    if let Some(s) = &report.semi {
        bullet(&mut text, "semi-isomorphism", s.holds());
    }
    if let Some(d) = &report.decomposition {
        bullet(&mut text, "A", format!("{:?}", d.a));
        bullet(&mut text, "B", format!("{:?}", d.b));
    }
    if let Some(s) = &report.scott {
        bullet(
            &mut text,
            "Scott triple",
            format!("{:?}", s.triple.elements()),
        );
    }
    if let Some(k) = &report.kernel {
        bullet(
            &mut text,
            "kernel",
            format!("{:?} (normal: {})", k.elements, k.normal),
        );
    }
    for note in &report.notes {
        bullet(&mut text, "note", note);
    }
    out.emit(&report, &text)
}

#[derive(Serialize, Default)]
struct VerdictCounts {
    isomorphism: usize,
    anti_isomorphism: usize,
    proper: usize,
}

#[derive(Serialize)]
struct SearchReport {
    source: String,
    target: String,
    proper_only: bool,
    first: bool,
    count: usize,
    verdicts: VerdictCounts,
    maps: Vec<Found>,
}

pub fn search(
    a: &LoopTable,
    b: &LoopTable,
    proper_only: bool,
    first: bool,
    out: Output,
) -> CliResult {
    let maps = enumerate_half_isomorphisms(
        a,
        b,
        &SearchOptions {
            filter: if proper_only {
                VerdictFilter::ProperOnly
            } else {
                VerdictFilter::All
            },
            first,
            ..SearchOptions::default()
        },
    );
    let mut verdicts = VerdictCounts::default();
    for f in &maps {
        match f.classification.verdict {
            Verdict::Isomorphism => verdicts.isomorphism += 1,
            Verdict::AntiIsomorphism => verdicts.anti_isomorphism += 1,
            Verdict::ProperHalfIsomorphism => verdicts.proper += 1,
            _ => {}
        }
    }
    let report = SearchReport {
        source: a.label(),
        target: b.label(),
        proper_only,
        first,
        count: maps.len(),
        verdicts,
        maps,
    };
    let mut text = format!("{} -> {}\n", report.source, report.target);
    bullet(&mut text, "half-isomorphisms", report.count);
    bullet(&mut text, "isomorphisms", report.verdicts.isomorphism);
    bullet(
        &mut text,
        "anti-isomorphisms",
        report.verdicts.anti_isomorphism,
    );
    bullet(&mut text, "proper", report.verdicts.proper);
    const SHOWN: usize = 8;
    for f in report.maps.iter().take(SHOWN) {
        let _ = writeln!(text, "    {:?} {:?}", f.images, f.classification.verdict);
    }
    if report.count > SHOWN {
        let _ = writeln!(text, "    ... {} more", report.count - SHOWN);
    }
    out.emit(&report, &text)
}

#[derive(Serialize)]
struct CatalogRow {
    name: String,
    order: usize,
    provenance: Provenance,
    group: bool,
    moufang: bool,
}

pub fn catalog_list(out: Output) -> CliResult {
    let rows = builtin()
        .into_iter()
        .map(
            |CatalogEntry {
                 name,
                 table,
                 provenance,
             }| {
                Ok(CatalogRow {
                    order: table.order(),
                    group: is_group(&table).holds,
                    moufang: is_moufang(&table)?.holds,
                    name,
                    provenance,
                })
            },
        )
        .collect::<moufang::Result<Vec<_>>>()?;
    let mut text = String::new();
    for r in &rows {
        let kind = match (r.group, r.moufang) {
            (true, _) => "group",
            (false, true) => "Moufang",
            (false, false) => "loop",
        };
        let _ = writeln!(
            text,
            "{:<12} {:>3}  {:<8} {:?}",
            r.name, r.order, kind, r.provenance
        );
    }
    let _ = writeln!(
        text,
        "enumerated loops L{{n}}-{{index}} are available for orders 1..=6"
    );
    out.emit(&rows, &text)
}

pub fn catalog_dump(name: &str, json: bool) -> CliResult {
    let q =
        lookup(name).ok_or_else(|| CliError::Input(format!("no catalog entry named {name:?}")))?;
    if json {
        write_stdout(&(q.to_json() + "\n"))
    } else {
        write_stdout(&serialize_loop(&q))
    }
}
