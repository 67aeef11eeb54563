//! Catalog-wide sweep: every half-isomorphism between equal-order Moufang
//! loops, with the theorem assertion on pairs whose source has surjective
//! squaring on `Q/N(Q)`.

use rayon::prelude::*;
use serde::Serialize;

use super::{find_scott_triple, verify_abelian_squares, verify_main_hypothesis_contradiction};
use super::{AbelianSquaresReport, ScottFinding};
use crate::catalog::{CatalogEntry, Provenance};
use crate::error::{Error, Result};
use crate::halfmorph::{
    ab_decomposition, check_basic_lemma, enumerate_half_isomorphisms, is_semi_isomorphism,
    restriction_dichotomy, ABDecomposition, ElementMap, Found, MapFile, RestrictionVerdict,
    SearchOptions, VerdictFilter,
};
use crate::identities::{is_diassociative, is_moufang};
use crate::structure::{nucleus, squaring_surjective};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Run the basic-lemma, semi-isomorphism and restriction checks on every
    /// map found between diassociative loops.
    pub check_lemmas: bool,
    /// Search each pair for proper maps only and stop at the first one.
    /// Counts then cover proper maps alone and the lemma checks are skipped.
    pub early_exit: bool,
    /// Proper maps stored per pair in the report (all are checked).
    pub max_findings_per_pair: usize,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            check_lemmas: true,
            early_exit: false,
            max_findings_per_pair: 4,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub total: usize,
    /// Maps that are isomorphisms (possibly also anti-isomorphisms).
    pub iso: usize,
    /// Maps that are anti-isomorphisms (possibly also isomorphisms).
    pub anti: usize,
    pub proper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub map: MapFile,
    pub decomposition: ABDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scott: Option<ScottFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abelian_squares: Option<AbelianSquaresReport>,
    /// Squaring on `Q/N(Q)` was confirmed non-surjective for this source.
    pub hypothesis_false_confirmed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub source: String,
    pub target: String,
    pub order: usize,
    pub moufang: [bool; 2],
    /// Squaring on `Q/N(Q)` is surjective for the source.
    pub hypothesis: bool,
    pub counts: PairCounts,
    pub findings: Vec<Finding>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    pub maps_checked: usize,
    pub basic_lemma_failures: usize,
    pub semi_failures: usize,
    pub restrictions_checked: usize,
    pub restriction_neither: usize,
}

impl LemmaTally {
    pub fn failures(&self) -> usize {
        self.basic_lemma_failures + self.semi_failures + self.restriction_neither
    }

    fn merge(mut self, other: LemmaTally) -> Self {
        self.maps_checked += other.maps_checked;
        self.basic_lemma_failures += other.basic_lemma_failures;
        self.semi_failures += other.semi_failures;
        self.restrictions_checked += other.restrictions_checked;
        self.restriction_neither += other.restriction_neither;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_order: usize,
    pub early_exit: bool,
    pub loops: usize,
    pub rows: Vec<SweepRow>,
    pub lemmas: LemmaTally,
    /// Pairs of Moufang loops whose source satisfies the hypothesis.
    pub theorem_pairs: usize,
    pub proper_total: usize,
    /// Orders at which a proper half-isomorphism between Moufang loops was found.
    pub proper_moufang_orders: Vec<usize>,
}

struct Profile<'a> {
    entry: &'a CatalogEntry,
    moufang: bool,
    diassociative: bool,
    hypothesis: bool,
}

fn profile(entry: &CatalogEntry) -> Result<Profile<'_>> {
    let q = &entry.table;
    let moufang = is_moufang(q)?.holds;
    let hypothesis = if moufang {
        squaring_surjective(q, &nucleus(q)?)?.surjective
    } else {
        false
    };
    Ok(Profile {
        entry,
        moufang,
        diassociative: moufang || is_diassociative(q).holds,
        hypothesis,
    })
}

fn lemma_checks(phi: &ElementMap) -> Result<LemmaTally> {
    let q = phi.source;
    let mut tally = LemmaTally {
        maps_checked: 1,
        ..LemmaTally::default()
    };
    if !check_basic_lemma(phi)?.holds() {
        tally.basic_lemma_failures += 1;
    }
    if !is_semi_isomorphism(phi).holds() {
        tally.semi_failures += 1;
    }
    for a in q.elements() {
        for b in a..q.order() {
            tally.restrictions_checked += 1;
            if restriction_dichotomy(phi, a, b)? == RestrictionVerdict::Neither {
                tally.restriction_neither += 1;
            }
        }
    }
    Ok(tally)
}

fn examine_proper(phi: &ElementMap, both_moufang: bool) -> Result<Finding> {
    let decomposition = ab_decomposition(phi)?;
    let mut finding = Finding {
        map: phi.to_file(),
        decomposition,
        scott: None,
        abelian_squares: None,
        hypothesis_false_confirmed: false,
        note: None,
    };
    if !both_moufang {
        finding.note = Some(match find_scott_triple(phi) {
            Err(e @ (Error::SourceNotMoufang | Error::TargetNotMoufang)) => e.to_string(),
            Err(e) => return Err(e),
            Ok(_) => unreachable!("Scott triples require Moufang loops"),
        });
        return Ok(finding);
    }
    let scott = find_scott_triple(phi)?;
    let map = ElementMap::new(phi.source, phi.target, scott.images.clone())?;
    finding.abelian_squares = Some(verify_abelian_squares(&map, &scott.triple)?);
    let main = verify_main_hypothesis_contradiction(&map, &scott.triple)?;
    finding.hypothesis_false_confirmed = !main.hypothesis_holds;
    finding.scott = Some(scott);
    Ok(finding)
}

fn sweep_pair(
    source: &Profile,
    target: &Profile,
    options: &SweepOptions,
) -> Result<(SweepRow, LemmaTally)> {
    let (q, t) = (&source.entry.table, &target.entry.table);
    let found: Vec<Found> = enumerate_half_isomorphisms(
        q,
        t,
        &SearchOptions {
            filter: if options.early_exit {
                VerdictFilter::ProperOnly
            } else {
                VerdictFilter::All
            },
            first: options.early_exit,
            parallel: options.parallel,
        },
    );
    let both_moufang = source.moufang && target.moufang;
    let mut counts = PairCounts::default();
    let mut tally = LemmaTally::default();
    let mut findings = Vec::new();
    for f in &found {
        let c = &f.classification;
        counts.total += 1;
        counts.iso += usize::from(c.homomorphism);
        counts.anti += usize::from(c.anti_homomorphism);
        let phi = ElementMap::new(q, t, f.images.clone())?;
        if options.check_lemmas
            && !options.early_exit
            && source.diassociative
            && target.diassociative
        {
            tally = tally.merge(lemma_checks(&phi)?);
        }
        if c.is_proper() {
            counts.proper += 1;
            if both_moufang && source.hypothesis {
                return Err(Error::TheoremViolation(format!(
                    "proper half-isomorphism {:?} from {} to {} although squaring on Q/N(Q) is surjective",
                    f.images,
                    q.label(),
                    t.label()
                )));
            }
            let finding = examine_proper(&phi, both_moufang)?;
            if both_moufang && !finding.hypothesis_false_confirmed {
                return Err(Error::TheoremViolation(format!(
                    "proper map from {} found but the hypothesis was not refuted",
                    q.label()
                )));
            }
            if findings.len() < options.max_findings_per_pair {
                findings.push(finding);
            }
        }
    }
    Ok((
        SweepRow {
            source: source.entry.name.clone(),
            target: target.entry.name.clone(),
            order: q.order(),
            moufang: [source.moufang, target.moufang],
            hypothesis: source.hypothesis,
            counts,
            findings,
        },
        tally,
    ))
}

/// Sweeps every ordered pair `(Q, Q′)` of equal order `≤ max_order` where `Q`
/// is Moufang and `Q′` is Moufang or a non-enumerated (named) loop.
///
/// A proper map between Moufang loops whose source has surjective squaring
/// on `Q/N(Q)` aborts with [`Error::TheoremViolation`]. Every other proper
/// map is run through the Scott-triple machinery, whose own traps propagate.
pub fn verify_main_sweep(
    catalog: &[CatalogEntry],
    max_order: usize,
    options: &SweepOptions,
) -> Result<SweepReport> {
    let entries: Vec<&CatalogEntry> = catalog
        .iter()
        .filter(|e| e.table.order() <= max_order)
        .collect();
    let profiles: Vec<Profile> = if options.parallel {
        entries
            .par_iter()
            .map(|e| profile(e))
            .collect::<Result<_>>()?
    } else {
        entries.iter().map(|e| profile(e)).collect::<Result<_>>()?
    };

    let mut pairs = Vec::new();
    for (i, s) in profiles.iter().enumerate() {
        if !s.moufang {
            continue;
        }
        for (j, t) in profiles.iter().enumerate() {
            let eligible_target = t.moufang || t.entry.provenance != Provenance::Enumerated;
            if s.entry.table.order() == t.entry.table.order() && eligible_target {
                pairs.push((i, j));
            }
        }
    }

    let run = |&(i, j): &(usize, usize)| sweep_pair(&profiles[i], &profiles[j], options);
    let results: Vec<(SweepRow, LemmaTally)> = if options.parallel {
        pairs.par_iter().map(run).collect::<Result<_>>()?
    } else {
        pairs.iter().map(run).collect::<Result<_>>()?
    };

    let mut rows = Vec::with_capacity(results.len());
    let mut lemmas = LemmaTally::default();
    for (row, tally) in results {
        lemmas = lemmas.merge(tally);
        rows.push(row);
    }
    let theorem_pairs = rows
        .iter()
        .filter(|r| r.moufang == [true, true] && r.hypothesis)
        .count();
    let proper_total = rows.iter().map(|r| r.counts.proper).sum();
    let mut proper_moufang_orders: Vec<usize> = rows
        .iter()
        .filter(|r| r.moufang == [true, true] && r.counts.proper > 0)
        .map(|r| r.order)
        .collect();
    proper_moufang_orders.sort_unstable();
    proper_moufang_orders.dedup();

    Ok(SweepReport {
        max_order,
        early_exit: options.early_exit,
        loops: entries.len(),
        rows,
        lemmas,
        theorem_pairs,
        proper_total,
        proper_moufang_orders,
    })
}
