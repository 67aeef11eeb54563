//! Scott triples and the checks built on them.
//!
//! For a proper half-isomorphism `φ` of Moufang loops a Scott triple
//! `(a, b, c)` satisfies
//!
//! 1. `φ↾⟨a,b⟩` is an isomorphism and `ab ≠ ba`,
//! 2. `φ↾⟨a,c⟩` is an anti-isomorphism and `ac ≠ ca`,
//! 3. `φ↾⟨b,c⟩` is an isomorphism and `bc ≠ cb`.
//!
//! Every operation here replays a proved statement on concrete tables and
//! reports a [`Error::TheoremViolation`] when the data disagrees.

mod sweep;

pub use sweep::{
    verify_main_sweep, Finding, LemmaTally, PairCounts, SweepOptions, SweepReport, SweepRow,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfmorph::{
    ab_decomposition, classify_map, restriction_dichotomy, ABDecomposition, ElementMap,
    RestrictionVerdict,
};
use crate::identities::is_moufang;
use crate::loop_table::{Element, LoopTable};
use crate::structure::{
    generated_subloop, nucleus, quotient, squaring_on_quotient, SquaringReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub pair: (Element, Element),
    pub restriction: RestrictionVerdict,
    pub commutes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScottTriple {
    pub a: Element,
    pub b: Element,
    pub c: Element,
    /// Certificates for `⟨a,b⟩`, `⟨a,c⟩` and `⟨b,c⟩`, in that order.
    pub certificates: [Certificate; 3],
}

impl ScottTriple {
    pub fn elements(&self) -> (Element, Element, Element) {
        (self.a, self.b, self.c)
    }
}

/// The map a triple was found for: either the input map or `φ∘J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScottFinding {
    pub images: Vec<Element>,
    pub composed_with_inversion: bool,
    pub decomposition: ABDecomposition,
    pub triple: ScottTriple,
}

fn require_moufang_pair(phi: &ElementMap) -> Result<()> {
    if !is_moufang(phi.source)?.holds {
        return Err(Error::SourceNotMoufang);
    }
    if !is_moufang(phi.target)?.holds {
        return Err(Error::TargetNotMoufang);
    }
    Ok(())
}

fn require_proper_moufang(phi: &ElementMap) -> Result<()> {
    if !classify_map(phi).is_proper() {
        return Err(Error::NotProper);
    }
    require_moufang_pair(phi)
}

fn certificate(phi: &ElementMap, x: Element, y: Element) -> Result<Certificate> {
    let q = phi.source;
    Ok(Certificate {
        pair: (x, y),
        restriction: restriction_dichotomy(phi, x, y)?,
        commutes: q.mul(x, y) == q.mul(y, x),
    })
}

/// Extracts a Scott triple following the constructive argument: take the
/// least `a` outside `A ∪ B`, the least `b` with `φ(ab) = φa·φb ≠ φb·φa`, the
/// least `c` with `φ(ac) = φc·φa ≠ φa·φc`, and switch to `φ∘J` (swapping the
/// roles of `b` and `c`) when `φ↾⟨b,c⟩` is an anti-isomorphism.
pub fn find_scott_triple(phi: &ElementMap) -> Result<ScottFinding> {
    require_proper_moufang(phi)?;
    let q = phi.source;
    let decomposition = ab_decomposition(phi)?;
    let a = decomposition.outside.ok_or_else(|| {
        Error::TheoremViolation("every element lies in A ∪ B for a proper map".into())
    })?;
    let b = q
        .elements()
        .find(|&x| phi.pair_status(a, x) == (true, false))
        .ok_or_else(|| {
            Error::TheoremViolation(format!("{a} ∉ B but no direct-only partner exists"))
        })?;
    let c = q
        .elements()
        .find(|&x| phi.pair_status(a, x) == (false, true))
        .ok_or_else(|| {
            Error::TheoremViolation(format!("{a} ∉ A but no reversed-only partner exists"))
        })?;

    let bc = restriction_dichotomy(phi, b, c)?;
    let (map, composed, b, c) = if bc.is_isomorphism() {
        (phi.clone(), false, b, c)
    } else {
        (phi.compose_with_inversion()?, true, c, b)
    };
    let triple = ScottTriple {
        a,
        b,
        c,
        certificates: [
            certificate(&map, a, b)?,
            certificate(&map, a, c)?,
            certificate(&map, b, c)?,
        ],
    };
    if !verify_scott_triple(&map, &triple)?.holds {
        return Err(Error::TheoremViolation(format!(
            "constructed triple ({a}, {b}, {c}) is not a Scott triple"
        )));
    }
    Ok(ScottFinding {
        images: map.images().to_vec(),
        composed_with_inversion: composed,
        decomposition,
        triple,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScottCheck {
    /// Conditions (i), (ii), (iii) in order.
    pub conditions: [bool; 3],
    pub holds: bool,
}

fn restriction_or_neither(phi: &ElementMap, x: Element, y: Element) -> Result<RestrictionVerdict> {
    match restriction_dichotomy(phi, x, y) {
        Err(Error::NotDiassociative { .. }) => Ok(RestrictionVerdict::Neither),
        other => other,
    }
}

/// Re-checks the three triple conditions from scratch.
pub fn verify_scott_triple_elements(
    phi: &ElementMap,
    a: Element,
    b: Element,
    c: Element,
) -> Result<ScottCheck> {
    let q = phi.source;
    for x in [a, b, c] {
        q.check(x)?;
    }
    let noncommuting = |x, y| q.mul(x, y) != q.mul(y, x);
    let conditions = [
        restriction_or_neither(phi, a, b)?.is_isomorphism() && noncommuting(a, b),
        restriction_or_neither(phi, a, c)?.is_anti_isomorphism() && noncommuting(a, c),
        restriction_or_neither(phi, b, c)?.is_isomorphism() && noncommuting(b, c),
    ];
    Ok(ScottCheck {
        conditions,
        holds: conditions.iter().all(|&c| c),
    })
}

pub fn verify_scott_triple(phi: &ElementMap, t: &ScottTriple) -> Result<ScottCheck> {
    verify_scott_triple_elements(phi, t.a, t.b, t.c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbelianSquaresReport {
    /// `⟨a², c⟩` is an abelian group.
    pub square_a_with_c: bool,
    /// `⟨a, c²⟩` is an abelian group.
    pub a_with_square_c: bool,
    /// `(c, b, a)` is also a Scott triple.
    pub reversed_triple: bool,
}

impl AbelianSquaresReport {
    pub fn holds(&self) -> bool {
        self.square_a_with_c && self.a_with_square_c && self.reversed_triple
    }
}

fn generates_abelian_group(q: &LoopTable, x: Element, y: Element) -> Result<bool> {
    Ok(generated_subloop(q, &[x, y])?.is_abelian_group(q))
}

/// For a Scott triple, `⟨a², c⟩` and `⟨a, c²⟩` are abelian groups and
/// `(c, b, a)` is again a Scott triple.
pub fn verify_abelian_squares(phi: &ElementMap, t: &ScottTriple) -> Result<AbelianSquaresReport> {
    if !verify_scott_triple(phi, t)?.holds {
        return Err(Error::NotScottTriple(format!(
            "({}, {}, {})",
            t.a, t.b, t.c
        )));
    }
    let q = phi.source;
    let (a, b, c) = t.elements();
    let report = AbelianSquaresReport {
        square_a_with_c: generates_abelian_group(q, q.mul(a, a), c)?,
        a_with_square_c: generates_abelian_group(q, a, q.mul(c, c))?,
        reversed_triple: verify_scott_triple_elements(phi, c, b, a)?.holds,
    };
    if !report.holds() && require_proper_moufang(phi).is_ok() {
        return Err(Error::TheoremViolation(format!(
            "abelian-squares consequence fails for Scott triple ({a}, {b}, {c}): {report:?}"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainHypothesisReport {
    pub nucleus: Vec<Element>,
    pub squaring: SquaringReport,
    /// Squaring on `Q/N(Q)` is surjective.
    pub hypothesis_holds: bool,
}

/// Replays the contradiction behind the main theorem on concrete data.
///
/// With a proper `φ` between Moufang loops and a Scott triple in hand, the
/// squaring map on `Q/N(Q)` cannot be surjective. Returns the report when it
/// is not; when it is, the full chain (`d² = an`, `(d,b,c)` a Scott triple,
/// `⟨n,d⟩`, `⟨n,c⟩`, `⟨an,c⟩` abelian) is evaluated and reported inside a
/// [`Error::TheoremViolation`].
pub fn verify_main_hypothesis_contradiction(
    phi: &ElementMap,
    t: &ScottTriple,
) -> Result<MainHypothesisReport> {
    require_proper_moufang(phi)?;
    if !verify_scott_triple(phi, t)?.holds {
        return Err(Error::NotScottTriple(format!(
            "({}, {}, {})",
            t.a, t.b, t.c
        )));
    }
    let q = phi.source;
    let n_q = nucleus(q)?;
    let quot = quotient(q, &n_q)?;
    let squaring = squaring_on_quotient(&quot)?;
    let report = MainHypothesisReport {
        nucleus: n_q.elements().to_vec(),
        hypothesis_holds: squaring.surjective,
        squaring,
    };
    if !report.hypothesis_holds {
        return Ok(report);
    }

    let (a, b, c) = t.elements();
    let proj = &quot.projection;
    let d = q
        .elements()
        .find(|&d| proj[q.mul(d, d)] == proj[a])
        .expect("surjective squaring hits aN");
    let n = q.ldiv(a, q.mul(d, d));
    let chain = [
        ("n ∈ N", n_q.contains(n)),
        (
            "(d,b,c) is a Scott triple",
            verify_scott_triple_elements(phi, d, b, c)?.holds,
        ),
        ("⟨n,d⟩ abelian", generates_abelian_group(q, n, d)?),
        ("⟨n,c⟩ abelian", generates_abelian_group(q, n, c)?),
        (
            "⟨an,c⟩ abelian",
            generates_abelian_group(q, q.mul(a, n), c)?,
        ),
        ("⟨a,c⟩ abelian", generates_abelian_group(q, a, c)?),
    ];
    Err(Error::TheoremViolation(format!(
        "proper half-isomorphism with surjective squaring on Q/N(Q): {} with d = {d}, n = {n}; chain {:?}",
        q.label(),
        chain
    )))
}
