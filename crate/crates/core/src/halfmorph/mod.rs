//! Half-homomorphisms between loops: classification, the basic lemma layer,
//! the `A`/`B` decomposition, kernels, and exhaustive search.
//!
//! A map `φ` is a half-homomorphism when for every pair `(x, y)` either
//! `φ(xy) = φx·φy` (the pair is *direct*) or `φ(xy) = φy·φx` (the pair is
//! *reversed*). A pair whose image commutes is both.

mod search;

pub use search::{enumerate_half_isomorphisms, Found, SearchOptions, SearchPlan, VerdictFilter};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::is_moufang;
use crate::loop_table::{Element, LoopTable, IDENTITY};
use crate::structure::{generated_subloop, SubloopSet};

/// A total map from the carrier of `source` into the carrier of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementMap<'a> {
    pub source: &'a LoopTable,
    pub target: &'a LoopTable,
    images: Vec<Element>,
}

/// JSON map file: loop names (or paths) and the image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub source: String,
    pub target: String,
    pub images: Vec<Element>,
}

impl<'a> ElementMap<'a> {
    pub fn new(source: &'a LoopTable, target: &'a LoopTable, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::InvalidInput(format!(
                "map has {} images but the source has order {}",
                images.len(),
                source.order()
            )));
        }
        for &v in &images {
            target.check(v)?;
        }
        Ok(ElementMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(q: &'a LoopTable) -> Self {
        ElementMap {
            source: q,
            target: q,
            images: q.elements().collect(),
        }
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Element> {
        self.images
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.images[x]
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        self.images
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// `φ∘J` where `J: x ↦ x⁻¹` is inversion in the source.
    pub fn compose_with_inversion(&self) -> Result<ElementMap<'a>> {
        let images = self
            .source
            .elements()
            .map(|x| self.source.inverse(x).map(|xi| self.images[xi]))
            .collect::<Result<Vec<_>>>()?;
        Ok(ElementMap {
            images,
            ..self.clone()
        })
    }

    /// Whether `φ(xy) = φx·φy` and whether `φ(xy) = φy·φx`.
    #[inline]
    pub fn pair_status(&self, x: Element, y: Element) -> (bool, bool) {
        let lhs = self.images[self.source.mul(x, y)];
        let (fx, fy) = (self.images[x], self.images[y]);
        (
            lhs == self.target.mul(fx, fy),
            lhs == self.target.mul(fy, fx),
        )
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            source: self.source.label(),
            target: self.target.label(),
            images: self.images.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Isomorphism,
    AntiIsomorphism,
    ProperHalfIsomorphism,
    /// A half-homomorphism that is not a bijection.
    HalfHomomorphism,
    NotHalfHomomorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProperWitnesses {
    /// A pair that is direct and not reversed.
    pub direct: (Element, Element),
    /// A pair that is reversed and not direct.
    pub reversed: (Element, Element),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapClassification {
    pub verdict: Verdict,
    pub bijective: bool,
    /// Every pair is direct.
    pub homomorphism: bool,
    /// Every pair is reversed.
    pub anti_homomorphism: bool,
    pub direct_pairs: usize,
    pub reversed_pairs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_witnesses: Option<ProperWitnesses>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<(Element, Element)>,
}

impl MapClassification {
    pub fn is_half_isomorphism(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::Isomorphism | Verdict::AntiIsomorphism | Verdict::ProperHalfIsomorphism
        )
    }

    pub fn is_half_homomorphism(&self) -> bool {
        self.verdict != Verdict::NotHalfHomomorphism
    }

    pub fn is_proper(&self) -> bool {
        self.verdict == Verdict::ProperHalfIsomorphism
    }
}

pub fn classify_map(phi: &ElementMap) -> MapClassification {
    let q = phi.source;
    let mut direct_pairs = 0;
    let mut reversed_pairs = 0;
    let mut only_direct = None;
    let mut only_reversed = None;
    let mut violation = None;
    for x in q.elements() {
        for y in q.elements() {
            let (d, r) = phi.pair_status(x, y);
            direct_pairs += usize::from(d);
            reversed_pairs += usize::from(r);
            match (d, r) {
                (true, false) if only_direct.is_none() => only_direct = Some((x, y)),
                (false, true) if only_reversed.is_none() => only_reversed = Some((x, y)),
                (false, false) if violation.is_none() => violation = Some((x, y)),
                _ => {}
            }
        }
    }
    let bijective = phi.is_bijective();
    let homomorphism = violation.is_none() && only_reversed.is_none();
    let anti_homomorphism = violation.is_none() && only_direct.is_none();
    let verdict = if violation.is_some() {
        Verdict::NotHalfHomomorphism
    } else if !bijective {
        Verdict::HalfHomomorphism
    } else if homomorphism {
        Verdict::Isomorphism
    } else if anti_homomorphism {
        Verdict::AntiIsomorphism
    } else {
        Verdict::ProperHalfIsomorphism
    };
    let proper_witnesses = match (verdict, only_direct, only_reversed) {
        (Verdict::ProperHalfIsomorphism, Some(direct), Some(reversed)) => {
            Some(ProperWitnesses { direct, reversed })
        }
        _ => None,
    };
    MapClassification {
        verdict,
        bijective,
        homomorphism,
        anti_homomorphism,
        direct_pairs,
        reversed_pairs,
        proper_witnesses,
        violation,
    }
}

fn require_half_isomorphism(phi: &ElementMap) -> Result<MapClassification> {
    let c = classify_map(phi);
    if !c.is_half_isomorphism() {
        return Err(Error::InvalidInput(format!(
            "map is not a half-isomorphism (verdict {:?})",
            c.verdict
        )));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaPart {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Element>>,
}

impl LemmaPart {
    fn from_witness(witness: Option<Vec<Element>>) -> Self {
        LemmaPart {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicLemmaReport {
    /// `xy = yx` implies `φx·φy = φy·φx`.
    pub commuting: LemmaPart,
    /// A direct pair `(x, y)` makes `(y, x)` direct as well.
    pub reversal: LemmaPart,
    /// `φ(0) = 0` and `φ(x⁻¹) = (φx)⁻¹`.
    pub inverses: LemmaPart,
    /// `φ(⟨X⟩) = ⟨φX⟩` for every `X` with one or two elements.
    pub generation: LemmaPart,
}

impl BasicLemmaReport {
    pub fn holds(&self) -> bool {
        self.commuting.holds && self.reversal.holds && self.inverses.holds && self.generation.holds
    }
}

/// Checks the four basic properties of a half-isomorphism.
pub fn check_basic_lemma(phi: &ElementMap) -> Result<BasicLemmaReport> {
    require_half_isomorphism(phi)?;
    let (q, t) = (phi.source, phi.target);
    let f = |x| phi.apply(x);

    let mut commuting = None;
    let mut reversal = None;
    'pairs: for x in q.elements() {
        for y in q.elements() {
            if commuting.is_none()
                && q.mul(x, y) == q.mul(y, x)
                && t.mul(f(x), f(y)) != t.mul(f(y), f(x))
            {
                commuting = Some(vec![x, y]);
            }
            if reversal.is_none() && phi.pair_status(x, y).0 && !phi.pair_status(y, x).0 {
                reversal = Some(vec![x, y]);
            }
            if commuting.is_some() && reversal.is_some() {
                break 'pairs;
            }
        }
    }

    let inverses = if f(IDENTITY) != IDENTITY {
        Some(vec![IDENTITY])
    } else {
        q.elements()
            .find(|&x| match (q.try_inverse(x), t.try_inverse(f(x))) {
                (Some(xi), Some(fxi)) => f(xi) != fxi,
                (None, None) => false,
                _ => true,
            })
            .map(|x| vec![x])
    };

    let mut generation = None;
    'gen: for a in q.elements() {
        for b in a..q.order() {
            let sub = generated_subloop(q, &[a, b])?;
            let img = generated_subloop(t, &[f(a), f(b)])?;
            let mapped: Vec<Element> = {
                let mut v: Vec<Element> = sub.elements().iter().map(|&x| f(x)).collect();
                v.sort_unstable();
                v
            };
            if mapped != img.elements() {
                generation = Some(vec![a, b]);
                break 'gen;
            }
        }
    }

    Ok(BasicLemmaReport {
        commuting: LemmaPart::from_witness(commuting),
        reversal: LemmaPart::from_witness(reversal),
        inverses: LemmaPart::from_witness(inverses),
        generation: LemmaPart::from_witness(generation),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RestrictionVerdict {
    Isomorphism,
    AntiIsomorphism,
    /// Both at once; the image of the subloop is commutative.
    Both,
    Neither,
}

impl RestrictionVerdict {
    pub fn is_isomorphism(self) -> bool {
        matches!(
            self,
            RestrictionVerdict::Isomorphism | RestrictionVerdict::Both
        )
    }

    pub fn is_anti_isomorphism(self) -> bool {
        matches!(
            self,
            RestrictionVerdict::AntiIsomorphism | RestrictionVerdict::Both
        )
    }
}

/// Which of isomorphism / anti-isomorphism `φ` restricts to on `⟨a, b⟩`.
///
/// When `⟨a, b⟩` and its image are both groups, a direct pair `(a, b)` must
/// give an isomorphism and a reversed one an anti-isomorphism; a violation is
/// reported as a trap.
pub fn restriction_dichotomy(
    phi: &ElementMap,
    a: Element,
    b: Element,
) -> Result<RestrictionVerdict> {
    let (q, t) = (phi.source, phi.target);
    q.check(a)?;
    q.check(b)?;
    let sub = generated_subloop(q, &[a, b])?;
    if !sub.is_associative(q) {
        return Err(Error::NotDiassociative { a, b });
    }
    let els = sub.elements();
    let mut iso = true;
    let mut anti = true;
    for &x in els {
        for &y in els {
            let (d, r) = phi.pair_status(x, y);
            iso &= d;
            anti &= r;
        }
    }
    let verdict = match (iso, anti) {
        (true, true) => RestrictionVerdict::Both,
        (true, false) => RestrictionVerdict::Isomorphism,
        (false, true) => RestrictionVerdict::AntiIsomorphism,
        (false, false) => RestrictionVerdict::Neither,
    };

    let image = SubloopSet::new(t, els.iter().map(|&x| phi.apply(x)));
    let image_is_group = matches!(&image, Ok(s) if s.is_associative(t));
    if image_is_group && phi.is_bijective() {
        let (d, r) = phi.pair_status(a, b);
        if verdict == RestrictionVerdict::Neither
            || (d && !verdict.is_isomorphism())
            || (r && !verdict.is_anti_isomorphism())
        {
            return Err(Error::TheoremViolation(format!(
                "restriction of a half-isomorphism to the group ⟨{a},{b}⟩ is {verdict:?} \
                 but the pair is direct={d}, reversed={r}"
            )));
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiReport {
    pub identity_fixed: bool,
    /// `φ((xy)x) = (φx·φy)·φx`
    pub left_bracketing: LemmaPart,
    /// `φ(x(yx)) = φx·(φy·φx)`
    pub right_bracketing: LemmaPart,
}

impl SemiReport {
    pub fn holds(&self) -> bool {
        self.identity_fixed && self.left_bracketing.holds && self.right_bracketing.holds
    }
}

/// Whether `φ(0) = 0` and `φ(xyx) = φx·φy·φx`, checked under both
/// bracketings of each side.
pub fn is_semi_isomorphism(phi: &ElementMap) -> SemiReport {
    let (q, t) = (phi.source, phi.target);
    let f = |x| phi.apply(x);
    let mut left = None;
    let mut right = None;
    for x in q.elements() {
        for y in q.elements() {
            if left.is_none() && f(q.mul(q.mul(x, y), x)) != t.mul(t.mul(f(x), f(y)), f(x)) {
                left = Some(vec![x, y]);
            }
            if right.is_none() && f(q.mul(x, q.mul(y, x))) != t.mul(f(x), t.mul(f(y), f(x))) {
                right = Some(vec![x, y]);
            }
        }
    }
    SemiReport {
        identity_fixed: f(IDENTITY) == IDENTITY,
        left_bracketing: LemmaPart::from_witness(left),
        right_bracketing: LemmaPart::from_witness(right),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ABDecomposition {
    /// `{a : φ(ax) = φa·φx for all x}`
    pub a: Vec<Element>,
    /// `{a : φ(ax) = φx·φa for all x}`
    pub b: Vec<Element>,
    pub a_is_subloop: bool,
    pub b_is_subloop: bool,
    /// `A ∪ B` is the whole carrier.
    pub covers: bool,
    /// Least element in neither set.
    pub outside: Option<Element>,
}

/// Computes `A` and `B` for a half-isomorphism. Between Moufang loops both
/// must be subloops, and for a proper map they cannot cover the loop; either
/// failure is a trap.
pub fn ab_decomposition(phi: &ElementMap) -> Result<ABDecomposition> {
    let class = require_half_isomorphism(phi)?;
    let q = phi.source;
    let in_a: Vec<bool> = q
        .elements()
        .map(|a| q.elements().all(|x| phi.pair_status(a, x).0))
        .collect();
    let in_b: Vec<bool> = q
        .elements()
        .map(|a| q.elements().all(|x| phi.pair_status(a, x).1))
        .collect();
    let collect = |m: &[bool]| -> Vec<Element> { q.elements().filter(|&x| m[x]).collect() };
    let (a, b) = (collect(&in_a), collect(&in_b));
    let a_is_subloop = SubloopSet::new(q, a.iter().copied()).is_ok();
    let b_is_subloop = SubloopSet::new(q, b.iter().copied()).is_ok();
    let outside = q.elements().find(|&x| !in_a[x] && !in_b[x]);
    let decomposition = ABDecomposition {
        covers: outside.is_none(),
        outside,
        a_is_subloop,
        b_is_subloop,
        a,
        b,
    };

    let n = q.order();
    let consistent = (class.homomorphism == (decomposition.a.len() == n))
        && (class.anti_homomorphism == (decomposition.b.len() == n));
    if !consistent {
        return Err(Error::TheoremViolation(format!(
            "A/B sizes ({}, {}) disagree with verdict {:?}",
            decomposition.a.len(),
            decomposition.b.len(),
            class.verdict
        )));
    }
    let moufang = is_moufang(phi.source)?.holds && is_moufang(phi.target)?.holds;
    if moufang && !(a_is_subloop && b_is_subloop) {
        return Err(Error::TheoremViolation(
            "A or B is not a subloop for a half-isomorphism of Moufang loops".into(),
        ));
    }
    if class.is_proper() && a_is_subloop && b_is_subloop && decomposition.covers {
        return Err(Error::TheoremViolation(
            "loop is the union of two proper subloops A and B".into(),
        ));
    }
    Ok(decomposition)
}

/// `Ker(φ) = {a : φa = 0}` of a half-homomorphism fixing the identity.
pub fn kernel(phi: &ElementMap) -> Result<SubloopSet> {
    if phi.apply(IDENTITY) != IDENTITY {
        return Err(Error::InvalidInput("map does not fix the identity".into()));
    }
    let c = classify_map(phi);
    if !c.is_half_homomorphism() {
        return Err(Error::InvalidInput(format!(
            "map is not a half-homomorphism: fails at {:?}",
            c.violation
        )));
    }
    let q = phi.source;
    let members = q.elements().filter(|&x| phi.apply(x) == IDENTITY);
    SubloopSet::new(q, members).map_err(|e| {
        Error::TheoremViolation(format!(
            "kernel of a half-homomorphism is not a subloop: {e}"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, paper_dot, paper_star};
    use crate::structure::{quotient, SubloopSet};

    #[test]
    fn identity_and_inversion_on_s3() {
        let s3 = paper_dot();
        let id = ElementMap::identity(&s3);
        assert_eq!(classify_map(&id).verdict, Verdict::Isomorphism);
        let inv = id.compose_with_inversion().unwrap();
        assert_eq!(inv.images(), &[0, 2, 1, 3, 4, 5]);
        let c = classify_map(&inv);
        assert_eq!(c.verdict, Verdict::AntiIsomorphism);
        assert!(c.proper_witnesses.is_none());
        assert_eq!(
            classify_map(&inv.compose_with_inversion().unwrap()).verdict,
            Verdict::Isomorphism
        );
    }

    #[test]
    fn identity_onto_star_is_proper() {
        let (dot, star) = (paper_dot(), paper_star());
        let phi = ElementMap::new(&dot, &star, (0..6).collect()).unwrap();
        let c = classify_map(&phi);
        assert_eq!(c.verdict, Verdict::ProperHalfIsomorphism);
        let w = c.proper_witnesses.unwrap();
        let (d, r) = phi.pair_status(w.direct.0, w.direct.1);
        assert!(d && !r);
        let (d, r) = phi.pair_status(w.reversed.0, w.reversed.1);
        assert!(!d && r);
        assert!(check_basic_lemma(&phi).unwrap().holds());
        // The target is not diassociative and the semi property breaks:
        // (3·1)·3 = 2 in the source but (3*1)*3 = 1 in the target.
        let semi = is_semi_isomorphism(&phi);
        assert!(semi.identity_fixed);
        assert_eq!(semi.left_bracketing.witness, Some(vec![3, 1]));
        assert_eq!(semi.right_bracketing.witness, Some(vec![3, 1]));
    }

    #[test]
    fn non_half_homomorphism_is_rejected() {
        let s3 = paper_dot();
        let phi = ElementMap::new(&s3, &s3, vec![0, 3, 2, 1, 4, 5]).unwrap();
        let c = classify_map(&phi);
        assert_eq!(c.verdict, Verdict::NotHalfHomomorphism);
        let (x, y) = c.violation.unwrap();
        assert_eq!(phi.pair_status(x, y), (false, false));
        assert!(check_basic_lemma(&phi).is_err());
        assert!(ab_decomposition(&phi).is_err());
        assert!(!is_semi_isomorphism(&phi).holds());
    }

    #[test]
    fn restriction_examples() {
        let (dot, star) = (paper_dot(), paper_star());
        let phi = ElementMap::new(&dot, &star, (0..6).collect()).unwrap();
        assert_eq!(
            restriction_dichotomy(&phi, 1, 2).unwrap(),
            RestrictionVerdict::Both
        );

        let inv = ElementMap::identity(&dot).compose_with_inversion().unwrap();
        assert_eq!(
            restriction_dichotomy(&inv, 1, 3).unwrap(),
            RestrictionVerdict::AntiIsomorphism
        );

        let (a, b) = dot
            .elements()
            .flat_map(|a| dot.elements().map(move |b| (a, b)))
            .find(|&(a, b)| {
                dot.mul(a, b) != dot.mul(b, a) && phi.pair_status(a, b) == (true, false)
            })
            .expect("a direct noncommuting pair");
        // ⟨a, b⟩ is all of S3, where the map is proper: without a
        // diassociative target the dichotomy can fail.
        assert_eq!(
            restriction_dichotomy(&phi, a, b).unwrap(),
            RestrictionVerdict::Neither
        );
        let s3_id = ElementMap::identity(&dot);
        assert_eq!(
            restriction_dichotomy(&s3_id, a, b).unwrap(),
            RestrictionVerdict::Isomorphism
        );

        let star_id = ElementMap::identity(&star);
        assert!(matches!(
            restriction_dichotomy(&star_id, 3, 1),
            Err(Error::NotDiassociative { a: 3, b: 1 })
        ));
    }

    #[test]
    fn ab_sets() {
        let s3 = paper_dot();
        let id = ElementMap::identity(&s3);
        let d = ab_decomposition(&id).unwrap();
        assert_eq!(d.a.len(), 6);
        assert_eq!(d.b, vec![0]);
        let inv = id.compose_with_inversion().unwrap();
        assert_eq!(ab_decomposition(&inv).unwrap().b.len(), 6);
    }

    #[test]
    fn kernels() {
        let c4 = cyclic(4);
        assert_eq!(kernel(&ElementMap::identity(&c4)).unwrap().elements(), &[0]);
        let zero = ElementMap::new(&c4, &c4, vec![0; 4]).unwrap();
        assert_eq!(classify_map(&zero).verdict, Verdict::HalfHomomorphism);
        assert_eq!(kernel(&zero).unwrap().len(), 4);

        let h = SubloopSet::new(&c4, [0, 2]).unwrap();
        let quot = quotient(&c4, &h).unwrap();
        let proj = ElementMap::new(&c4, &quot.table, quot.projection.clone()).unwrap();
        assert!(classify_map(&proj).homomorphism);
        assert_eq!(kernel(&proj).unwrap().elements(), &[0, 2]);

        let moved = ElementMap::new(&c4, &c4, vec![1, 0, 2, 3]).unwrap();
        assert!(kernel(&moved).is_err());
    }
}
