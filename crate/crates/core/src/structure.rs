//! Subloops, the nucleus, normality, quotients and the squaring map on a
//! quotient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::inner_mapping_generators;
use crate::loop_table::{Element, LoopTable, IDENTITY};

/// A subset of a loop's carrier closed under multiplication and both
/// divisions. Elements are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubloopSet {
    elements: Vec<Element>,
    #[serde(skip)]
    members: Vec<bool>,
}

impl SubloopSet {
    /// Validates that `elements` is a subloop of `q`.
    pub fn new(q: &LoopTable, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let set = Self::unchecked(q, elements)?;
        if let Some((x, y)) = set.closure_failure(q) {
            return Err(Error::InvalidInput(format!(
                "{:?} is not closed: fails at ({x}, {y})",
                set.elements
            )));
        }
        Ok(set)
    }

    fn unchecked(q: &LoopTable, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut members = vec![false; q.order()];
        for e in elements {
            members[q.check(e)?] = true;
        }
        Ok(Self::from_members(members))
    }

    fn from_members(members: Vec<bool>) -> Self {
        let elements = members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        SubloopSet { elements, members }
    }

    /// The whole carrier.
    pub fn full(q: &LoopTable) -> Self {
        Self::from_members(vec![true; q.order()])
    }

    /// The trivial subloop `{0}`.
    pub fn trivial(q: &LoopTable) -> Self {
        let mut members = vec![false; q.order()];
        members[IDENTITY] = true;
        Self::from_members(members)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn is_subset(&self, other: &SubloopSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_whole(&self, q: &LoopTable) -> bool {
        self.len() == q.order()
    }

    /// First `(x, y)` such that `xy`, `x\y` or `y/x` leaves the set, or a
    /// missing identity reported as `(0, 0)`.
    pub fn closure_failure(&self, q: &LoopTable) -> Option<(Element, Element)> {
        if !self.contains(IDENTITY) {
            return Some((IDENTITY, IDENTITY));
        }
        for &x in &self.elements {
            for &y in &self.elements {
                if !self.contains(q.mul(x, y))
                    || !self.contains(q.ldiv(x, y))
                    || !self.contains(q.rdiv(y, x))
                {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Every pair of elements associates and commutes.
    pub fn is_abelian_group(&self, q: &LoopTable) -> bool {
        self.is_associative(q) && self.is_commutative(q)
    }

    pub fn is_associative(&self, q: &LoopTable) -> bool {
        let els = &self.elements;
        els.iter().all(|&x| {
            els.iter().all(|&y| {
                let xy = q.mul(x, y);
                els.iter().all(|&z| q.mul(xy, z) == q.mul(x, q.mul(y, z)))
            })
        })
    }

    pub fn is_commutative(&self, q: &LoopTable) -> bool {
        let els = &self.elements;
        els.iter()
            .all(|&x| els.iter().all(|&y| q.mul(x, y) == q.mul(y, x)))
    }
}

/// The least subloop containing `generators`.
pub fn generated_subloop(q: &LoopTable, generators: &[Element]) -> Result<SubloopSet> {
    if generators.is_empty() {
        return Err(Error::InvalidInput(
            "cannot generate a subloop from an empty set".into(),
        ));
    }
    let mut members = vec![false; q.order()];
    let mut list = Vec::new();
    for &g in std::iter::once(&IDENTITY).chain(generators) {
        q.check(g)?;
        if !members[g] {
            members[g] = true;
            list.push(g);
        }
    }
    // Worklist closure. A finite set closed under multiplication is closed
    // under both divisions, since translations restrict to bijections.
    let mut next = 0;
    while next < list.len() {
        let s = list[next];
        next += 1;
        for i in 0..next {
            let t = list[i];
            for p in [q.mul(s, t), q.mul(t, s)] {
                if !members[p] {
                    members[p] = true;
                    list.push(p);
                }
            }
        }
    }
    Ok(SubloopSet::from_members(members))
}

/// `N(Q)`: the elements that associate with every pair in all three positions.
pub fn nucleus(q: &LoopTable) -> Result<SubloopSet> {
    let n = q.order();
    let members = (0..n)
        .map(|a| {
            q.elements().all(|x| {
                q.elements().all(|y| {
                    q.mul(q.mul(a, x), y) == q.mul(a, q.mul(x, y))
                        && q.mul(q.mul(x, a), y) == q.mul(x, q.mul(a, y))
                        && q.mul(q.mul(x, y), a) == q.mul(x, q.mul(y, a))
                })
            })
        })
        .collect();
    let set = SubloopSet::from_members(members);
    if let Some((x, y)) = set.closure_failure(q) {
        return Err(Error::TheoremViolation(format!(
            "nucleus of {} is not a subloop: fails at ({x}, {y})",
            q.label()
        )));
    }
    Ok(set)
}

fn image_set(n: usize, it: impl Iterator<Item = Element>) -> Vec<bool> {
    let mut m = vec![false; n];
    for e in it {
        m[e] = true;
    }
    m
}

/// Normality by coset equations: for all `x`, `y`
/// `xH = Hx`, `(xH)y = x(Hy)`, `(Hx)y = H(xy)` and `x(yH) = (xy)H`.
pub fn is_normal(q: &LoopTable, h: &SubloopSet) -> Result<bool> {
    if h.elements().iter().any(|&e| e >= q.order()) || h.closure_failure(q).is_some() {
        return Err(Error::InvalidInput(format!(
            "{:?} is not a subloop of {}",
            h.elements(),
            q.label()
        )));
    }
    let n = q.order();
    let hs = h.elements();
    for x in q.elements() {
        let xh = image_set(n, hs.iter().map(|&k| q.mul(x, k)));
        let hx = image_set(n, hs.iter().map(|&k| q.mul(k, x)));
        if xh != hx {
            return Ok(false);
        }
        for y in q.elements() {
            let xy = q.mul(x, y);
            let xh_y = image_set(n, hs.iter().map(|&k| q.mul(q.mul(x, k), y)));
            let x_hy = image_set(n, hs.iter().map(|&k| q.mul(x, q.mul(k, y))));
            let hx_y = image_set(n, hs.iter().map(|&k| q.mul(q.mul(k, x), y)));
            let h_xy = image_set(n, hs.iter().map(|&k| q.mul(k, xy)));
            let x_yh = image_set(n, hs.iter().map(|&k| q.mul(x, q.mul(y, k))));
            let xy_h = image_set(n, hs.iter().map(|&k| q.mul(xy, k)));
            if xh_y != x_hy || hx_y != h_xy || x_yh != xy_h {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Normality as invariance under the inner mapping group. Independent of
/// [`is_normal`] and used to cross-check it.
pub fn is_normal_by_inner_mappings(q: &LoopTable, h: &SubloopSet) -> bool {
    inner_mapping_generators(q)
        .iter()
        .all(|f| h.elements().iter().all(|&k| h.contains(f[k])))
}

/// `Q/H` together with the coset partition and the projection.
#[derive(Debug, Clone)]
pub struct QuotientLoop {
    pub kernel: SubloopSet,
    /// Cosets ordered by their least element, each sorted.
    pub cosets: Vec<Vec<Element>>,
    pub table: LoopTable,
    /// `projection[x]` is the index of the coset containing `x`.
    pub projection: Vec<usize>,
}

/// The coset-map sidecar written next to a serialized quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetMap {
    pub cosets: Vec<Vec<Element>>,
}

impl QuotientLoop {
    pub fn coset_map(&self) -> CosetMap {
        CosetMap {
            cosets: self.cosets.clone(),
        }
    }
}

/// Builds `Q/H` for a normal subloop `H`. Every pair of representatives is
/// checked to land in the same coset.
pub fn quotient(q: &LoopTable, h: &SubloopSet) -> Result<QuotientLoop> {
    if !is_normal(q, h)? {
        return Err(Error::InvalidInput(format!(
            "{:?} is not a normal subloop of {}",
            h.elements(),
            q.label()
        )));
    }
    let n = q.order();
    let mut projection = vec![usize::MAX; n];
    let mut cosets: Vec<Vec<Element>> = Vec::new();
    for x in q.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let idx = cosets.len();
        let mut coset: Vec<Element> = h.elements().iter().map(|&k| q.mul(x, k)).collect();
        coset.sort_unstable();
        for &e in &coset {
            if projection[e] != usize::MAX {
                return Err(Error::NormalityWitness {
                    x,
                    y: e,
                    got: projection[e],
                    expected: idx,
                });
            }
            projection[e] = idx;
        }
        cosets.push(coset);
    }

    let m = cosets.len();
    let mut rows = vec![vec![usize::MAX; m]; m];
    for x in q.elements() {
        for y in q.elements() {
            let (cx, cy) = (projection[x], projection[y]);
            let got = projection[q.mul(x, y)];
            let slot = &mut rows[cx][cy];
            if *slot == usize::MAX {
                *slot = got;
            } else if *slot != got {
                return Err(Error::NormalityWitness {
                    x,
                    y,
                    got,
                    expected: *slot,
                });
            }
        }
    }
    let name = format!("{}/{}", q.label(), h.len());
    let table = LoopTable::from_rows(rows, Some(name))
        .map_err(|e| Error::TheoremViolation(format!("quotient table is not a loop: {e}")))?;
    Ok(QuotientLoop {
        kernel: h.clone(),
        cosets,
        table,
        projection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquaringReport {
    pub quotient_order: usize,
    pub surjective: bool,
    pub injective: bool,
    /// Coset indices hit by `xH ↦ x²H`, sorted.
    pub image: Vec<usize>,
}

/// The squaring map `xH ↦ x²H` on `Q/H`.
pub fn squaring_surjective(q: &LoopTable, h: &SubloopSet) -> Result<SquaringReport> {
    let quot = quotient(q, h)?;
    squaring_on_quotient(&quot)
}

pub fn squaring_on_quotient(quot: &QuotientLoop) -> Result<SquaringReport> {
    let t = &quot.table;
    let m = t.order();
    let mut hit = vec![false; m];
    for c in t.elements() {
        hit[t.mul(c, c)] = true;
    }
    let image: Vec<usize> = (0..m).filter(|&c| hit[c]).collect();
    let surjective = image.len() == m;
    let mut fibre = vec![0usize; m];
    for c in t.elements() {
        fibre[t.mul(c, c)] += 1;
    }
    let injective = fibre.iter().all(|&k| k <= 1);
    // Pigeonhole on a finite set; a mismatch means the table is corrupt.
    if injective != surjective {
        return Err(Error::TheoremViolation(format!(
            "squaring on a finite quotient: surjective = {surjective}, injective = {injective}"
        )));
    }
    Ok(SquaringReport {
        quotient_order: m,
        surjective,
        injective,
        image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::loop_table::parse_loop;

    fn dot() -> LoopTable {
        parse_loop(include_str!("../data/paper-dot.loop")).unwrap()
    }

    #[test]
    fn generated_subloops_of_s3() {
        let q = dot();
        assert_eq!(generated_subloop(&q, &[3]).unwrap().elements(), &[0, 3]);
        assert_eq!(generated_subloop(&q, &[0]).unwrap().elements(), &[0]);
        assert_eq!(generated_subloop(&q, &[1, 3]).unwrap().len(), 6);
        assert!(generated_subloop(&q, &[]).is_err());
        assert!(generated_subloop(&q, &[7]).is_err());
    }

    #[test]
    fn nucleus_of_group_is_whole() {
        let q = dot();
        assert!(nucleus(&q).unwrap().is_whole(&q));
    }

    #[test]
    fn normality_in_s3() {
        let q = dot();
        assert!(is_normal(&q, &SubloopSet::trivial(&q)).unwrap());
        let h = generated_subloop(&q, &[3]).unwrap();
        assert!(!is_normal(&q, &h).unwrap());
        assert!(!is_normal_by_inner_mappings(&q, &h));
        let a3 = generated_subloop(&q, &[1]).unwrap();
        assert!(is_normal(&q, &a3).unwrap());
        assert!(quotient(&q, &h).is_err());
    }

    #[test]
    fn subloop_set_rejects_non_closed() {
        let q = dot();
        assert!(SubloopSet::new(&q, [0, 1]).is_err());
        assert!(SubloopSet::new(&q, [0, 1, 2]).is_ok());
    }

    #[test]
    fn quotients() {
        let q = dot();
        let whole = quotient(&q, &SubloopSet::full(&q)).unwrap();
        assert_eq!(whole.table.order(), 1);

        let c4 = catalog::cyclic(4);
        let h = SubloopSet::new(&c4, [0, 2]).unwrap();
        let quot = quotient(&c4, &h).unwrap();
        assert_eq!(quot.cosets, vec![vec![0, 2], vec![1, 3]]);
        assert!(quot.table.same_table(&catalog::cyclic(2)));
        for x in c4.elements() {
            for y in c4.elements() {
                assert_eq!(
                    quot.projection[c4.mul(x, y)],
                    quot.table.mul(quot.projection[x], quot.projection[y])
                );
            }
        }

        let triv = quotient(&c4, &SubloopSet::trivial(&c4)).unwrap();
        assert!(triv.table.same_table(&c4));
    }

    #[test]
    fn squaring_examples() {
        let q = dot();
        let r = squaring_surjective(&q, &nucleus(&q).unwrap()).unwrap();
        assert!(r.surjective && r.injective);
        assert_eq!(r.quotient_order, 1);

        let c2 = catalog::cyclic(2);
        let r = squaring_surjective(&c2, &SubloopSet::trivial(&c2)).unwrap();
        assert!(!r.surjective && !r.injective);
        assert_eq!(r.image, vec![0]);

        for n in [3, 5, 7] {
            let c = catalog::cyclic(n);
            let r = squaring_surjective(&c, &SubloopSet::trivial(&c)).unwrap();
            assert!(r.surjective);
        }
    }
}
