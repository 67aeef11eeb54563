//! Membership tests for the identity classes used throughout the crate.
//!
//! Every check is an exhaustive scan in lexicographic order, so a failing
//! report always carries the smallest witness for that scan.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::loop_table::{Element, LoopTable};
use crate::structure::generated_subloop;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Group,
    Commutative,
    Moufang,
    Diassociative,
    Automorphic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub property: Property,
    pub holds: bool,
    /// Present iff `holds` is false. For the associativity-style properties
    /// this is a triple `(x, y, z)`; see [`IdentityReport::reproduces`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Element>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    fn pass(property: Property) -> Self {
        IdentityReport {
            property,
            holds: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(property: Property, witness: Vec<Element>, detail: String) -> Self {
        IdentityReport {
            property,
            holds: false,
            witness: Some(witness),
            detail: Some(detail),
        }
    }

    /// Re-evaluates the witness against `q` and reports whether the violation
    /// is genuine. Returns true for passing reports.
    pub fn reproduces(&self, q: &LoopTable) -> bool {
        let Some(w) = &self.witness else {
            return self.holds;
        };
        match (self.property, w.as_slice()) {
            (Property::Group | Property::Diassociative, &[x, y, z]) => {
                q.mul(x, q.mul(y, z)) != q.mul(q.mul(x, y), z)
            }
            (Property::Commutative, &[x, y]) => q.mul(x, y) != q.mul(y, x),
            (Property::Moufang, &[x, y, z]) => {
                q.mul(q.mul(x, y), q.mul(z, x)) != q.mul(x, q.mul(q.mul(y, z), x))
            }
            (Property::Automorphic, &[kind, x, y, u, v]) => {
                let f = inner_mapping(q, InnerKind::from_code(kind), x, y);
                f[q.mul(u, v)] != q.mul(f[u], f[v])
            }
            _ => false,
        }
    }
}

fn first_triple(
    q: &LoopTable,
    mut bad: impl FnMut(Element, Element, Element) -> bool,
) -> Option<[Element; 3]> {
    for x in q.elements() {
        for y in q.elements() {
            for z in q.elements() {
                if bad(x, y, z) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

fn associator_fails(q: &LoopTable, x: Element, y: Element, z: Element) -> bool {
    q.mul(x, q.mul(y, z)) != q.mul(q.mul(x, y), z)
}

pub fn is_group(q: &LoopTable) -> IdentityReport {
    match first_triple(q, |x, y, z| associator_fails(q, x, y, z)) {
        None => IdentityReport::pass(Property::Group),
        Some([x, y, z]) => IdentityReport::fail(
            Property::Group,
            vec![x, y, z],
            format!(
                "{x}·({y}·{z}) = {} but ({x}·{y})·{z} = {}",
                q.mul(x, q.mul(y, z)),
                q.mul(q.mul(x, y), z)
            ),
        ),
    }
}

pub fn is_commutative(q: &LoopTable) -> IdentityReport {
    for x in q.elements() {
        for y in x + 1..q.order() {
            if q.mul(x, y) != q.mul(y, x) {
                return IdentityReport::fail(
                    Property::Commutative,
                    vec![x, y],
                    format!("{x}·{y} = {} but {y}·{x} = {}", q.mul(x, y), q.mul(y, x)),
                );
            }
        }
    }
    IdentityReport::pass(Property::Commutative)
}

/// First violation of each of the three Moufang identities
/// `xy·zx = x(yz·x)`, `(xy·x)z = x(y·xz)` and `(zx·y)x = z(x·yx)`.
pub fn moufang_identities(q: &LoopTable) -> [Option<[Element; 3]>; 3] {
    let m = |a, b| q.mul(a, b);
    [
        first_triple(q, |x, y, z| m(m(x, y), m(z, x)) != m(x, m(m(y, z), x))),
        first_triple(q, |x, y, z| m(m(m(x, y), x), z) != m(x, m(y, m(x, z)))),
        first_triple(q, |x, y, z| m(m(m(z, x), y), x) != m(z, m(x, m(y, x)))),
    ]
}

/// Decides the Moufang property. The three Moufang identities are equivalent
/// in loops, so a disagreement between them is reported as a trap.
pub fn is_moufang(q: &LoopTable) -> Result<IdentityReport> {
    let [first, second, third] = moufang_identities(q);
    if first.is_some() != second.is_some() || first.is_some() != third.is_some() {
        return Err(Error::TheoremViolation(format!(
            "Moufang identities disagree on {}: {:?} / {:?} / {:?}",
            q.label(),
            first,
            second,
            third
        )));
    }
    Ok(match first {
        None => IdentityReport::pass(Property::Moufang),
        Some([x, y, z]) => IdentityReport::fail(
            Property::Moufang,
            vec![x, y, z],
            format!(
                "({x}·{y})·({z}·{x}) = {} but {x}·(({y}·{z})·{x}) = {}",
                q.mul(q.mul(x, y), q.mul(z, x)),
                q.mul(x, q.mul(q.mul(y, z), x))
            ),
        ),
    })
}

/// Every two-generated subloop is a group.
///
/// The alternative and flexible laws are scanned first since they are the
/// cheapest consequences of diassociativity; their violations are the most
/// readable witnesses. Every witness is a triple `(x, y, z)` inside a
/// two-generated subloop with `x(yz) ≠ (xy)z`.
pub fn is_diassociative(q: &LoopTable) -> IdentityReport {
    let fail = |[x, y, z]: [Element; 3], law: &str| {
        IdentityReport::fail(
            Property::Diassociative,
            vec![x, y, z],
            format!(
                "{law}: {x}·({y}·{z}) = {} but ({x}·{y})·{z} = {}",
                q.mul(x, q.mul(y, z)),
                q.mul(q.mul(x, y), z)
            ),
        )
    };
    for x in q.elements() {
        for y in q.elements() {
            if associator_fails(q, x, x, y) {
                return fail([x, x, y], "left alternative law");
            }
        }
    }
    for x in q.elements() {
        for y in q.elements() {
            if associator_fails(q, y, x, x) {
                return fail([y, x, x], "right alternative law");
            }
        }
    }
    for x in q.elements() {
        for y in q.elements() {
            if associator_fails(q, x, y, x) {
                return fail([x, y, x], "flexible law");
            }
        }
    }
    let mut seen = BTreeSet::new();
    for a in q.elements() {
        for b in a..q.order() {
            let sub = generated_subloop(q, &[a, b]).expect("nonempty generators");
            if !seen.insert(sub.elements().to_vec()) {
                continue;
            }
            let els = sub.elements();
            for &x in els {
                for &y in els {
                    for &z in els {
                        if associator_fails(q, x, y, z) {
                            return fail([x, y, z], &format!("subloop generated by {a}, {b}"));
                        }
                    }
                }
            }
        }
    }
    IdentityReport::pass(Property::Diassociative)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    /// `L(x,y) = L_{xy}⁻¹ L_x L_y`
    Left,
    /// `R(x,y) = R_{yx}⁻¹ R_x R_y`
    Right,
    /// `T(x) = L_x⁻¹ R_x`
    Middle,
}

impl InnerKind {
    fn code(self) -> Element {
        match self {
            InnerKind::Left => 0,
            InnerKind::Right => 1,
            InnerKind::Middle => 2,
        }
    }

    fn from_code(code: Element) -> Self {
        match code {
            0 => InnerKind::Left,
            1 => InnerKind::Right,
            _ => InnerKind::Middle,
        }
    }
}

/// One inner mapping as a permutation vector (`y` is ignored for `Middle`).
pub fn inner_mapping(q: &LoopTable, kind: InnerKind, x: Element, y: Element) -> Vec<Element> {
    q.elements()
        .map(|z| match kind {
            InnerKind::Left => q.ldiv(q.mul(x, y), q.mul(x, q.mul(y, z))),
            InnerKind::Right => q.rdiv(q.mul(q.mul(z, y), x), q.mul(y, x)),
            InnerKind::Middle => q.ldiv(x, q.mul(z, x)),
        })
        .collect()
}

fn generator_family(q: &LoopTable) -> impl Iterator<Item = (InnerKind, Element, Element)> + '_ {
    let pairs = move |kind| {
        q.elements()
            .flat_map(move |x| q.elements().map(move |y| (kind, x, y)))
    };
    pairs(InnerKind::Left)
        .chain(pairs(InnerKind::Right))
        .chain(q.elements().map(|x| (InnerKind::Middle, x, 0)))
}

/// The distinct permutations in the standard generating family of the inner
/// mapping group.
pub fn inner_mapping_generators(q: &LoopTable) -> Vec<Vec<Element>> {
    let set: BTreeSet<Vec<Element>> = generator_family(q)
        .map(|(kind, x, y)| inner_mapping(q, kind, x, y))
        .collect();
    set.into_iter().collect()
}

/// All inner mappings are automorphisms. Checked on the generating family
/// `L(x,y)`, `R(x,y)`, `T(x)`; automorphisms are closed under composition so
/// this decides the property.
pub fn is_automorphic(q: &LoopTable) -> IdentityReport {
    let mut checked = BTreeSet::new();
    for (kind, x, y) in generator_family(q) {
        let f = inner_mapping(q, kind, x, y);
        if !checked.insert(f.clone()) {
            continue;
        }
        for u in q.elements() {
            for v in q.elements() {
                if f[q.mul(u, v)] != q.mul(f[u], f[v]) {
                    let name = match kind {
                        InnerKind::Left => format!("L({x},{y})"),
                        InnerKind::Right => format!("R({x},{y})"),
                        InnerKind::Middle => format!("T({x})"),
                    };
                    return IdentityReport::fail(
                        Property::Automorphic,
                        vec![kind.code(), x, y, u, v],
                        format!("{name} is not an automorphism at ({u}, {v})"),
                    );
                }
            }
        }
    }
    IdentityReport::pass(Property::Automorphic)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentitySummary {
    pub group: IdentityReport,
    pub commutative: IdentityReport,
    pub moufang: IdentityReport,
    pub diassociative: IdentityReport,
    pub automorphic: IdentityReport,
}

pub fn summarize(q: &LoopTable) -> Result<IdentitySummary> {
    Ok(IdentitySummary {
        group: is_group(q),
        commutative: is_commutative(q),
        moufang: is_moufang(q)?,
        diassociative: is_diassociative(q),
        automorphic: is_automorphic(q),
    })
}
