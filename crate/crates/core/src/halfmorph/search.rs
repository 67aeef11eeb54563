//! Exhaustive backtracking search for half-isomorphisms.
//!
//! The source carrier is visited along its generation structure: a chosen
//! generator is followed by every product it creates with elements already
//! placed. A product `z = x·y` can only map to `φx·φy` or `φy·φx`, so after
//! the generators are fixed almost every element has at most two candidates.
//! Every triple `(x, y, xy)` is checked as soon as its last member is
//! assigned.
//!
//! Pruning used, all sound for arbitrary loops unless noted:
//! * `φ(0) = 0` (`φ0 = φ0·φ0` forces the identity);
//! * pair consistency, which subsumes inverse compatibility;
//! * when both loops are power-associative, `φ(xᵏ) = (φx)ᵏ`, so element
//!   orders and the order statistics of the two loops must match.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use super::{classify_map, ElementMap, MapClassification};
use crate::loop_table::{Element, LoopTable, IDENTITY};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum VerdictFilter {
    #[default]
    All,
    ProperOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub filter: VerdictFilter,
    /// Stop at the first accepted map in search order.
    pub first: bool,
    /// Fan out over the first generator's images on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            filter: VerdictFilter::All,
            first: false,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Found {
    pub images: Vec<Element>,
    pub classification: MapClassification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Identity,
    Generator,
    Product(Element, Element),
}

/// Precomputed visiting order and constraint schedule for one source loop.
#[derive(Debug, Clone)]
pub struct SearchPlan {
    order: Vec<Element>,
    steps: Vec<Step>,
    // checks[p]: triples (x, y, xy) whose last member is placed at position p
    checks: Vec<Vec<(Element, Element, Element)>>,
}

impl SearchPlan {
    pub fn new(q: &LoopTable) -> Self {
        let n = q.order();
        let mut order = vec![IDENTITY];
        let mut steps = vec![Step::Identity];
        let mut placed = vec![false; n];
        placed[IDENTITY] = true;
        let mut next = 1;

        while order.len() < n {
            // Most-constrained first: the generator that closes the largest
            // subloop together with what is already placed.
            let g = (0..n)
                .filter(|&g| !placed[g])
                .max_by_key(|&g| (closure_size(q, &placed, g), std::cmp::Reverse(g)))
                .expect("an unplaced element exists");
            placed[g] = true;
            order.push(g);
            steps.push(Step::Generator);
            while next < order.len() {
                let s = order[next];
                next += 1;
                for i in 0..next {
                    let t = order[i];
                    for (x, y) in [(s, t), (t, s)] {
                        let p = q.mul(x, y);
                        if !placed[p] {
                            placed[p] = true;
                            order.push(p);
                            steps.push(Step::Product(x, y));
                        }
                    }
                }
            }
        }

        let mut position = vec![0; n];
        for (p, &e) in order.iter().enumerate() {
            position[e] = p;
        }
        let mut checks = vec![Vec::new(); n];
        for x in 1..n {
            for y in 1..n {
                let z = q.mul(x, y);
                let last = position[x].max(position[y]).max(position[z]);
                checks[last].push((x, y, z));
            }
        }
        SearchPlan {
            order,
            steps,
            checks,
        }
    }

    /// The source elements in visiting order.
    pub fn visiting_order(&self) -> &[Element] {
        &self.order
    }

    /// Elements assigned freely (generators), in visiting order.
    pub fn generators(&self) -> Vec<Element> {
        self.order
            .iter()
            .zip(&self.steps)
            .filter(|(_, s)| **s == Step::Generator)
            .map(|(&e, _)| e)
            .collect()
    }
}

fn closure_size(q: &LoopTable, placed: &[bool], g: Element) -> usize {
    let mut members = placed.to_vec();
    members[g] = true;
    let mut list: Vec<Element> = (0..q.order()).filter(|&x| members[x]).collect();
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
    list.len()
}

struct Searcher<'a> {
    source: &'a LoopTable,
    target: &'a LoopTable,
    plan: SearchPlan,
    // element orders when both loops are power-associative
    orders: Option<(Vec<usize>, Vec<usize>)>,
}

impl<'a> Searcher<'a> {
    fn new(source: &'a LoopTable, target: &'a LoopTable) -> Option<Self> {
        if source.order() != target.order() {
            return None;
        }
        let orders = if source.is_power_associative() && target.is_power_associative() {
            let of = |q: &LoopTable| -> Vec<usize> {
                q.elements().map(|x| q.element_order(x).unwrap()).collect()
            };
            let (so, to) = (of(source), of(target));
            let (mut a, mut b) = (so.clone(), to.clone());
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return None;
            }
            Some((so, to))
        } else {
            None
        };
        Some(Searcher {
            source,
            target,
            plan: SearchPlan::new(source),
            orders,
        })
    }

    fn candidates(&self, pos: usize, img: &[Element], used: &[bool]) -> Vec<Element> {
        let z = self.plan.order[pos];
        let mut out = match self.plan.steps[pos] {
            Step::Identity => vec![IDENTITY],
            Step::Generator => match &self.orders {
                Some((so, to)) => self.target.elements().filter(|&v| to[v] == so[z]).collect(),
                None => self.target.elements().collect(),
            },
            Step::Product(x, y) => {
                let (fx, fy) = (img[x], img[y]);
                let (a, b) = (self.target.mul(fx, fy), self.target.mul(fy, fx));
                if a == b {
                    vec![a]
                } else {
                    vec![a.min(b), a.max(b)]
                }
            }
        };
        out.retain(|&v| !used[v]);
        out
    }

    fn consistent(&self, pos: usize, img: &[Element]) -> bool {
        let t = self.target;
        self.plan.checks[pos].iter().all(|&(x, y, z)| {
            let (fx, fy, fz) = (img[x], img[y], img[z]);
            fz == t.mul(fx, fy) || fz == t.mul(fy, fx)
        })
    }

    fn dfs(
        &self,
        pos: usize,
        img: &mut [Element],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[Element]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if pos == self.plan.order.len() {
            return visit(img);
        }
        let z = self.plan.order[pos];
        for v in self.candidates(pos, img, used) {
            img[z] = v;
            used[v] = true;
            let r = if self.consistent(pos, img) {
                self.dfs(pos + 1, img, used, visit)
            } else {
                ControlFlow::Continue(())
            };
            used[v] = false;
            img[z] = usize::MAX;
            r?;
        }
        ControlFlow::Continue(())
    }

    fn fresh(&self) -> (Vec<Element>, Vec<bool>) {
        let n = self.source.order();
        (vec![usize::MAX; n], vec![false; n])
    }

    /// Runs the search from position `start` with positions before it
    /// already assigned as in `prefix`.
    fn run_from(
        &self,
        prefix: &[(Element, Element)],
        start: usize,
        visit: &mut dyn FnMut(&[Element]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (mut img, mut used) = self.fresh();
        for &(x, v) in prefix {
            img[x] = v;
            used[v] = true;
        }
        for p in 0..start {
            if !self.consistent(p, &img) {
                return ControlFlow::Continue(());
            }
        }
        self.dfs(start, &mut img, &mut used, visit)
    }
}

fn accept(
    source: &LoopTable,
    target: &LoopTable,
    images: &[Element],
    filter: VerdictFilter,
) -> Option<Found> {
    let phi = ElementMap::new(source, target, images.to_vec()).expect("images in range");
    let classification = classify_map(&phi);
    debug_assert!(classification.is_half_isomorphism());
    match filter {
        VerdictFilter::ProperOnly if !classification.is_proper() => None,
        _ => Some(Found {
            images: phi.into_images(),
            classification,
        }),
    }
}

/// Every half-isomorphism `source → target` accepted by `options.filter`,
/// sorted lexicographically by image sequence. With `options.first` the
/// result holds only the first accepted map in search order.
pub fn enumerate_half_isomorphisms(
    source: &LoopTable,
    target: &LoopTable,
    options: &SearchOptions,
) -> Vec<Found> {
    let Some(searcher) = Searcher::new(source, target) else {
        return Vec::new();
    };
    let n = source.order();

    let collect_from = |prefix: &[(Element, Element)], start: usize, first: bool| {
        let mut found = Vec::new();
        let _ = searcher.run_from(prefix, start, &mut |images| {
            if let Some(f) = accept(source, target, images, options.filter) {
                found.push(f);
                if first {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        found
    };

    if options.first || !options.parallel || n < 3 {
        let mut found = collect_from(&[(IDENTITY, IDENTITY)], 1, options.first);
        found.sort_by(|a, b| a.images.cmp(&b.images));
        return found;
    }

    // Position 1 is always the first generator.
    let g = searcher.plan.order[1];
    let (img, used) = {
        let (mut img, mut used) = searcher.fresh();
        img[IDENTITY] = IDENTITY;
        used[IDENTITY] = true;
        (img, used)
    };
    let branches = searcher.candidates(1, &img, &used);
    let mut found: Vec<Found> = branches
        .par_iter()
        .map(|&v| collect_from(&[(IDENTITY, IDENTITY), (g, v)], 2, false))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    found.sort_by(|a, b| a.images.cmp(&b.images));
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic, paper_dot, paper_star};
    use crate::halfmorph::Verdict;

    #[test]
    fn plan_covers_every_element_once() {
        for q in [paper_dot(), cyclic(7), paper_star()] {
            let plan = SearchPlan::new(&q);
            let mut seen = plan.visiting_order().to_vec();
            seen.sort_unstable();
            assert_eq!(seen, q.elements().collect::<Vec<_>>());
            assert_eq!(plan.visiting_order()[0], 0);
        }
        assert_eq!(SearchPlan::new(&cyclic(7)).generators(), vec![1]);
    }

    #[test]
    fn c3_automorphisms() {
        let c3 = cyclic(3);
        let found = enumerate_half_isomorphisms(&c3, &c3, &SearchOptions::default());
        let images: Vec<_> = found.iter().map(|f| f.images.clone()).collect();
        assert_eq!(images, vec![vec![0, 1, 2], vec![0, 2, 1]]);
        for f in &found {
            assert_eq!(f.classification.verdict, Verdict::Isomorphism);
            assert!(f.classification.anti_homomorphism);
        }
    }

    #[test]
    fn s3_has_no_proper_half_automorphism() {
        let s3 = paper_dot();
        let found = enumerate_half_isomorphisms(&s3, &s3, &SearchOptions::default());
        // 6 automorphisms and 6 anti-automorphisms
        assert_eq!(found.len(), 12);
        assert!(found.iter().all(|f| !f.classification.is_proper()));
    }

    #[test]
    fn dot_star_pair() {
        let (dot, star) = (paper_dot(), paper_star());
        let opts = SearchOptions {
            filter: VerdictFilter::ProperOnly,
            ..SearchOptions::default()
        };
        let found = enumerate_half_isomorphisms(&dot, &star, &opts);
        assert!(found.iter().any(|f| f.images == vec![0, 1, 2, 3, 4, 5]));
        let first = enumerate_half_isomorphisms(
            &dot,
            &star,
            &SearchOptions {
                first: true,
                ..opts
            },
        );
        assert_eq!(first.len(), 1);
        assert!(first[0].classification.is_proper());
    }

    #[test]
    fn mismatched_orders_yield_nothing() {
        assert!(
            enumerate_half_isomorphisms(&cyclic(6), &paper_dot(), &SearchOptions::default())
                .is_empty()
        );
        assert!(
            enumerate_half_isomorphisms(&cyclic(4), &cyclic(5), &SearchOptions::default())
                .is_empty()
        );
    }
}
