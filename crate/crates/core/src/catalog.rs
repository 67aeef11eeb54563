//! Built-in loops: the two worked-example tables, small groups, Chein
//! doubles, and exhaustive enumeration of small loops.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{is_commutative, is_group, is_moufang};
use crate::loop_table::{parse_loop, Element, LoopTable};

/// Largest order [`enumerate_loops`] accepts.
pub const MAX_ENUMERATION_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperExample,
    GroupConstruction,
    CheinDouble,
    Enumerated,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub table: LoopTable,
    pub provenance: Provenance,
}

impl CatalogEntry {
    fn new(table: LoopTable, provenance: Provenance) -> Self {
        CatalogEntry {
            name: table.label(),
            table,
            provenance,
        }
    }
}

pub const PAPER_DOT: &str = include_str!("../data/paper-dot.loop");
pub const PAPER_STAR: &str = include_str!("../data/paper-star.loop");
pub const PAPER_IDENTITY_MAP: &str = include_str!("../data/paper-identity.map.json");

/// The symmetric group `S3` as labelled in the worked example.
pub fn paper_dot() -> LoopTable {
    parse_loop(PAPER_DOT).expect("shipped table is a loop")
}

/// The automorphic, non-diassociative loop of order 6 from the same example.
pub fn paper_star() -> LoopTable {
    parse_loop(PAPER_STAR).expect("shipped table is a loop")
}

pub fn cyclic(n: usize) -> LoopTable {
    LoopTable::from_fn(n, Some(format!("C{n}")), |x, y| (x + y) % n).expect("cyclic group")
}

/// `S3` on the permutations of `{0,1,2}` in lexicographic order, composed
/// right to left.
pub fn symmetric3() -> LoopTable {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    LoopTable::from_fn(6, Some("S3".into()), |x, y| {
        let (p, q) = (perms[x], perms[y]);
        index([p[q[0]], p[q[1]], p[q[2]]])
    })
    .expect("S3")
}

/// The dihedral group of order `2m`; `r^i s^j` is stored at `i + m·j`.
pub fn dihedral(m: usize) -> LoopTable {
    LoopTable::from_fn(2 * m, Some(format!("D{m}")), |x, y| {
        let (a, b) = (x % m, x / m);
        let (c, d) = (y % m, y / m);
        let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
        rot + m * ((b + d) % 2)
    })
    .expect("dihedral group")
}

/// The quaternion group; `±u` for `u ∈ {1, i, j, k}` is stored at `2u + sign`.
pub fn quaternion() -> LoopTable {
    // unit products: (unit, negated)
    const UNITS: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    LoopTable::from_fn(8, Some("Q8".into()), |x, y| {
        let (u, su) = (x / 2, x % 2 == 1);
        let (v, sv) = (y / 2, y % 2 == 1);
        let (w, sw) = UNITS[u][v];
        2 * w + usize::from(su ^ sv ^ sw)
    })
    .expect("quaternion group")
}

/// `A × B`, with `(a, b)` stored at `a·|B| + b`.
pub fn direct_product(a: &LoopTable, b: &LoopTable) -> LoopTable {
    let m = b.order();
    let name = format!("{}x{}", a.label(), b.label());
    LoopTable::from_fn(a.order() * m, Some(name), |x, y| {
        a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
    })
    .expect("direct product of loops is a loop")
}

/// The Chein double `M(G, 2)` on `G ∪ Gu`, with `g` at index `g` and `gu` at
/// `|G| + g`:
///
/// ```text
/// g · h   = gh          g · hu  = (hg)u
/// gu · h  = (gh⁻¹)u     gu · hu = h⁻¹g
/// ```
pub fn chein_double(g: &LoopTable) -> Result<LoopTable> {
    if !is_group(g).holds {
        return Err(Error::InvalidInput(format!("{} is not a group", g.label())));
    }
    let n = g.order();
    let inv: Vec<Element> = g.elements().map(|x| g.ldiv(x, 0)).collect();
    let name = format!("chein-{}", g.label());
    let m = LoopTable::from_fn(2 * n, Some(name), |x, y| match (x < n, y < n) {
        (true, true) => g.mul(x, y),
        (true, false) => n + g.mul(y - n, x),
        (false, true) => n + g.mul(x - n, inv[y]),
        (false, false) => g.mul(inv[y - n], x - n),
    })?;
    if !is_moufang(&m)?.holds {
        return Err(Error::TheoremViolation(format!(
            "{} is not Moufang",
            m.label()
        )));
    }
    if is_group(&m).holds != is_commutative(g).holds {
        return Err(Error::TheoremViolation(format!(
            "{} associativity does not match commutativity of {}",
            m.label(),
            g.label()
        )));
    }
    Ok(m)
}

/// Calls `visit` on every reduced Latin square of order `n` (every loop with
/// neutral element 0), in lexicographic row-major order.
pub fn for_each_reduced_latin_square(n: usize, mut visit: impl FnMut(&[Element])) {
    assert!(n <= 64, "bitmask enumeration supports order ≤ 64");
    if n == 0 {
        return;
    }
    let mut cells = vec![0usize; n * n];
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    for i in 0..n {
        cells[i] = i;
        cells[i * n] = i;
        rows[i] |= 1 << i;
        cols[i] |= 1 << i;
        if i > 0 {
            cols[0] |= 1 << i;
            rows[0] |= 1 << i;
        }
    }
    // After the border: row i contains i (col 0), column j contains j (row 0).
    fill(n, n + 1, &mut cells, &mut rows, &mut cols, &mut visit);
}

fn fill(
    n: usize,
    pos: usize,
    cells: &mut [usize],
    rows: &mut [u64],
    cols: &mut [u64],
    visit: &mut impl FnMut(&[Element]),
) {
    if pos >= n * n {
        visit(cells);
        return;
    }
    let (r, c) = (pos / n, pos % n);
    if c == 0 {
        return fill(n, pos + 1, cells, rows, cols, visit);
    }
    let free = !(rows[r] | cols[c]);
    for v in 0..n {
        if free & (1 << v) == 0 {
            continue;
        }
        cells[pos] = v;
        rows[r] |= 1 << v;
        cols[c] |= 1 << v;
        fill(n, pos + 1, cells, rows, cols, visit);
        rows[r] &= !(1 << v);
        cols[c] &= !(1 << v);
    }
}

/// All loops of order `n ≤ 6` with neutral element 0, duplicate-free and in
/// lexicographic order of their tables. Named `L{n}-{index}`.
pub fn enumerate_loops(n: usize) -> Result<Vec<LoopTable>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidInput(format!(
            "loop enumeration supports orders 1..={MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_reduced_latin_square(n, |cells| {
        if err.is_some() {
            return;
        }
        let name = format!("L{n}-{}", out.len());
        let rows = cells.chunks(n).map(<[usize]>::to_vec).collect();
        match LoopTable::from_rows(rows, Some(name)) {
            Ok(q) => out.push(q),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The named loops shipped with the crate.
pub fn builtin() -> Vec<CatalogEntry> {
    use Provenance::*;
    let mut entries = vec![
        CatalogEntry::new(paper_dot(), PaperExample),
        CatalogEntry::new(paper_star(), PaperExample),
    ];
    for n in 1..=8 {
        entries.push(CatalogEntry::new(cyclic(n), GroupConstruction));
    }
    let c2 = cyclic(2);
    let s3 = symmetric3();
    let d4 = dihedral(4).with_name("D4");
    let q8 = quaternion();
    entries.extend([
        CatalogEntry::new(direct_product(&c2, &c2), GroupConstruction),
        CatalogEntry::new(s3.clone(), GroupConstruction),
        CatalogEntry::new(direct_product(&c2, &cyclic(4)), GroupConstruction),
        CatalogEntry::new(
            direct_product(&direct_product(&c2, &c2), &c2),
            GroupConstruction,
        ),
        CatalogEntry::new(d4.clone(), GroupConstruction),
        CatalogEntry::new(q8.clone(), GroupConstruction),
    ]);
    for g in [&s3, &d4, &q8] {
        let m = chein_double(g).expect("Chein double of a group");
        entries.push(CatalogEntry::new(m, CheinDouble));
    }
    entries
}

pub fn builtin_by_name(name: &str) -> Option<CatalogEntry> {
    builtin().into_iter().find(|e| e.name == name)
}

/// Resolves a built-in name or an enumerated name `L{n}-{index}`.
pub fn lookup(name: &str) -> Option<LoopTable> {
    if let Some(e) = builtin_by_name(name) {
        return Some(e.table);
    }
    let (n, idx) = name.strip_prefix('L')?.split_once('-')?;
    let (n, idx): (usize, usize) = (n.parse().ok()?, idx.parse().ok()?);
    enumerate_loops(n).ok()?.into_iter().nth(idx)
}

/// Enumerated loops of orders `1..=max_order` as catalog entries.
pub fn enumerated_entries(max_order: usize) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.extend(
            enumerate_loops(n)?
                .into_iter()
                .map(|t| CatalogEntry::new(t, Provenance::Enumerated)),
        );
    }
    Ok(out)
}
