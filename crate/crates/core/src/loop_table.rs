//! Finite loops stored as Cayley tables.
//!
//! The carrier of a loop of order `n` is `0..n` and element `0` is always the
//! neutral element. Every table is validated on construction: rows and
//! columns must be permutations (unique left and right division) and row 0 /
//! column 0 must be the identity permutation.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a loop, i.e. an index into its carrier.
pub type Element = usize;

/// The neutral element of every [`LoopTable`].
pub const IDENTITY: Element = 0;

pub struct LoopTable {
    order: usize,
    name: Option<String>,
    table: Vec<Element>,
    // ldiv[a * n + b] = a \ b, the x with a·x = b
    ldiv: Vec<Element>,
    // rdiv[a * n + b] = b / a, the y with y·a = b
    rdiv: Vec<Element>,
    // cyclic power sequence of each element, or None when ⟨x⟩ is not a cyclic group
    powers: Vec<OnceLock<Option<Vec<Element>>>>,
}

/// JSON form of a loop file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopFile {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub table: Vec<Vec<Element>>,
}

impl LoopTable {
    /// Builds a loop from its rows, validating the loop axioms.
    pub fn from_rows(rows: Vec<Vec<Element>>, name: Option<String>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::parse_at(
                None,
                None,
                "a loop needs at least one element",
            ));
        }
        let mut table = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::parse_at(
                    Some(r),
                    None,
                    format!("expected {order} entries, found {}", row.len()),
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::parse_at(
                        Some(r),
                        Some(c),
                        format!("entry {v} is not an element of a loop of order {order}"),
                    ));
                }
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(order, table, name)
    }

    /// Builds a loop from a product function on `0..order`.
    pub fn from_fn(
        order: usize,
        name: Option<String>,
        mut f: impl FnMut(Element, Element) -> Element,
    ) -> Result<Self> {
        let rows = (0..order)
            .map(|x| (0..order).map(|y| f(x, y)).collect())
            .collect();
        Self::from_rows(rows, name)
    }

    fn from_flat(order: usize, table: Vec<Element>, name: Option<String>) -> Result<Self> {
        let n = order;
        let mut ldiv = vec![usize::MAX; n * n];
        let mut rdiv = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let v = table[x * n + y];
                if ldiv[x * n + v] != usize::MAX {
                    return Err(Error::parse_at(
                        Some(x),
                        Some(y),
                        format!("row {x} repeats entry {v}"),
                    ));
                }
                ldiv[x * n + v] = y;
            }
        }
        for y in 0..n {
            for x in 0..n {
                let v = table[x * n + y];
                if rdiv[y * n + v] != usize::MAX {
                    return Err(Error::parse_at(
                        Some(x),
                        Some(y),
                        format!("column {y} repeats entry {v}"),
                    ));
                }
                rdiv[y * n + v] = x;
            }
        }
        for x in 0..n {
            if table[x] != x {
                return Err(Error::parse_at(
                    Some(0),
                    Some(x),
                    "row 0 must be the identity permutation (0 is the neutral element)",
                ));
            }
            if table[x * n] != x {
                return Err(Error::parse_at(
                    Some(x),
                    Some(0),
                    "column 0 must be the identity permutation (0 is the neutral element)",
                ));
            }
        }
        Ok(LoopTable {
            order,
            name,
            table,
            ldiv,
            rdiv,
            powers: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Display label: the name, or `order-n` for anonymous loops.
    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("order-{}", self.order))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    /// Row `x` of the table, i.e. the left translation by `x`.
    pub fn row(&self, x: Element) -> &[Element] {
        &self.table[x * self.order..(x + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.table.chunks(self.order)
    }

    /// `x·y` without bounds reporting. Panics on out-of-range input.
    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.table[x * self.order + y]
    }

    /// `a \ b`: the unique `x` with `a·x = b`.
    #[inline]
    pub fn ldiv(&self, a: Element, b: Element) -> Element {
        self.ldiv[a * self.order + b]
    }

    /// `b / a`: the unique `y` with `y·a = b`.
    #[inline]
    pub fn rdiv(&self, b: Element, a: Element) -> Element {
        self.rdiv[a * self.order + b]
    }

    pub fn check(&self, x: Element) -> Result<Element> {
        if x < self.order {
            Ok(x)
        } else {
            Err(Error::OutOfRange {
                element: x,
                order: self.order,
            })
        }
    }

    pub fn multiply(&self, x: Element, y: Element) -> Result<Element> {
        Ok(self.mul(self.check(x)?, self.check(y)?))
    }

    /// The unique `x` with `a·x = b`.
    pub fn left_divide(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.ldiv(self.check(a)?, self.check(b)?))
    }

    /// The unique `y` with `y·a = b`.
    pub fn right_divide(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.rdiv(self.check(b)?, self.check(a)?))
    }

    /// Two-sided inverse of `x`. Fails when the left and right inverses differ.
    pub fn inverse(&self, x: Element) -> Result<Element> {
        self.check(x)?;
        let right = self.ldiv(x, IDENTITY);
        let left = self.rdiv(IDENTITY, x);
        if left == right {
            Ok(right)
        } else {
            Err(Error::TwoSidedInverseAbsent {
                element: x,
                left,
                right,
            })
        }
    }

    /// Two-sided inverse, if there is one.
    pub fn try_inverse(&self, x: Element) -> Option<Element> {
        let right = self.ldiv(x, IDENTITY);
        (self.rdiv(IDENTITY, x) == right).then_some(right)
    }

    /// The powers `x⁰, x¹, …, x^(m-1)` of `x`, where `m` is its order.
    ///
    /// Computed once per element. Fails unless `⟨x⟩` is a cyclic group, i.e.
    /// unless `xⁱ·xʲ = xⁱ⁺ʲ` for every bracketing.
    pub fn cyclic_powers(&self, x: Element) -> Result<&[Element]> {
        self.check(x)?;
        self.powers[x]
            .get_or_init(|| self.compute_powers(x))
            .as_deref()
            .ok_or(Error::NotPowerAssociative { element: x })
    }

    fn compute_powers(&self, x: Element) -> Option<Vec<Element>> {
        // Left-bracketed powers; right translation by x is a permutation,
        // so the sequence returns to the identity.
        let mut seq = vec![IDENTITY];
        let mut p = self.mul(IDENTITY, x);
        while p != IDENTITY {
            seq.push(p);
            p = self.mul(p, x);
        }
        let m = seq.len();
        for i in 0..m {
            for j in 0..m {
                if self.mul(seq[i], seq[j]) != seq[(i + j) % m] {
                    return None;
                }
            }
        }
        Some(seq)
    }

    /// `xᵏ` for `k ≥ 0` and `(x⁻¹)^|k|` for `k < 0`.
    pub fn power(&self, x: Element, k: i64) -> Result<Element> {
        let seq = self.cyclic_powers(x)?;
        let m = seq.len() as i64;
        Ok(seq[k.rem_euclid(m) as usize])
    }

    pub fn element_order(&self, x: Element) -> Result<usize> {
        Ok(self.cyclic_powers(x)?.len())
    }

    /// Every element generates a cyclic group.
    pub fn is_power_associative(&self) -> bool {
        self.elements().all(|x| self.cyclic_powers(x).is_ok())
    }

    pub fn to_file(&self) -> LoopFile {
        LoopFile {
            order: self.order,
            name: self.name.clone(),
            table: self.rows().map(<[Element]>::to_vec).collect(),
        }
    }

    pub fn from_file(file: LoopFile) -> Result<Self> {
        if file.table.len() != file.order {
            return Err(Error::parse_at(
                None,
                None,
                format!(
                    "declared order {} but table has {} rows",
                    file.order,
                    file.table.len()
                ),
            ));
        }
        Self::from_rows(file.table, file.name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("loop file serializes")
    }
}

/// Parses a loop from the text format or its JSON equivalent.
///
/// Text format: a line `order n`, an optional line `name <label>`, then `n`
/// lines of `n` whitespace-separated elements. Blank lines and lines starting
/// with `#` are ignored.
pub fn parse_loop(text: &str) -> Result<LoopTable> {
    if text.trim_start().starts_with('{') {
        let file: LoopFile = serde_json::from_str(text)
            .map_err(|e| Error::parse_at(None, None, format!("invalid loop JSON: {e}")))?;
        return LoopTable::from_file(file);
    }

    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .peekable();

    let header = lines
        .next()
        .ok_or_else(|| Error::parse_at(None, None, "empty loop file"))?;
    let order = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["order", n] => n
            .parse::<usize>()
            .map_err(|_| Error::parse_at(None, None, format!("bad order `{n}`")))?,
        _ => {
            return Err(Error::parse_at(
                None,
                None,
                format!("expected `order n`, found `{header}`"),
            ))
        }
    };

    let mut name = None;
    if let Some(line) = lines.peek() {
        if let Some(rest) = line.strip_prefix("name") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let label = rest.trim();
                if label.is_empty() {
                    return Err(Error::parse_at(None, None, "empty name"));
                }
                name = Some(label.to_string());
                lines.next();
            }
        }
    }

    let mut rows = Vec::with_capacity(order);
    for (r, line) in lines.enumerate() {
        if r >= order {
            return Err(Error::parse_at(
                Some(r),
                None,
                format!("more than {order} rows"),
            ));
        }
        let row = line
            .split_whitespace()
            .enumerate()
            .map(|(c, tok)| {
                tok.parse::<Element>().map_err(|_| {
                    Error::parse_at(Some(r), Some(c), format!("`{tok}` is not an element"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != order {
        return Err(Error::parse_at(
            Some(rows.len()),
            None,
            format!("expected {order} rows, found {}", rows.len()),
        ));
    }
    LoopTable::from_rows(rows, name)
}

/// Renders a loop in the text format accepted by [`parse_loop`].
pub fn serialize_loop(q: &LoopTable) -> String {
    q.to_string()
}

impl fmt::Display for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.order)?;
        if let Some(name) = &self.name {
            writeln!(f, "name {name}")?;
        }
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoopTable")
            .field("order", &self.order)
            .field("name", &self.name)
            .field("table", &self.table)
            .finish()
    }
}

impl Clone for LoopTable {
    fn clone(&self) -> Self {
        LoopTable {
            order: self.order,
            name: self.name.clone(),
            table: self.table.clone(),
            ldiv: self.ldiv.clone(),
            rdiv: self.rdiv.clone(),
            powers: self.powers.clone(),
        }
    }
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.name == other.name && self.table == other.table
    }
}

impl Eq for LoopTable {}

impl LoopTable {
    /// Same order and same products, ignoring names.
    pub fn same_table(&self, other: &LoopTable) -> bool {
        self.order == other.order && self.table == other.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOT: &str = include_str!("../data/paper-dot.loop");
    const STAR: &str = include_str!("../data/paper-star.loop");

    #[test]
    fn worked_example_products() {
        let dot = parse_loop(DOT).unwrap();
        let star = parse_loop(STAR).unwrap();
        assert_eq!(dot.multiply(1, 3).unwrap(), 5);
        assert_eq!(star.multiply(3, 4).unwrap(), 1);
        for k in dot.elements() {
            assert_eq!(dot.mul(0, k), k);
        }
        assert!(matches!(
            dot.multiply(6, 0),
            Err(Error::OutOfRange {
                element: 6,
                order: 6
            })
        ));
    }

    #[test]
    fn divisions() {
        let dot = parse_loop(DOT).unwrap();
        let star = parse_loop(STAR).unwrap();
        assert_eq!(dot.left_divide(1, 0).unwrap(), 2);
        assert_eq!(star.left_divide(3, 2).unwrap(), 5);
        for b in dot.elements() {
            assert_eq!(dot.left_divide(0, b).unwrap(), b);
        }
        for q in [&dot, &star] {
            for x in q.elements() {
                for y in q.elements() {
                    assert_eq!(q.mul(x, q.ldiv(x, y)), y);
                    assert_eq!(q.mul(q.rdiv(y, x), x), y);
                }
            }
        }
        assert!(dot.right_divide(0, 9).is_err());
    }

    #[test]
    fn inverses_and_powers() {
        let dot = parse_loop(DOT).unwrap();
        let star = parse_loop(STAR).unwrap();
        assert_eq!(dot.inverse(1).unwrap(), 2);
        assert_eq!(dot.inverse(0).unwrap(), 0);
        assert_eq!(star.inverse(3).unwrap(), 3);
        assert_eq!(dot.power(4, 0).unwrap(), 0);
        assert_eq!(dot.power(1, 2).unwrap(), 2);
        assert_eq!(dot.power(1, 3).unwrap(), 0);
        assert_eq!(dot.power(3, -1).unwrap(), 3);
        assert_eq!(dot.power(1, -1).unwrap(), 2);
    }

    #[test]
    fn one_sided_inverse_is_rejected() {
        // Order-5 loop where 1·2 = 0 but 2·1 ≠ 0.
        let q = LoopTable::from_rows(
            vec![
                vec![0, 1, 2, 3, 4],
                vec![1, 2, 0, 4, 3],
                vec![2, 3, 4, 0, 1],
                vec![3, 4, 1, 2, 0],
                vec![4, 0, 3, 1, 2],
            ],
            None,
        )
        .unwrap();
        assert_eq!(q.ldiv(1, 0), 2);
        assert_ne!(q.rdiv(0, 1), 2);
        assert!(matches!(
            q.inverse(1),
            Err(Error::TwoSidedInverseAbsent { element: 1, .. })
        ));
    }

    #[test]
    fn non_power_associative_element() {
        // 1·1 = 2, (1·1)·1 = 0 but 1·(1·1) = 3.
        let q = LoopTable::from_rows(
            vec![
                vec![0, 1, 2, 3, 4],
                vec![1, 2, 3, 4, 0],
                vec![2, 0, 4, 1, 3],
                vec![3, 4, 0, 2, 1],
                vec![4, 3, 1, 0, 2],
            ],
            None,
        )
        .unwrap();
        assert!(matches!(
            q.power(1, 2),
            Err(Error::NotPowerAssociative { element: 1 })
        ));
        assert!(!q.is_power_associative());
    }

    #[test]
    fn parse_example_table() {
        let dot = parse_loop(DOT).unwrap();
        assert_eq!(dot.order(), 6);
        assert_eq!(dot.name(), Some("paper-dot"));
        assert_eq!(dot.row(1), &[1, 2, 0, 5, 3, 4]);
        assert_eq!(serialize_loop(&dot), DOT);
        assert_eq!(serialize_loop(&parse_loop(STAR).unwrap()), STAR);
    }

    #[test]
    fn trivial_loop() {
        let q = parse_loop("order 1\n0\n").unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(q.mul(0, 0), 0);
    }

    #[test]
    fn latin_violation_reports_row() {
        let text = "order 3\n0 1 2\n1 2 0\n2 2 1\n";
        match parse_loop(text) {
            Err(Error::Parse { row: Some(2), .. }) => {}
            other => panic!("expected row 2 parse error, got {other:?}"),
        }
    }

    #[test]
    fn column_violation_and_identity_placement() {
        let bad_col = "order 3\n0 1 2\n1 2 0\n2 1 0\n";
        assert!(matches!(
            parse_loop(bad_col),
            Err(Error::Parse { col: Some(_), .. })
        ));
        // A Latin square whose neutral element is 1, not 0.
        let shifted = "order 2\n1 0\n0 1\n";
        assert!(matches!(parse_loop(shifted), Err(Error::Parse { .. })));
        assert!(parse_loop("order 2\n0 1\n").is_err());
        assert!(parse_loop("order 2\n0 1\n1 0\n0 1\n").is_err());
        assert!(parse_loop("order x\n").is_err());
        assert!(parse_loop("").is_err());
    }

    #[test]
    fn json_round_trip() {
        let dot = parse_loop(DOT).unwrap();
        let json = dot.to_json();
        assert_eq!(parse_loop(&json).unwrap(), dot);
        let bad = r#"{"order": 2, "table": [[0, 1], [1, 1]]}"#;
        assert!(parse_loop(bad).is_err());
    }
}
