//! Square arrays of symbols with optional holes, and the elementary
//! structural quantities derived from them.

use std::fmt;

use crate::symset::SymSet;
use crate::Error;

/// Maximum supported order. Word-sized bitmasks rely on this.
pub const MAX_ORDER: usize = 16;
/// Maximum alphabet size.
pub const MAX_SYMBOLS: usize = 256;

/// Internal sentinel for a hole; sorts after every valid symbol id.
pub(crate) const HOLE: u16 = u16::MAX;

/// Content of one cell: a symbol id or a hole.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Cell {
    Sym(u16),
    Hole,
}

impl Cell {
    #[inline]
    pub fn symbol(self) -> Option<u16> {
        match self {
            Cell::Sym(s) => Some(s),
            Cell::Hole => None,
        }
    }

    #[inline]
    pub fn is_hole(self) -> bool {
        matches!(self, Cell::Hole)
    }

    #[inline]
    pub(crate) fn raw(self) -> u16 {
        match self {
            Cell::Sym(s) => s,
            Cell::Hole => HOLE,
        }
    }
}

/// An entry `(row, col, symbol)` of an array. Never references a hole.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub sym: u16,
}

/// A square array of symbols, possibly with holes.
///
/// Symbols are dense ids `0..s`; every id occurs at least once. Display
/// labels are kept in a side table. Values are immutable after
/// construction and all operations are pure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridArray {
    n: usize,
    cells: Vec<u16>, // row-major, HOLE for holes
    labels: Vec<String>,
    num_symbols: usize,
    num_holes: usize,
}

impl GridArray {
    /// Builds an array from cells in row-major order. Symbol ids must
    /// already be dense (every id in `0..max+1` used at least once).
    pub fn new(n: usize, cells: Vec<Cell>, labels: Option<Vec<String>>) -> Result<Self, Error> {
        let raw: Vec<u16> = cells.iter().map(|c| c.raw()).collect();
        Self::from_raw(n, raw, labels)
    }

    pub(crate) fn from_raw(
        n: usize,
        cells: Vec<u16>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyArray);
        }
        if n > MAX_ORDER {
            return Err(Error::OrderLimit { order: n });
        }
        if cells.len() != n * n {
            return Err(Error::BadCellCount {
                expected: n * n,
                got: cells.len(),
            });
        }
        let mut seen = vec![false; MAX_SYMBOLS];
        let mut max_sym: Option<u16> = None;
        let mut num_holes = 0usize;
        for &c in &cells {
            if c == HOLE {
                num_holes += 1;
            } else {
                if c as usize >= MAX_SYMBOLS {
                    return Err(Error::AlphabetLimit { id: c });
                }
                seen[c as usize] = true;
                max_sym = Some(max_sym.map_or(c, |m| m.max(c)));
            }
        }
        let num_symbols = match max_sym {
            None => 0,
            Some(m) => {
                if seen[..=m as usize].iter().any(|&s| !s) {
                    return Err(Error::NonContiguousAlphabet);
                }
                m as usize + 1
            }
        };
        let labels = match labels {
            Some(l) => {
                if l.len() != num_symbols {
                    return Err(Error::BadLabelCount {
                        expected: num_symbols,
                        got: l.len(),
                    });
                }
                l
            }
            None => default_labels(num_symbols),
        };
        Ok(GridArray {
            n,
            cells,
            labels,
            num_symbols,
            num_holes,
        })
    }

    /// Convenience constructor from integer rows (no holes).
    pub fn from_rows(rows: &[&[u16]]) -> Result<Self, Error> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::RaggedRows);
            }
            cells.extend_from_slice(row);
        }
        Self::from_raw(n, cells, None)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cell(&self, row: usize, col: usize) -> Cell {
        match self.cells[row * self.n + col] {
            HOLE => Cell::Hole,
            s => Cell::Sym(s),
        }
    }

    #[inline]
    pub fn symbol_at(&self, row: usize, col: usize) -> Option<u16> {
        self.cell(row, col).symbol()
    }

    #[inline]
    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    #[inline]
    pub fn num_holes(&self) -> usize {
        self.num_holes
    }

    #[inline]
    pub fn is_partial(&self) -> bool {
        self.num_holes > 0
    }

    /// Number of filled cells.
    pub fn num_entries(&self) -> usize {
        self.n * self.n - self.num_holes
    }

    pub fn label(&self, sym: u16) -> &str {
        &self.labels[sym as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn raw_cells(&self) -> &[u16] {
        &self.cells
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        let n = self.n;
        self.cells.iter().enumerate().filter_map(move |(i, &c)| {
            (c != HOLE).then_some(Entry {
                row: i / n,
                col: i % n,
                sym: c,
            })
        })
    }

    /// True iff no symbol repeats within any row (holes ignored).
    pub fn is_row_latin(&self) -> bool {
        for i in 0..self.n {
            let mut seen = SymSet::EMPTY;
            for j in 0..self.n {
                if let Some(s) = self.symbol_at(i, j) {
                    if seen.contains(s) {
                        return false;
                    }
                    seen.insert(s);
                }
            }
        }
        true
    }

    /// True iff the array and its transpose are both row-Latin.
    pub fn is_latin(&self) -> bool {
        self.is_row_latin() && self.transpose().is_row_latin()
    }

    pub fn transpose(&self) -> GridArray {
        let n = self.n;
        let mut cells = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[j * n + i] = self.cells[i * n + j];
            }
        }
        GridArray {
            n,
            cells,
            labels: self.labels.clone(),
            num_symbols: self.num_symbols,
            num_holes: self.num_holes,
        }
    }

    /// Set of symbols occurring in row `i`.
    pub fn row_symbols(&self, i: usize) -> Result<SymSet, Error> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, order: self.n });
        }
        Ok((0..self.n).filter_map(|j| self.symbol_at(i, j)).collect())
    }

    /// Set of symbols occurring in column `j`.
    pub fn col_symbols(&self, j: usize) -> Result<SymSet, Error> {
        if j >= self.n {
            return Err(Error::IndexOutOfRange { index: j, order: self.n });
        }
        Ok((0..self.n).filter_map(|i| self.symbol_at(i, j)).collect())
    }

    /// Per-symbol occurrence counts.
    pub fn symbol_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_symbols];
        for &c in &self.cells {
            if c != HOLE {
                counts[c as usize] += 1;
            }
        }
        counts
    }

    /// Deletes row `i` and column `j`; the surviving alphabet is
    /// re-densified preserving relative id order.
    pub fn delete_row_col(&self, i: usize, j: usize) -> Result<GridArray, Error> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                order: self.n,
            });
        }
        if self.n == 1 {
            return Err(Error::EmptyArray);
        }
        let m = self.n - 1;
        let mut cells = Vec::with_capacity(m * m);
        for r in (0..self.n).filter(|&r| r != i) {
            for c in (0..self.n).filter(|&c| c != j) {
                cells.push(self.cells[r * self.n + c]);
            }
        }
        let (cells, survivors) = redensify(&cells);
        let labels = survivors
            .iter()
            .map(|&old| self.labels[old as usize].clone())
            .collect();
        GridArray::from_raw(m, cells, Some(labels))
    }

    /// Symbols that appear in the array but not in `A(i|j)`.
    pub fn psi(&self, i: usize, j: usize) -> Result<SymSet, Error> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                order: self.n,
            });
        }
        let mut survives = SymSet::EMPTY;
        for r in (0..self.n).filter(|&r| r != i) {
            for c in (0..self.n).filter(|&c| c != j) {
                if let Some(s) = self.symbol_at(r, c) {
                    survives.insert(s);
                }
            }
        }
        let all: SymSet = (0..self.num_symbols as u16).collect();
        Ok(all.difference(&survives))
    }

    /// Embeds a Latin array in the top-left corner of an order `n+k`
    /// array whose border cells all carry fresh, pairwise-distinct
    /// symbols. The result is Latin.
    pub fn embed_fresh(&self, k: usize) -> Result<GridArray, Error> {
        if !self.is_latin() {
            return Err(Error::NotLatin);
        }
        let n = self.n;
        let m = n + k;
        if m > MAX_ORDER {
            return Err(Error::OrderLimit { order: m });
        }
        if self.num_symbols + 2 * n * k + k * k > MAX_SYMBOLS {
            return Err(Error::AlphabetLimit {
                id: (self.num_symbols + 2 * n * k + k * k) as u16,
            });
        }
        let mut cells = vec![HOLE; m * m];
        for i in 0..n {
            for j in 0..n {
                cells[i * m + j] = self.cells[i * n + j];
            }
        }
        let mut next = self.num_symbols as u16;
        for i in 0..m {
            for j in 0..m {
                if i >= n || j >= n {
                    cells[i * m + j] = next;
                    next += 1;
                }
            }
        }
        let mut labels = self.labels.clone();
        for id in self.num_symbols as u16..next {
            labels.push(format!("s{id}"));
        }
        GridArray::from_raw(m, cells, Some(labels))
    }
}

fn default_labels(num_symbols: usize) -> Vec<String> {
    (0..num_symbols)
        .map(|i| {
            if num_symbols <= 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("s{i}")
            }
        })
        .collect()
}

/// Renumbers symbols densely, preserving relative order of surviving ids.
/// Returns the new cells and the surviving old ids in order.
fn redensify(cells: &[u16]) -> (Vec<u16>, Vec<u16>) {
    let mut present = SymSet::EMPTY;
    for &c in cells {
        if c != HOLE {
            present.insert(c);
        }
    }
    let survivors: Vec<u16> = present.iter().collect();
    let mut map = vec![HOLE; MAX_SYMBOLS];
    for (new, &old) in survivors.iter().enumerate() {
        map[old as usize] = new as u16;
    }
    let cells = cells
        .iter()
        .map(|&c| if c == HOLE { HOLE } else { map[c as usize] })
        .collect();
    (cells, survivors)
}

/// Occurrence counts together with the singleton/clone partition.
#[derive(Clone, Debug)]
pub struct SymbolClasses {
    pub counts: Vec<usize>,
    pub singletons: SymSet,
    pub clones: SymSet,
}

/// Splits the alphabet into singletons (count one) and clones.
pub fn classify_symbols(a: &GridArray) -> SymbolClasses {
    let counts = a.symbol_counts();
    let mut singletons = SymSet::EMPTY;
    let mut clones = SymSet::EMPTY;
    for (s, &c) in counts.iter().enumerate() {
        if c == 1 {
            singletons.insert(s as u16);
        } else {
            clones.insert(s as u16);
        }
    }
    SymbolClasses {
        counts,
        singletons,
        clones,
    }
}

/// Parses the text grid format: whitespace-separated tokens, one line per
/// row, `.` for a hole, `#` starting a comment line. Symbol ids are
/// assigned by first occurrence in row-major order.
pub fn parse_array(text: &str) -> Result<GridArray, Error> {
    let mut rows: Vec<Vec<&str>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rows.push(line.split_whitespace().collect());
    }
    if rows.is_empty() {
        return Err(Error::EmptyArray);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::RaggedRows);
    }
    let mut labels: Vec<String> = Vec::new();
    let mut cells = Vec::with_capacity(n * n);
    for row in &rows {
        for &tok in row {
            if tok == "." {
                cells.push(HOLE);
            } else {
                let id = match labels.iter().position(|l| l == tok) {
                    Some(i) => i,
                    None => {
                        labels.push(tok.to_string());
                        labels.len() - 1
                    }
                };
                if id >= MAX_SYMBOLS {
                    return Err(Error::AlphabetLimit { id: id as u16 });
                }
                cells.push(id as u16);
            }
        }
    }
    GridArray::from_raw(n, cells, Some(labels))
}

/// Renders with single-space separation and newline-terminated rows.
pub fn render_array(a: &GridArray) -> String {
    let mut out = String::new();
    for i in 0..a.order() {
        for j in 0..a.order() {
            if j > 0 {
                out.push(' ');
            }
            match a.cell(i, j) {
                Cell::Hole => out.push('.'),
                Cell::Sym(s) => out.push_str(a.label(s)),
            }
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for GridArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_array(self))
    }
}

impl fmt::Debug for GridArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridArray(n={})\n{}", self.n, render_array(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_smallest_latin_square() {
        let a = parse_array("a b\nb a").unwrap();
        assert_eq!(a.order(), 2);
        assert_eq!(a.num_symbols(), 2);
        assert!(a.is_latin());
        assert!(!a.is_partial());
    }

    #[test]
    fn parse_holes_and_comments() {
        let a = parse_array("# a comment\na .\n. a\n").unwrap();
        assert!(a.is_partial());
        assert_eq!(a.num_holes(), 2);
        assert_eq!(a.num_symbols(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_array(""), Err(Error::EmptyArray)));
        assert!(matches!(parse_array("a b\nb"), Err(Error::RaggedRows)));
        assert!(matches!(parse_array("# only comments\n"), Err(Error::EmptyArray)));
    }

    #[test]
    fn render_round_trip() {
        let text = "a b c\nb c a\nc . b\n";
        let a = parse_array(text).unwrap();
        assert_eq!(render_array(&a), text);
        let b = parse_array(&render_array(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn row_latin_allows_column_repeats() {
        let a = parse_array("a b\na b").unwrap();
        assert!(a.is_row_latin());
        assert!(!a.is_latin());
        let bad = parse_array("a a\nb b").unwrap();
        assert!(!bad.is_row_latin());
    }

    #[test]
    fn one_by_one_is_latin() {
        let a = parse_array("z").unwrap();
        assert!(a.is_latin());
    }

    #[test]
    fn classify_counts_sum_to_filled_cells() {
        let a = parse_array("a b\nb a").unwrap();
        let cls = classify_symbols(&a);
        assert_eq!(cls.counts.iter().sum::<usize>(), a.num_entries());
        assert!(cls.singletons.is_empty());
        assert_eq!(cls.clones.len(), 2);
    }

    #[test]
    fn all_distinct_symbols_are_singletons() {
        let a = GridArray::from_rows(&[&[0, 1], &[2, 3]]).unwrap();
        let cls = classify_symbols(&a);
        assert_eq!(cls.singletons.len(), 4);
    }

    #[test]
    fn line_symbol_sets() {
        let a = parse_array("a b\na b").unwrap();
        assert_eq!(a.row_symbols(0).unwrap().len(), 2);
        assert_eq!(a.col_symbols(0).unwrap().len(), 1);
        assert!(a.row_symbols(2).is_err());
    }

    #[test]
    fn delete_row_col_redensifies() {
        let a = parse_array("a b\nb a").unwrap();
        let d = a.delete_row_col(0, 0).unwrap();
        assert_eq!(d.order(), 1);
        assert_eq!(d.num_symbols(), 1);
        assert_eq!(d.label(0), "a");
        assert!(a.delete_row_col(0, 0).unwrap().delete_row_col(0, 0).is_err());
    }

    #[test]
    fn psi_identity_with_deletion() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = a.delete_row_col(i, j).unwrap();
                assert_eq!(
                    a.psi(i, j).unwrap().len(),
                    a.num_symbols() - d.num_symbols()
                );
            }
        }
        // clones survive deletion in a Latin square
        assert!(a.psi(0, 0).unwrap().is_empty());
    }

    #[test]
    fn psi_all_distinct() {
        let a = GridArray::from_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]).unwrap();
        assert_eq!(a.psi(1, 1).unwrap().len(), 5); // 2n-1
    }

    #[test]
    fn embed_fresh_counts() {
        let a = parse_array("a b\nb a").unwrap();
        assert_eq!(a.embed_fresh(0).unwrap(), a);
        let m = a.embed_fresh(1).unwrap();
        assert_eq!(m.order(), 3);
        assert_eq!(m.num_symbols(), 7); // 2 + 2nk + k^2 = 2 + 5
        assert!(m.is_latin());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.cell(i, j), a.cell(i, j));
            }
        }
    }

    #[test]
    fn non_contiguous_alphabet_rejected() {
        assert!(matches!(
            GridArray::from_rows(&[&[0, 2], &[2, 0]]),
            Err(Error::NonContiguousAlphabet)
        ));
    }
}
