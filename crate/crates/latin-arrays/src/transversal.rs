//! Exact transversal search: existence, counting, maximum partial
//! transversals, restricted searches, and the Woolbright predicate.
//!
//! All searches are plain backtracking over rows in ascending order with
//! used-column and used-symbol bitsets. Counting never short-circuits;
//! existence stops at the first witness.

use std::time::Instant;

use crate::grid::{Entry, GridArray, HOLE};
use crate::symset::SymSet;
use crate::Error;

/// A (partial) transversal: entries pairwise distinct in row, column, and
/// symbol, none on a hole.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Transversal {
    entries: Vec<Entry>,
}

impl Transversal {
    pub fn new(mut entries: Vec<Entry>) -> Self {
        entries.sort_by_key(|e| (e.row, e.col));
        Transversal { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Checks every invariant against the owning array: entries on filled
    /// cells with matching symbols, rows/columns/symbols pairwise distinct.
    pub fn validate(&self, a: &GridArray) -> bool {
        let mut rows = 0u32;
        let mut cols = 0u32;
        let mut syms = SymSet::EMPTY;
        for e in &self.entries {
            if e.row >= a.order() || e.col >= a.order() {
                return false;
            }
            if a.symbol_at(e.row, e.col) != Some(e.sym) {
                return false;
            }
            if rows >> e.row & 1 != 0 || cols >> e.col & 1 != 0 || syms.contains(e.sym) {
                return false;
            }
            rows |= 1 << e.row;
            cols |= 1 << e.col;
            syms.insert(e.sym);
        }
        true
    }

    /// Serializes as a list of `(row, col, symbol-label)` triples.
    pub fn to_labelled_json(&self, a: &GridArray) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| serde_json::json!([e.row, e.col, a.label(e.sym)]))
                .collect(),
        )
    }
}

/// Search statistics for one invocation.
#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub wall: std::time::Duration,
    pub witness: Option<Transversal>,
}

// ---------------------------------------------------------------------------
// Raw engine: operates on row-major cell slices with the HOLE sentinel.
// Shared by the public API and the catalogue hot loops.
// ---------------------------------------------------------------------------

pub(crate) fn exists_transversal_raw(cells: &[u16], n: usize) -> bool {
    dfs_exists(cells, n, 0, 0, SymSet::EMPTY)
}

fn dfs_exists(cells: &[u16], n: usize, row: usize, used_cols: u32, used_syms: SymSet) -> bool {
    if row == n {
        return true;
    }
    let base = row * n;
    for col in 0..n {
        if used_cols >> col & 1 != 0 {
            continue;
        }
        let s = cells[base + col];
        if s == HOLE || used_syms.contains(s) {
            continue;
        }
        let mut syms = used_syms;
        syms.insert(s);
        if dfs_exists(cells, n, row + 1, used_cols | 1 << col, syms) {
            return true;
        }
    }
    false
}

/// Existence of a transversal that passes through cell `(r0, c0)`, for
/// symbol ids below 64, tracking used symbols in a single machine word.
/// Used incrementally by the catalogue searches: after placing a new
/// entry, only transversals through that entry can be new. Those searches
/// sit in this check almost exclusively, and they only ever construct
/// arrays of order at most 8 (so symbol ids below 64).
pub(crate) fn exists_transversal_through_masked(
    cells: &[u16],
    n: usize,
    r0: usize,
    c0: usize,
) -> bool {
    let s0 = cells[r0 * n + c0];
    if s0 == HOLE {
        return false;
    }
    debug_assert!(cells.iter().all(|&s| s == HOLE || s < 64));
    dfs_exists_skip_masked(cells, n, 0, r0, 1 << c0, 1u64 << s0)
}

fn dfs_exists_skip_masked(
    cells: &[u16],
    n: usize,
    row: usize,
    skip_row: usize,
    used_cols: u32,
    used_syms: u64,
) -> bool {
    if row == n {
        return true;
    }
    if row == skip_row {
        return dfs_exists_skip_masked(cells, n, row + 1, skip_row, used_cols, used_syms);
    }
    let base = row * n;
    for col in 0..n {
        if used_cols >> col & 1 != 0 {
            continue;
        }
        let s = cells[base + col];
        if s == HOLE || used_syms >> s & 1 != 0 {
            continue;
        }
        if dfs_exists_skip_masked(
            cells,
            n,
            row + 1,
            skip_row,
            used_cols | 1 << col,
            used_syms | 1 << s,
        ) {
            return true;
        }
    }
    false
}

fn dfs_find(
    cells: &[u16],
    n: usize,
    row: usize,
    used_cols: u32,
    used_syms: SymSet,
    picked: &mut Vec<Entry>,
    stats: &mut SearchStats,
) -> bool {
    stats.nodes += 1;
    if row == n {
        return true;
    }
    let base = row * n;
    for col in 0..n {
        if used_cols >> col & 1 != 0 {
            continue;
        }
        let s = cells[base + col];
        if s == HOLE || used_syms.contains(s) {
            continue;
        }
        let mut syms = used_syms;
        syms.insert(s);
        picked.push(Entry { row, col, sym: s });
        if dfs_find(cells, n, row + 1, used_cols | 1 << col, syms, picked, stats) {
            return true;
        }
        picked.pop();
    }
    stats.prunes += 1;
    false
}

fn dfs_count(cells: &[u16], n: usize, row: usize, used_cols: u32, used_syms: SymSet) -> u64 {
    if row == n {
        return 1;
    }
    let base = row * n;
    let mut total = 0;
    for col in 0..n {
        if used_cols >> col & 1 != 0 {
            continue;
        }
        let s = cells[base + col];
        if s == HOLE || used_syms.contains(s) {
            continue;
        }
        let mut syms = used_syms;
        syms.insert(s);
        total += dfs_count(cells, n, row + 1, used_cols | 1 << col, syms);
    }
    total
}

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

/// Finds a transversal if one exists, with search statistics.
pub fn find_transversal_stats(a: &GridArray) -> (Option<Transversal>, SearchStats) {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut picked = Vec::with_capacity(a.order());
    let found = dfs_find(
        a.raw_cells(),
        a.order(),
        0,
        0,
        SymSet::EMPTY,
        &mut picked,
        &mut stats,
    );
    stats.wall = start.elapsed();
    let witness = found.then(|| Transversal::new(picked));
    stats.witness = witness.clone();
    (witness, stats)
}

/// Finds a transversal if one exists.
pub fn find_transversal(a: &GridArray) -> Option<Transversal> {
    find_transversal_stats(a).0
}

/// True iff the array has a full-length transversal.
pub fn has_transversal(a: &GridArray) -> bool {
    exists_transversal_raw(a.raw_cells(), a.order())
}

/// Exact number of full-length transversals (sequential).
pub fn count_transversals_seq(a: &GridArray) -> u64 {
    dfs_count(a.raw_cells(), a.order(), 0, 0, SymSet::EMPTY)
}

/// Exact number of full-length transversals. With the `parallel` feature
/// the count splits on first-row choices and sums; results are identical
/// to the sequential mode.
pub fn count_transversals(a: &GridArray) -> u64 {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let n = a.order();
        let cells = a.raw_cells();
        if n < 2 {
            return count_transversals_seq(a);
        }
        (0..n)
            .into_par_iter()
            .map(|col| {
                let s = cells[col];
                if s == HOLE {
                    return 0;
                }
                let mut syms = SymSet::EMPTY;
                syms.insert(s);
                dfs_count(cells, n, 1, 1 << col, syms)
            })
            .sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_transversals_seq(a)
    }
}

struct PartialSearch<'a> {
    cells: &'a [u16],
    n: usize,
    rows: Vec<usize>,
    col_mask: u32,
    best: usize,
    best_picked: Vec<Entry>,
}

impl PartialSearch<'_> {
    fn run(&mut self) {
        let mut picked = Vec::new();
        self.dfs(0, 0, SymSet::EMPTY, &mut picked);
    }

    fn dfs(&mut self, idx: usize, used_cols: u32, used_syms: SymSet, picked: &mut Vec<Entry>) {
        if picked.len() > self.best {
            self.best = picked.len();
            self.best_picked = picked.clone();
        }
        if idx == self.rows.len() {
            return;
        }
        // best-case bound: current length plus all remaining rows
        if picked.len() + (self.rows.len() - idx) <= self.best {
            return;
        }
        let row = self.rows[idx];
        let base = row * self.n;
        for col in 0..self.n {
            if self.col_mask >> col & 1 == 0 || used_cols >> col & 1 != 0 {
                continue;
            }
            let s = self.cells[base + col];
            if s == HOLE || used_syms.contains(s) {
                continue;
            }
            let mut syms = used_syms;
            syms.insert(s);
            picked.push(Entry { row, col, sym: s });
            self.dfs(idx + 1, used_cols | 1 << col, syms, picked);
            picked.pop();
        }
        // skip this row
        self.dfs(idx + 1, used_cols, used_syms, picked);
    }
}

/// Maximum length of a partial transversal, with a witness attaining it.
pub fn max_partial_transversal(a: &GridArray) -> (usize, Transversal) {
    let mut search = PartialSearch {
        cells: a.raw_cells(),
        n: a.order(),
        rows: (0..a.order()).collect(),
        col_mask: !0,
        best: 0,
        best_picked: Vec::new(),
    };
    search.run();
    (search.best, Transversal::new(search.best_picked))
}

/// Maximum partial transversal using only cells in `rows x cols`.
pub fn max_partial_within(a: &GridArray, rows: &[usize], cols: &[usize]) -> Result<usize, Error> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = a.order();
    for &i in rows.iter().chain(cols.iter()) {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, order: n });
        }
    }
    let mut row_list: Vec<usize> = rows.to_vec();
    row_list.sort_unstable();
    row_list.dedup();
    let mut col_mask = 0u32;
    for &c in cols {
        col_mask |= 1 << c;
    }
    let mut search = PartialSearch {
        cells: a.raw_cells(),
        n,
        rows: row_list,
        col_mask,
        best: 0,
        best_picked: Vec::new(),
    };
    search.run();
    Ok(search.best)
}

/// A length `n-1` transversal avoiding row `i` and column `j`, if any.
pub fn near_transversal_avoiding(a: &GridArray, i: usize, j: usize) -> Option<Transversal> {
    let n = a.order();
    if i >= n || j >= n {
        return None;
    }
    let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
    let col_mask: u32 = !(1u32 << j);
    let mut picked = Vec::new();
    fn dfs(
        cells: &[u16],
        n: usize,
        rows: &[usize],
        idx: usize,
        col_mask: u32,
        used_cols: u32,
        used_syms: SymSet,
        picked: &mut Vec<Entry>,
    ) -> bool {
        if idx == rows.len() {
            return true;
        }
        let row = rows[idx];
        let base = row * n;
        for col in 0..n {
            if col_mask >> col & 1 == 0 || used_cols >> col & 1 != 0 {
                continue;
            }
            let s = cells[base + col];
            if s == HOLE || used_syms.contains(s) {
                continue;
            }
            let mut syms = used_syms;
            syms.insert(s);
            picked.push(Entry { row, col, sym: s });
            if dfs(cells, n, rows, idx + 1, col_mask, used_cols | 1 << col, syms, picked) {
                return true;
            }
            picked.pop();
        }
        false
    }
    dfs(
        a.raw_cells(),
        n,
        &rows,
        0,
        col_mask,
        0,
        SymSet::EMPTY,
        &mut picked,
    )
    .then(|| Transversal::new(picked))
}

/// Checks the implication `(n-t)^2 > t  =>  max partial transversal >= t+1`
/// on a concrete Latin array. A `false` return would be a counterexample
/// to Woolbright's theorem (i.e. a bug).
pub fn woolbright_predicate(a: &GridArray, t: usize) -> Result<bool, Error> {
    if !a.is_latin() {
        return Err(Error::NotLatin);
    }
    let n = a.order();
    if t >= n {
        return Err(Error::ParamOutOfRange {
            name: "t",
            value: t as i64,
        });
    }
    if (n - t) * (n - t) > t {
        Ok(max_partial_transversal(a).0 >= t + 1)
    } else {
        Ok(true) // hypothesis fails, implication vacuous
    }
}
