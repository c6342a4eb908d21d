//! Direct orderly generation of transversal-free partial Latin arrays.
//!
//! Arrays are built row by row in canonical labeling (symbols numbered by
//! first occurrence, holes sorting last). After each completed row the
//! rectangle built so far must be its own canonical form; since every
//! prefix of a canonical array is canonical, pruning non-canonical
//! rectangles visits each trisotopy class exactly once. Transposition only
//! enters the group at the final, square level.
//!
//! A partial transversal of full length must take one cell in every row,
//! so transversal-freeness can only be enforced while the last row is
//! being filled: each placed symbol is checked for a full-length partial
//! transversal through it, which catches every such transversal at the
//! moment its final cell appears.

use crate::catalogue::store::{CatalogueRecord, CatalogueStore};
use crate::grid::HOLE;
use crate::transversal::exists_transversal_through_masked;
use crate::trisotopy::{is_canonical_rect, CanonicalKey};
use crate::Error;

/// Hole budget for [`enumerate_partial_catalogue`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Maximum holes in any single row or column.
    pub max_holes_per_line: usize,
    /// Optional cap on holes in the whole array. `None` leaves only the
    /// per-line limit; `Some` marks the resulting store incomplete unless
    /// the cap is at least `order * max_holes_per_line`.
    pub max_total_holes: Option<usize>,
    /// Optional cap on distinct symbols. Capping removes exactly the
    /// classes with more symbols, so per-cell class counts at or below the
    /// cap stay exact; the store is marked incomplete unless the cap is at
    /// least `order^2`.
    pub max_symbols: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            max_holes_per_line: 2,
            max_total_holes: None,
            max_symbols: None,
        }
    }
}

/// Enumerates one canonical representative of every trisotopy class of
/// transversal-free partial Latin arrays of order `m` within the hole
/// budget. Supported for `m <= 8` (the symbol masks are 64-bit).
pub fn enumerate_partial_catalogue(
    m: usize,
    opts: &EnumerateOptions,
) -> Result<CatalogueStore, Error> {
    if m == 0 || m > 8 {
        return Err(Error::OrderLimit { order: m });
    }
    // most holes any array within the per-line limit can have
    let hole_ceiling = m * opts.max_holes_per_line.min(m);
    let max_total = opts.max_total_holes.unwrap_or(usize::MAX).min(hole_ceiling);
    let mut max_syms = opts.max_symbols.unwrap_or(m * m).min(m * m);
    if max_total == 0 {
        // A hole-free Latin array of order m with at least the proven
        // guarantee threshold of symbols always has a transversal, so no
        // transversal-free final lies beyond it.
        max_syms = max_syms.min(crate::certificates::latin_threshold(m) - 1);
    }
    let mut store = CatalogueStore::new();
    store.complete = max_total >= hole_ceiling && opts.max_symbols.unwrap_or(m * m) >= m * m;

    // Split points: canonical prefixes of up to two rows, extended
    // independently (each canonical final is produced exactly once, so the
    // merge needs no cross-shard dedup).
    let split_rows = if m > 2 { 2 } else { 1 };
    let mut splitter = Gen::new(m, opts.max_holes_per_line, max_total, max_syms);
    let mut prefixes = Vec::new();
    splitter.collect_prefixes(0, split_rows, &mut prefixes);

    let run = |state: &GenState| {
        let mut g = Gen::new(m, opts.max_holes_per_line, max_total, max_syms);
        g.restore(state);
        g.extend_rows(split_rows);
        g.out
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Vec<CatalogueRecord>> = {
        use rayon::prelude::*;
        prefixes.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Vec<CatalogueRecord>> = prefixes.iter().map(run).collect();

    for batch in results {
        for r in batch {
            store.insert(r);
        }
    }
    Ok(store)
}

/// Snapshot of the generator after some complete rows.
#[derive(Clone)]
struct GenState {
    cells: Vec<u16>,
    col_syms: Vec<u64>,
    col_holes: Vec<usize>,
    total_holes: usize,
    next_sym: u16,
}

struct Gen {
    m: usize,
    max_hpl: usize,
    max_total: usize,
    max_syms: usize,
    cells: Vec<u16>, // row-major; unfilled trailing cells stay HOLE
    col_syms: Vec<u64>,
    col_holes: Vec<usize>,
    total_holes: usize,
    next_sym: u16,
    out: Vec<CatalogueRecord>,
}

impl Gen {
    fn new(m: usize, max_hpl: usize, max_total: usize, max_syms: usize) -> Gen {
        Gen {
            m,
            max_hpl,
            max_total,
            max_syms,
            cells: vec![HOLE; m * m],
            col_syms: vec![0; m],
            col_holes: vec![0; m],
            total_holes: 0,
            next_sym: 0,
            out: Vec::new(),
        }
    }

    fn snapshot(&self) -> GenState {
        GenState {
            cells: self.cells.clone(),
            col_syms: self.col_syms.clone(),
            col_holes: self.col_holes.clone(),
            total_holes: self.total_holes,
            next_sym: self.next_sym,
        }
    }

    fn restore(&mut self, s: &GenState) {
        self.cells.copy_from_slice(&s.cells);
        self.col_syms.copy_from_slice(&s.col_syms);
        self.col_holes.copy_from_slice(&s.col_holes);
        self.total_holes = s.total_holes;
        self.next_sym = s.next_sym;
    }

    /// Depth-first over rows `k..upto`, snapshotting each canonical
    /// rectangle of `upto` rows.
    fn collect_prefixes(&mut self, k: usize, upto: usize, out: &mut Vec<GenState>) {
        if k == upto {
            out.push(self.snapshot());
            return;
        }
        self.gen_row(k, 0, 0, 0, &mut |g| g.collect_prefixes(k + 1, upto, out));
    }

    /// Depth-first over rows `k..m`, recording finals.
    fn extend_rows(&mut self, k: usize) {
        if k == self.m {
            self.record();
            return;
        }
        self.gen_row(k, 0, 0, 0, &mut |g| g.extend_rows(k + 1));
    }

    fn record(&mut self) {
        let key = CanonicalKey::from_canonical_cells(self.m, self.cells.clone());
        self.out.push(CatalogueRecord::new(&key, true, "enumerate"));
    }

    /// Fills row `k` left to right, then applies the canonicity filter and
    /// hands complete rows to `next`.
    fn gen_row(
        &mut self,
        k: usize,
        c: usize,
        row_syms: u64,
        row_holes: usize,
        next: &mut dyn FnMut(&mut Gen),
    ) {
        let m = self.m;
        if c == m {
            let with_transpose = k + 1 == m;
            if is_canonical_rect(&self.cells[..(k + 1) * m], k + 1, m, with_transpose) {
                next(self);
            }
            return;
        }
        let idx = k * m + c;

        // holes sort after symbols, so try symbols first to reach small
        // encodings early
        for s in 0..=self.next_sym {
            if s as usize >= self.max_syms {
                break;
            }
            let bit = 1u64 << s;
            if row_syms & bit != 0 || self.col_syms[c] & bit != 0 {
                continue;
            }
            self.cells[idx] = s;
            self.col_syms[c] |= bit;
            let fresh = s == self.next_sym;
            if fresh {
                self.next_sym += 1;
            }
            // transversal-freeness: only the last row can complete a
            // full-length partial transversal
            if k + 1 < m || !exists_transversal_through_masked(&self.cells, m, k, c) {
                self.gen_row(k, c + 1, row_syms | bit, row_holes, next);
            }
            if fresh {
                self.next_sym -= 1;
            }
            self.col_syms[c] &= !bit;
            self.cells[idx] = HOLE;
        }

        if row_holes < self.max_hpl
            && self.col_holes[c] < self.max_hpl
            && self.total_holes < self.max_total
        {
            self.col_holes[c] += 1;
            self.total_holes += 1;
            self.gen_row(k, c + 1, row_syms, row_holes + 1, next);
            self.total_holes -= 1;
            self.col_holes[c] -= 1;
        }
    }
}
