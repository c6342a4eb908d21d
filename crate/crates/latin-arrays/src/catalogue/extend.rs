//! Extension of an order-(n-2) catalogue to the order-n transversal-free
//! catalogue.
//!
//! Every transversal-free Latin array of order n >= 3 has, in some
//! arrangement, entries (0,0,x) and (1,1,y) with distinct column and
//! symbol; deleting the first two rows and columns and re-holing x and y
//! leaves a transversal-free partial array of order n-2 with at most two
//! holes per line. Reversing that: take each catalogued seed, fill its
//! holes with two fresh symbols x/y in every row/column-consistent way,
//! plant x at (0,0) and y at (1,1) of an order-n frame, and search all
//! Latin fills of the remaining 4n-6 border cells. Each placed entry is
//! checked for a transversal through it, so every surviving completion is
//! transversal-free; canonical dedup across seeds yields the class list.

use std::collections::HashSet;
use std::path::PathBuf;

use crate::catalogue::store::{CatalogueRecord, CatalogueStore};
use crate::grid::{GridArray, HOLE};
use crate::transversal::exists_transversal_through_masked;
use crate::trisotopy::canonical_form;
use crate::Error;

/// Controls for [`extend_catalogue`] runs.
#[derive(Clone, Debug, Default)]
pub struct ExtendOptions {
    /// Process only seeds with `index % count == index_mod` given
    /// `(index_mod, count)`. The result is then marked incomplete.
    pub shard: Option<(usize, usize)>,
    /// Directory for per-seed result files; seeds with an existing file
    /// are loaded instead of recomputed, making long runs resumable.
    pub checkpoint: Option<PathBuf>,
}

/// Builds the order-`n` transversal-free catalogue from a complete
/// order-`n-2` seed catalogue. An incomplete input (or sharded run) is
/// not an error, but the output is flagged incomplete and its counts are
/// only lower bounds.
pub fn extend_catalogue(
    seeds: &CatalogueStore,
    n: usize,
    opts: &ExtendOptions,
) -> Result<CatalogueStore, Error> {
    if n < 3 || n > 8 {
        return Err(Error::OrderLimit { order: n });
    }
    let m = n - 2;
    for r in seeds.iter() {
        if r.order != m {
            return Err(Error::MalformedRecord(format!(
                "seed of order {} in an order-{} extension",
                r.order, m
            )));
        }
    }
    if let Some(dir) = &opts.checkpoint {
        std::fs::create_dir_all(dir)?;
    }

    let seed_records = seeds.sorted_records();
    let indexed: Vec<(usize, &CatalogueRecord)> = seed_records
        .into_iter()
        .enumerate()
        .filter(|(i, _)| match opts.shard {
            Some((index_mod, count)) => count != 0 && i % count == index_mod,
            None => true,
        })
        .collect();

    let run = |&(_i, record): &(usize, &CatalogueRecord)| -> Result<CatalogueStore, Error> {
        if let Some(dir) = &opts.checkpoint {
            // name by key, not position, so shards and resumed runs agree
            let path = dir.join(format!("seed-{}.jsonl", file_stem(&record.key)));
            if path.exists() {
                return CatalogueStore::load(&path);
            }
            let store = extend_seed(record, n)?;
            store.save(&path)?;
            Ok(store)
        } else {
            extend_seed(record, n)
        }
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Result<CatalogueStore, Error>> = {
        use rayon::prelude::*;
        indexed.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<CatalogueStore, Error>> = indexed.iter().map(run).collect();

    let mut out = CatalogueStore::new();
    out.complete = seeds.complete && opts.shard.is_none();
    for r in results {
        let complete = out.complete;
        out.merge(r?);
        out.complete = complete; // per-seed stores carry no completeness info
    }
    Ok(out)
}

/// Canonical keys as filesystem-safe stems, e.g. `n2-0-1-1-0`.
fn file_stem(key: &str) -> String {
    key.chars()
        .map(|c| match c {
            '=' | ';' | ' ' => '-',
            '.' => 'h',
            c => c,
        })
        .collect()
}

/// All order-n transversal-free classes reachable from one seed.
fn extend_seed(record: &CatalogueRecord, n: usize) -> Result<CatalogueStore, Error> {
    let seed = record.to_array()?;
    let m = n - 2;
    let s = seed.num_symbols() as u16;
    let x = s;
    let y = s + 1;

    let mut ext = Extender {
        n,
        cells: vec![HOLE; n * n],
        row_syms: vec![0; n],
        col_syms: vec![0; n],
        next_fresh: s + 2,
        border: border_cells(n),
        seen: HashSet::new(),
        out: CatalogueStore::new(),
        prov: format!("extend:{}", record.key),
    };

    // inner block at offset (2,2); x and y never collide with it until
    // holes are filled below
    for i in 0..m {
        for j in 0..m {
            if let Some(sym) = seed.symbol_at(i, j) {
                ext.place(i + 2, j + 2, sym);
            }
        }
    }
    ext.place(0, 0, x);
    ext.place(1, 1, y);

    // every hole came from an occurrence of x or y in the original array
    let holes: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| seed.symbol_at(i, j).is_none())
        .map(|(i, j)| (i + 2, j + 2))
        .collect();
    ext.fill_holes(&holes, 0, x, y);
    Ok(ext.out)
}

/// Unfilled positions of the two-row/two-column frame. A transversal of
/// the bordered array touches the frame in both of the first two rows and
/// both of the first two columns, so the order interleaves row and column
/// cells: the incremental transversal check can then start pruning after
/// a handful of placements instead of only once both rows are complete.
fn border_cells(n: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::with_capacity(4 * n - 6);
    cells.push((0, 1));
    cells.push((1, 0));
    for k in 2..n {
        cells.push((k, 0));
        cells.push((k, 1));
        cells.push((0, k));
        cells.push((1, k));
    }
    cells
}

struct Extender {
    n: usize,
    cells: Vec<u16>,
    row_syms: Vec<u64>,
    col_syms: Vec<u64>,
    next_fresh: u16,
    border: Vec<(usize, usize)>,
    /// exact-duplicate filter ahead of the canonical dedup
    seen: HashSet<Vec<u16>>,
    out: CatalogueStore,
    prov: String,
}

impl Extender {
    fn place(&mut self, r: usize, c: usize, sym: u16) {
        self.cells[r * self.n + c] = sym;
        self.row_syms[r] |= 1 << sym;
        self.col_syms[c] |= 1 << sym;
    }

    fn unplace(&mut self, r: usize, c: usize, sym: u16) {
        self.cells[r * self.n + c] = HOLE;
        self.row_syms[r] &= !(1 << sym);
        self.col_syms[c] &= !(1 << sym);
    }

    /// Assigns x or y to every seed hole, Latin-consistently.
    fn fill_holes(&mut self, holes: &[(usize, usize)], idx: usize, x: u16, y: u16) {
        if idx == holes.len() {
            self.fill_border(0);
            return;
        }
        let (r, c) = holes[idx];
        // Swapping rows 0/1, columns 0/1, and the labels x/y maps the
        // extensions of one hole assignment onto those of its x<->y
        // mirror, so fixing the first hole to x loses no classes.
        let choices: &[u16] = if idx == 0 { &[x] } else { &[x, y] };
        for &sym in choices {
            let bit = 1u64 << sym;
            if self.row_syms[r] & bit != 0 || self.col_syms[c] & bit != 0 {
                continue;
            }
            self.place(r, c, sym);
            // a transversal through a filled hole cannot exist yet (rows 0
            // and 1 each have a single filled cell and unfilled cells are
            // unselectable), so no pruning check is needed here
            self.fill_holes(holes, idx + 1, x, y);
            self.unplace(r, c, sym);
        }
    }

    fn fill_border(&mut self, idx: usize) {
        if idx == self.border.len() {
            self.record();
            return;
        }
        let (r, c) = self.border[idx];
        let n = self.n;
        // fresh symbols are interchangeable: allow existing ids plus the
        // single next unused id, numbering fresh symbols by first use
        for sym in 0..=self.next_fresh {
            if sym as usize >= n * n {
                break;
            }
            let bit = 1u64 << sym;
            if self.row_syms[r] & bit != 0 || self.col_syms[c] & bit != 0 {
                continue;
            }
            self.place(r, c, sym);
            let fresh = sym == self.next_fresh;
            if fresh {
                self.next_fresh += 1;
            }
            if !exists_transversal_through_masked(&self.cells, n, r, c) {
                self.fill_border(idx + 1);
            }
            if fresh {
                self.next_fresh -= 1;
            }
            self.unplace(r, c, sym);
        }
    }

    fn record(&mut self) {
        if !self.seen.insert(self.cells.clone()) {
            return;
        }
        let a = GridArray::from_raw(self.n, self.cells.clone(), None)
            .expect("search invariants keep the array well-formed");
        debug_assert!(a.is_latin());
        let key = canonical_form(&a).expect("order is within the canonical limit");
        self.out
            .insert(CatalogueRecord::new(&key, true, &self.prov));
    }
}

// ---------------------------------------------------------------------------
// Latin square completion of a one-smaller array, used to study how the
// catalogued arrays sit inside Latin squares.
// ---------------------------------------------------------------------------

/// All completions of an order-n Latin array with at most n+1 symbols to
/// an order-(n+1) Latin square (exactly n+1 symbols) containing it as the
/// top-left subarray.
pub fn latin_square_completions(a: &GridArray) -> Result<Vec<GridArray>, Error> {
    if !a.is_latin() || a.num_holes() > 0 {
        return Err(Error::NotLatin);
    }
    let n = a.order();
    let big = n + 1;
    if a.num_symbols() > big {
        return Err(Error::ParamOutOfRange {
            name: "symbols",
            value: a.num_symbols() as i64,
        });
    }
    if big > 16 {
        return Err(Error::OrderLimit { order: big });
    }
    let mut cells = vec![HOLE; big * big];
    let mut row_syms = vec![0u64; big];
    let mut col_syms = vec![0u64; big];
    for i in 0..n {
        for j in 0..n {
            let sym = a.symbol_at(i, j).unwrap();
            cells[i * big + j] = sym;
            row_syms[i] |= 1 << sym;
            col_syms[j] |= 1 << sym;
        }
    }
    let mut todo = Vec::new();
    for i in 0..big {
        cells_push_missing(&mut todo, i, n, big);
    }
    let mut out = Vec::new();
    complete_dfs(
        &mut cells,
        &mut row_syms,
        &mut col_syms,
        &todo,
        0,
        big,
        &mut out,
    );
    Ok(out)
}

fn cells_push_missing(todo: &mut Vec<(usize, usize)>, i: usize, n: usize, big: usize) {
    if i < n {
        todo.push((i, n));
    } else {
        for j in 0..big {
            todo.push((i, j));
        }
    }
}

fn complete_dfs(
    cells: &mut [u16],
    row_syms: &mut [u64],
    col_syms: &mut [u64],
    todo: &[(usize, usize)],
    idx: usize,
    big: usize,
    out: &mut Vec<GridArray>,
) {
    if idx == todo.len() {
        out.push(
            GridArray::from_raw(big, cells.to_vec(), None)
                .expect("completion search keeps the square well-formed"),
        );
        return;
    }
    let (r, c) = todo[idx];
    for sym in 0..big as u16 {
        let bit = 1u64 << sym;
        if row_syms[r] & bit != 0 || col_syms[c] & bit != 0 {
            continue;
        }
        cells[r * big + c] = sym;
        row_syms[r] |= bit;
        col_syms[c] |= bit;
        complete_dfs(cells, row_syms, col_syms, todo, idx + 1, big, out);
        cells[r * big + c] = HOLE;
        row_syms[r] &= !bit;
        col_syms[c] &= !bit;
    }
}
