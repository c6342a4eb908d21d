//! Canonical forms and equivalence under the trisotopy group: row
//! permutations x column permutations x symbol renaming x transposition.
//!
//! The canonical form of an array is the lexicographically least row-major
//! encoding over all arrangements, where symbols are relabeled by first
//! occurrence for each arrangement and holes sort after every symbol.
//! Canonicalization is branch-and-bound with prefix pruning against the
//! best encoding found so far; a full unpruned enumeration would be
//! `2 (n!)^2` arrangements per array.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rand::Rng;

use crate::grid::{GridArray, HOLE, MAX_SYMBOLS};
use crate::Error;

/// Default hard limit for [`canonical_form`]; raise via
/// [`canonical_form_limited`] at your own risk.
pub const DEFAULT_ORDER_LIMIT: usize = 8;

const UNSET: u16 = u16::MAX;

/// Total-order representative of a trisotopy class. Two arrays are
/// trisotopic iff their keys are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    order: usize,
    cells: Vec<u16>, // canonical row-major encoding, HOLE for holes
}

impl CanonicalKey {
    /// Wraps cells already known to be a canonical encoding. Callers must
    /// guarantee canonicity; the catalogue generators construct arrays in
    /// canonical form directly.
    pub(crate) fn from_canonical_cells(order: usize, cells: Vec<u16>) -> CanonicalKey {
        CanonicalKey { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_symbols(&self) -> usize {
        self.cells
            .iter()
            .filter(|&&c| c != HOLE)
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn num_holes(&self) -> usize {
        self.cells.iter().filter(|&&c| c == HOLE).count()
    }

    /// The key itself is a valid array encoding.
    pub fn as_array(&self) -> GridArray {
        GridArray::from_raw(self.order, self.cells.clone(), None)
            .expect("canonical key encodes a valid array")
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.order)?;
        for (i, &c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if c == HOLE {
                write!(f, ".")?;
            } else {
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({self})")
    }
}

impl FromStr for CanonicalKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| Error::MalformedRecord(format!("bad key: {s}")))?;
        let (order_str, cells_str) = rest
            .split_once(';')
            .ok_or_else(|| Error::MalformedRecord(format!("bad key: {s}")))?;
        let order: usize = order_str
            .parse()
            .map_err(|_| Error::MalformedRecord(format!("bad order in key: {s}")))?;
        let mut cells = Vec::with_capacity(order * order);
        for tok in cells_str.split_whitespace() {
            if tok == "." {
                cells.push(HOLE);
            } else {
                let v: u16 = tok
                    .parse()
                    .map_err(|_| Error::MalformedRecord(format!("bad token in key: {s}")))?;
                cells.push(v);
            }
        }
        if cells.len() != order * order {
            return Err(Error::MalformedRecord(format!("bad cell count in key: {s}")));
        }
        // validate by constructing the array
        GridArray::from_raw(order, cells.clone(), None)?;
        Ok(CanonicalKey { order, cells })
    }
}

/// 64-bit trisotopy-invariant digest. Trisotopic arrays always collide;
/// unequal digests prove non-equivalence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fingerprint(pub u64);

// ---------------------------------------------------------------------------
// Canonical encoding engine over k x m rectangles.
//
// Output positions are filled row-major. Choosing the canonical arrangement
// interleaves with emission: the source row for output row 0 is chosen
// first, the column order is committed cell by cell while emitting row 0,
// and each later output row branches over the remaining source rows under
// the committed column order.
// ---------------------------------------------------------------------------

pub(crate) struct CanonSearch<'a> {
    cells: &'a [u16],
    k: usize,
    m: usize,
    row_used: u32,
    col_order: Vec<usize>,
    col_used: u32,
    map: Vec<u16>,
    next_id: u16,
    out: Vec<u16>,
    best: Vec<u16>,
    /// Test mode: `best` is a fixed target; finding any strictly smaller
    /// encoding aborts the search.
    test: bool,
    smaller_found: bool,
}

impl<'a> CanonSearch<'a> {
    fn new(cells: &'a [u16], k: usize, m: usize, best: Vec<u16>, test: bool) -> Self {
        CanonSearch {
            cells,
            k,
            m,
            row_used: 0,
            col_order: vec![0; m],
            col_used: 0,
            map: vec![UNSET; MAX_SYMBOLS],
            next_id: 0,
            out: Vec::with_capacity(k * m),
            best,
            test,
            smaller_found: false,
        }
    }

    fn run(&mut self) {
        self.pick_row(0);
    }

    fn pick_row(&mut self, i: usize) {
        if i == self.k {
            if !self.test {
                // out ties best on every position: by construction best has
                // been overwritten on each strict improvement
                self.best.copy_from_slice(&self.out);
            }
            return;
        }
        'rows: for r in 0..self.k {
            if self.row_used >> r & 1 != 0 {
                continue;
            }
            // Two source rows with identical raw content are interchangeable:
            // swapping them is a symmetry fixing every other choice. Only the
            // first of each duplicate group needs exploring; without this,
            // highly repetitive inputs defeat the prefix prune entirely.
            for prev in 0..r {
                if self.row_used >> prev & 1 == 0
                    && self.cells[prev * self.m..(prev + 1) * self.m]
                        == self.cells[r * self.m..(r + 1) * self.m]
                {
                    continue 'rows;
                }
            }
            self.row_used |= 1 << r;
            self.emit_cell(i, 0, r);
            self.row_used &= !(1 << r);
            if self.smaller_found {
                return;
            }
        }
    }

    fn emit_cell(&mut self, i: usize, j: usize, src_row: usize) {
        if j == self.m {
            self.pick_row(i + 1);
            return;
        }
        if i == 0 {
            // commit column order while emitting row 0
            'cols: for c in 0..self.m {
                if self.col_used >> c & 1 != 0 {
                    continue;
                }
                // Same duplicate-sibling skip as in pick_row, for columns.
                for prev in 0..c {
                    if self.col_used >> prev & 1 == 0
                        && (0..self.k)
                            .all(|i| self.cells[i * self.m + prev] == self.cells[i * self.m + c])
                    {
                        continue 'cols;
                    }
                }
                self.col_used |= 1 << c;
                self.col_order[j] = c;
                self.try_value(i, j, src_row, c);
                self.col_used &= !(1 << c);
                if self.smaller_found {
                    return;
                }
            }
        } else {
            let c = self.col_order[j];
            self.try_value(i, j, src_row, c);
        }
    }

    fn try_value(&mut self, i: usize, j: usize, src_row: usize, src_col: usize) {
        let old = self.cells[src_row * self.m + src_col];
        let (v, assigned) = if old == HOLE {
            (HOLE, false)
        } else if self.map[old as usize] != UNSET {
            (self.map[old as usize], false)
        } else {
            let id = self.next_id;
            self.map[old as usize] = id;
            self.next_id += 1;
            (id, true)
        };
        let pos = self.out.len();
        let target = self.best[pos];
        let keep = if v > target {
            false // prune
        } else if v < target {
            if self.test {
                self.smaller_found = true;
                false
            } else {
                self.best[pos] = v;
                for slot in self.best[pos + 1..].iter_mut() {
                    *slot = u16::MAX;
                }
                true
            }
        } else {
            true
        };
        if keep {
            self.out.push(v);
            self.emit_cell(i, j + 1, src_row);
            self.out.pop();
        }
        if assigned {
            self.map[old as usize] = UNSET;
            self.next_id -= 1;
        }
    }
}

fn transpose_raw(cells: &[u16], k: usize, m: usize) -> Vec<u16> {
    let mut out = vec![0u16; k * m];
    for i in 0..k {
        for j in 0..m {
            out[j * k + i] = cells[i * m + j];
        }
    }
    out
}

/// Minimal encoding of a `k x m` rectangle over row orders, column orders,
/// symbol relabeling, and (for squares, when requested) transposition.
pub(crate) fn canonical_rect(cells: &[u16], k: usize, m: usize, with_transpose: bool) -> Vec<u16> {
    let mut best = vec![u16::MAX; k * m];
    {
        let mut search = CanonSearch::new(cells, k, m, best, false);
        search.run();
        best = search.best;
    }
    if with_transpose && k == m {
        let t = transpose_raw(cells, k, m);
        let mut search = CanonSearch::new(&t, k, m, best, false);
        search.run();
        best = search.best;
    }
    best
}

/// True iff `cells` is its own canonical encoding. Cheaper than
/// [`canonical_rect`] on non-canonical inputs: aborts on the first
/// strictly smaller arrangement.
pub(crate) fn is_canonical_rect(cells: &[u16], k: usize, m: usize, with_transpose: bool) -> bool {
    {
        let mut search = CanonSearch::new(cells, k, m, cells.to_vec(), true);
        search.run();
        if search.smaller_found {
            return false;
        }
    }
    if with_transpose && k == m {
        let t = transpose_raw(cells, k, m);
        let mut search = CanonSearch::new(&t, k, m, cells.to_vec(), true);
        search.run();
        if search.smaller_found {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

/// Canonical form with the default order limit.
pub fn canonical_form(a: &GridArray) -> Result<CanonicalKey, Error> {
    canonical_form_limited(a, DEFAULT_ORDER_LIMIT)
}

/// Canonical form with a caller-chosen order limit.
pub fn canonical_form_limited(a: &GridArray, limit: usize) -> Result<CanonicalKey, Error> {
    let n = a.order();
    if n > limit {
        return Err(Error::OrderLimit { order: n });
    }
    Ok(CanonicalKey {
        order: n,
        cells: canonical_rect(a.raw_cells(), n, n, true),
    })
}

/// Equality of canonical keys.
pub fn are_trisotopic(a: &GridArray, b: &GridArray) -> Result<bool, Error> {
    if a.order() != b.order() {
        return Ok(false);
    }
    if a.num_symbols() != b.num_symbols() || a.num_holes() != b.num_holes() {
        return Ok(false);
    }
    if fingerprint(a) != fingerprint(b) {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Oracle: canonical form by exhaustive unpruned enumeration of all
/// `2 (n!)^2` arrangements. Orders above 4 are rejected.
pub fn brute_canonical(a: &GridArray) -> Result<CanonicalKey, Error> {
    let n = a.order();
    if n > 4 {
        return Err(Error::OrderLimit { order: n });
    }
    let perms = permutations(n);
    let mut best: Option<Vec<u16>> = None;
    for transposed in [false, true] {
        let cells = if transposed {
            transpose_raw(a.raw_cells(), n, n)
        } else {
            a.raw_cells().to_vec()
        };
        for rp in &perms {
            for cp in &perms {
                let mut map = vec![UNSET; MAX_SYMBOLS];
                let mut next = 0u16;
                let mut enc = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let old = cells[rp[i] * n + cp[j]];
                        if old == HOLE {
                            enc.push(HOLE);
                        } else {
                            if map[old as usize] == UNSET {
                                map[old as usize] = next;
                                next += 1;
                            }
                            enc.push(map[old as usize]);
                        }
                    }
                }
                if best.as_ref().is_none_or(|b| enc < *b) {
                    best = Some(enc);
                }
            }
        }
    }
    Ok(CanonicalKey {
        order: n,
        cells: best.unwrap(),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Trisotopy-invariant 64-bit digest from sorted per-line profiles, the
/// hole layout profile, and the global symbol frequency spectrum.
pub fn fingerprint(a: &GridArray) -> Fingerprint {
    let n = a.order();
    let counts = a.symbol_counts();
    let mut spectrum = counts.clone();
    spectrum.sort_unstable();

    // per-line profile: sorted global-occurrence counts of the line's
    // symbols plus the line's hole count
    let line_profile = |syms: Vec<u16>, holes: usize| -> Vec<usize> {
        let mut p: Vec<usize> = syms.iter().map(|&s| counts[s as usize]).collect();
        p.sort_unstable();
        p.push(usize::MAX - holes); // delimiter-safe hole marker
        p
    };
    let mut row_profiles = Vec::with_capacity(n);
    let mut col_profiles = Vec::with_capacity(n);
    for i in 0..n {
        let mut rsyms = Vec::new();
        let mut csyms = Vec::new();
        let mut rholes = 0;
        let mut choles = 0;
        for j in 0..n {
            match a.symbol_at(i, j) {
                Some(s) => rsyms.push(s),
                None => rholes += 1,
            }
            match a.symbol_at(j, i) {
                Some(s) => csyms.push(s),
                None => choles += 1,
            }
        }
        row_profiles.push(line_profile(rsyms, rholes));
        col_profiles.push(line_profile(csyms, choles));
    }
    row_profiles.sort();
    col_profiles.sort();

    fn hash_of<T: Hash>(v: &T) -> u64 {
        let mut h = DefaultHasher::new();
        v.hash(&mut h);
        h.finish()
    }
    let hr = hash_of(&row_profiles);
    let hc = hash_of(&col_profiles);
    // transpose swaps row and column profiles; combine symmetrically
    let mut h = DefaultHasher::new();
    (n, a.num_symbols(), a.num_holes(), &spectrum, hr ^ hc, hr.min(hc)).hash(&mut h);
    Fingerprint(h.finish())
}

/// An element of the trisotopy group.
#[derive(Clone, Debug)]
pub struct Trisotopy {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub sym_perm: Vec<u16>,
    pub transpose: bool,
}

/// Applies a group element: `result[i][j] = sym_perm[a[row_perm[i]][col_perm[j]]]`
/// (after optional transposition).
pub fn apply_trisotopy(a: &GridArray, g: &Trisotopy) -> GridArray {
    let src = if g.transpose { a.transpose() } else { a.clone() };
    let n = src.order();
    let mut cells = vec![HOLE; n * n];
    for i in 0..n {
        for j in 0..n {
            cells[i * n + j] = match src.symbol_at(g.row_perm[i], g.col_perm[j]) {
                Some(s) => g.sym_perm[s as usize],
                None => HOLE,
            };
        }
    }
    let mut labels = vec![String::new(); a.num_symbols()];
    for (old, &new) in g.sym_perm.iter().enumerate() {
        labels[new as usize] = a.label(old as u16).to_string();
    }
    GridArray::from_raw(n, cells, Some(labels)).expect("group action preserves validity")
}

/// Uniformly random group element for the array's order and alphabet.
pub fn random_trisotopy<R: Rng>(n: usize, num_symbols: usize, rng: &mut R) -> Trisotopy {
    let mut row_perm: Vec<usize> = (0..n).collect();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut sym_perm: Vec<u16> = (0..num_symbols as u16).collect();
    shuffle(&mut row_perm, rng);
    shuffle(&mut col_perm, rng);
    shuffle(&mut sym_perm, rng);
    Trisotopy {
        row_perm,
        col_perm,
        sym_perm,
        transpose: rng.gen_bool(0.5),
    }
}

fn shuffle<T, R: Rng>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

/// Applies a random group element.
pub fn scramble<R: Rng>(a: &GridArray, rng: &mut R) -> GridArray {
    let g = random_trisotopy(a.order(), a.num_symbols(), rng);
    apply_trisotopy(a, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_invariant_under_transpose_and_row_swap() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        let key = canonical_form(&a).unwrap();
        assert_eq!(key, canonical_form(&a.transpose()).unwrap());
        let swapped = parse_array("b c a\na b c\nc a b").unwrap();
        assert_eq!(key, canonical_form(&swapped).unwrap());
    }

    #[test]
    fn canonical_idempotent() {
        let a = parse_array("a b c\nb a .\nc . b").unwrap();
        let key = canonical_form(&a).unwrap();
        let again = canonical_form(&key.as_array()).unwrap();
        assert_eq!(key, again);
    }

    #[test]
    fn one_by_one_brute() {
        let a = parse_array("q").unwrap();
        assert_eq!(brute_canonical(&a).unwrap(), canonical_form(&a).unwrap());
    }

    #[test]
    fn brute_matches_fast_on_small_arrays() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = 3;
            let mut cells = Vec::with_capacity(n * n);
            let mut next = 0u16;
            for _ in 0..n * n {
                if rng.gen_bool(0.2) {
                    cells.push(HOLE);
                } else {
                    let s = rng.gen_range(0..=next.min(4));
                    if s == next {
                        next += 1;
                    }
                    cells.push(s);
                }
            }
            // make alphabet contiguous: renumber by first occurrence
            let mut map = vec![UNSET; MAX_SYMBOLS];
            let mut id = 0u16;
            for c in cells.iter_mut() {
                if *c != HOLE {
                    if map[*c as usize] == UNSET {
                        map[*c as usize] = id;
                        id += 1;
                    }
                    *c = map[*c as usize];
                }
            }
            let a = GridArray::from_raw(n, cells, None).unwrap();
            assert_eq!(
                brute_canonical(&a).unwrap(),
                canonical_form(&a).unwrap(),
                "mismatch for\n{a:?}"
            );
        }
    }

    #[test]
    fn scramble_preserves_key_and_fingerprint() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = parse_array("a b c d\nb c d a\nc d a b\nd a b c").unwrap();
        let key = canonical_form(&a).unwrap();
        let fp = fingerprint(&a);
        for _ in 0..50 {
            let b = scramble(&a, &mut rng);
            assert_eq!(fingerprint(&b), fp);
            assert_eq!(canonical_form(&b).unwrap(), key);
            assert!(are_trisotopic(&a, &b).unwrap());
        }
    }

    #[test]
    fn different_symbol_counts_not_trisotopic() {
        let a = parse_array("a b\nb a").unwrap();
        let b = parse_array("a b\nb c").unwrap();
        assert!(!are_trisotopic(&a, &b).unwrap());
    }

    #[test]
    fn key_string_round_trip() {
        let a = parse_array("a b c\nb a .\nc . b").unwrap();
        let key = canonical_form(&a).unwrap();
        let s = key.to_string();
        let back: CanonicalKey = s.parse().unwrap();
        assert_eq!(back, key);
        assert_eq!(key.num_holes(), 2);
    }

    #[test]
    fn order_limit_enforced() {
        let a = GridArray::from_raw(9, vec![0u16; 81], None).unwrap();
        assert!(canonical_form(&a).is_err());
        assert!(canonical_form_limited(&a, 9).is_ok());
    }

    #[test]
    fn is_canonical_matches_definition() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        let key = canonical_form(&a).unwrap();
        assert!(is_canonical_rect(&key.as_array().raw_cells().to_vec(), 3, 3, true));
    }
}
