//! Random array generators for property sweeps. All generators are
//! deterministic for a fixed RNG state.

use rand::Rng;

use crate::grid::{GridArray, HOLE, MAX_ORDER};
use crate::symset::SymSet;
use crate::Error;

/// Uniform-ish random Latin square of order `n` (exactly `n` symbols),
/// built by row-wise backtracking with shuffled candidate order.
pub fn random_latin_square<R: Rng>(n: usize, rng: &mut R) -> Result<GridArray, Error> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OrderLimit { order: n });
    }
    loop {
        if let Some(cells) = try_fill_square(n, rng) {
            return GridArray::from_raw(n, cells, None);
        }
    }
}

fn try_fill_square<R: Rng>(n: usize, rng: &mut R) -> Option<Vec<u16>> {
    let mut cells = vec![HOLE; n * n];
    let mut col_used = vec![SymSet::EMPTY; n];
    for row in 0..n {
        if !fill_row(&mut cells, &mut col_used, n, row, 0, SymSet::EMPTY, rng) {
            return None; // restart the whole square
        }
    }
    Some(cells)
}

fn fill_row<R: Rng>(
    cells: &mut [u16],
    col_used: &mut [SymSet],
    n: usize,
    row: usize,
    col: usize,
    row_used: SymSet,
    rng: &mut R,
) -> bool {
    if col == n {
        return true;
    }
    let mut candidates: Vec<u16> = (0..n as u16)
        .filter(|&s| !row_used.contains(s) && !col_used[col].contains(s))
        .collect();
    shuffle(&mut candidates, rng);
    for s in candidates {
        cells[row * n + col] = s;
        col_used[col].insert(s);
        let mut ru = row_used;
        ru.insert(s);
        if fill_row(cells, col_used, n, row, col + 1, ru, rng) {
            return true;
        }
        col_used[col].remove(s);
        cells[row * n + col] = HOLE;
    }
    false
}

/// Random Latin array of order `n` with exactly `s` distinct symbols:
/// a random Latin square with `s - n` randomly chosen cells overwritten
/// by fresh pairwise-distinct symbols (retried if an original symbol
/// gets wiped out entirely).
pub fn random_latin_array<R: Rng>(n: usize, s: usize, rng: &mut R) -> Result<GridArray, Error> {
    if s < n || s > n * n {
        return Err(Error::ParamOutOfRange {
            name: "symbols",
            value: s as i64,
        });
    }
    loop {
        let square = random_latin_square(n, rng)?;
        let mut cells = square.raw_cells().to_vec();
        let mut positions: Vec<usize> = (0..n * n).collect();
        shuffle(&mut positions, rng);
        positions.truncate(s - n);
        positions.sort_unstable(); // fresh ids in row-major order
        for (extra, &p) in positions.iter().enumerate() {
            cells[p] = (n + extra) as u16;
        }
        // the replacement may erase an original symbol; retry if so
        let mut present = SymSet::EMPTY;
        for &c in &cells {
            present.insert(c);
        }
        if present.len() == s {
            if let Ok(a) = GridArray::from_raw(n, cells, None) {
                debug_assert!(a.is_latin());
                return Ok(a);
            }
        }
    }
}

/// Random row-Latin array of order `n` with exactly `s` distinct symbols.
/// Column repeats are allowed. Every symbol is first seeded into a random
/// row, then rows are topped up and shuffled.
pub fn random_row_latin_array<R: Rng>(n: usize, s: usize, rng: &mut R) -> Result<GridArray, Error> {
    if s < n || s > n * n {
        return Err(Error::ParamOutOfRange {
            name: "symbols",
            value: s as i64,
        });
    }
    'outer: loop {
        let mut rows: Vec<Vec<u16>> = vec![Vec::new(); n];
        let mut order: Vec<u16> = (0..s as u16).collect();
        shuffle(&mut order, rng);
        for sym in order {
            let mut open: Vec<usize> = (0..n).filter(|&r| rows[r].len() < n).collect();
            shuffle(&mut open, rng);
            match open.first() {
                Some(&r) => rows[r].push(sym),
                None => continue 'outer,
            }
        }
        for row in rows.iter_mut() {
            while row.len() < n {
                let sym = rng.gen_range(0..s as u16);
                if !row.contains(&sym) {
                    row.push(sym);
                }
            }
            shuffle(row, rng);
        }
        let cells: Vec<u16> = rows.into_iter().flatten().collect();
        // renumber by first occurrence so ids stay dense
        let mut map = vec![u16::MAX; s];
        let mut next = 0u16;
        let cells: Vec<u16> = cells
            .into_iter()
            .map(|c| {
                if map[c as usize] == u16::MAX {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            })
            .collect();
        let a = GridArray::from_raw(n, cells, None)?;
        debug_assert!(a.is_row_latin());
        return Ok(a);
    }
}

pub(crate) fn shuffle<T, R: Rng>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn latin_square_is_latin() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=7 {
            let a = random_latin_square(n, &mut rng).unwrap();
            assert!(a.is_latin());
            assert_eq!(a.num_symbols(), n);
        }
    }

    #[test]
    fn latin_array_symbol_count_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &(n, s) in &[(4, 4), (4, 9), (4, 16), (6, 22), (5, 25)] {
            let a = random_latin_array(n, s, &mut rng).unwrap();
            assert!(a.is_latin());
            assert_eq!(a.num_symbols(), s);
        }
        assert!(random_latin_array(4, 3, &mut rng).is_err());
        assert!(random_latin_array(4, 17, &mut rng).is_err());
    }

    #[test]
    fn row_latin_array_symbol_count_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, s) in &[(4, 4), (4, 12), (5, 18), (6, 25)] {
            let a = random_row_latin_array(n, s, &mut rng).unwrap();
            assert!(a.is_row_latin());
            assert_eq!(a.num_symbols(), s);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_latin_array(5, 11, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = random_latin_array(5, 11, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
