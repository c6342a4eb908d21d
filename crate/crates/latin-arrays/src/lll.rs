//! Bad-event model over uniformly random permutations, row/column clique
//! cover, the Clique Local Lemma condition, and a seeded randomized
//! transversal finder.
//!
//! For a Latin array `L` of order `n`, think of a uniformly random
//! permutation sigma as picking the cells `(i, sigma(i))`. A bad event is a
//! pair of picked cells holding the same symbol; each has probability
//! `1/(n(n-1))`. Events sharing a row or column form cliques, one per line,
//! and every event lies in exactly four of those cliques.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Entry, GridArray};
use crate::sample::shuffle;
use crate::symset::SymSet;
use crate::transversal::Transversal;
use crate::Error;

/// Events are cell pairs `(i, j, i', j')` with `i < i'` and equal symbols.
#[derive(Clone, Debug)]
pub struct BadEventModel {
    pub n: usize,
    pub events: Vec<(usize, usize, usize, usize)>,
}

impl BadEventModel {
    /// Probability of one bad event, as a `(num, den)` rational.
    pub fn event_prob(&self) -> (u64, u64) {
        (1, (self.n * (self.n - 1)) as u64)
    }

    /// Indices of the (at most 4) cliques containing an event, numbered
    /// rows `0..n` then columns `n..2n`.
    pub fn cliques_of(&self, event: (usize, usize, usize, usize)) -> Vec<usize> {
        let (i, j, i2, j2) = event;
        let mut out = vec![i, i2, self.n + j, self.n + j2];
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Size of the clique for one line (rows `0..n`, then columns).
    /// Computed via the D-set: cells off the line sharing a symbol with a
    /// cell on the line. The full event graph is never materialized.
    pub fn clique_size(&self, a: &GridArray, line: usize) -> usize {
        let n = self.n;
        let is_row = line < n;
        let idx = if is_row { line } else { line - n };
        let line_syms: SymSet = (0..n)
            .filter_map(|t| {
                if is_row {
                    a.symbol_at(idx, t)
                } else {
                    a.symbol_at(t, idx)
                }
            })
            .collect();
        let mut size = 0;
        for r in 0..n {
            for c in 0..n {
                let on_line = if is_row { r == idx } else { c == idx };
                if on_line {
                    continue;
                }
                if let Some(s) = a.symbol_at(r, c) {
                    if line_syms.contains(s) {
                        size += 1;
                    }
                }
            }
        }
        size
    }
}

/// Builds the bad-event model. The input must be Latin.
pub fn build_event_model(a: &GridArray) -> Result<BadEventModel, Error> {
    if !a.is_latin() {
        return Err(Error::NotLatin);
    }
    let n = a.order();
    let mut by_symbol: Vec<Vec<(usize, usize)>> = vec![Vec::new(); a.num_symbols()];
    for e in a.entries() {
        by_symbol[e.sym as usize].push((e.row, e.col));
    }
    let mut events = Vec::new();
    for cells in &by_symbol {
        for (u, &(i, j)) in cells.iter().enumerate() {
            for &(i2, j2) in &cells[u + 1..] {
                // Latin: equal symbols are always in distinct rows and columns
                debug_assert!(i != i2 && j != j2);
                events.push((i, j, i2, j2));
            }
        }
    }
    Ok(BadEventModel { n, events })
}

/// Outcome of the Clique Local Lemma condition check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LllReport {
    pub kappa: usize,
    pub mu: usize,
    /// `x = 1/(4 kappa)` as a rational string; this is the exact maximizer
    /// of `x (1 - kappa x)^3` on `(0, 1/kappa)`, so checking at this single
    /// point is already the optimal check.
    pub x: String,
    /// `P(B) <= x (1 - kappa x)^3`, i.e. `256 kappa <= 27 n (n-1)`.
    pub guaranteed: bool,
}

/// Evaluates the clique condition `1/(n(n-1)) <= 27/(256 kappa)` with
/// `kappa` the largest clique size. A `true` verdict guarantees a
/// transversal exists.
pub fn lll_condition(a: &GridArray) -> Result<LllReport, Error> {
    let n = a.order();
    if n < 2 {
        return Err(Error::ParamOutOfRange { name: "order", value: n as i64 });
    }
    let model = build_event_model(a)?;
    let kappa = (0..2 * n)
        .map(|line| model.clique_size(a, line))
        .max()
        .unwrap_or(0);
    if kappa == 0 {
        // no bad events at all: every permutation is a transversal
        return Ok(LllReport {
            kappa: 0,
            mu: 4,
            x: "n/a".to_string(),
            guaranteed: true,
        });
    }
    let guaranteed = 256 * (kappa as u64) <= 27 * (n as u64) * (n as u64 - 1);
    Ok(LllReport {
        kappa,
        mu: 4,
        x: format!("1/{}", 4 * kappa),
        guaranteed,
    })
}

/// Statistics of one randomized search run.
#[derive(Clone, Debug)]
pub struct RandomSearchStats {
    pub seed: u64,
    pub restarts: usize,
    pub proposals: u64,
    pub accepted: u64,
}

/// Seeded randomized transversal search: start from a uniformly random
/// permutation and greedily apply pairwise swaps that reduce the number of
/// violated bad events (hole picks count as violations); restart on
/// stagnation. Identical seeds give identical traces.
pub fn random_transversal_search(
    a: &GridArray,
    seed: u64,
    max_restarts: usize,
) -> (Option<Transversal>, RandomSearchStats) {
    let n = a.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = RandomSearchStats {
        seed,
        restarts: 0,
        proposals: 0,
        accepted: 0,
    };
    let energy = |sigma: &[usize]| -> u32 {
        let mut e = 0u32;
        for i in 0..n {
            match a.symbol_at(i, sigma[i]) {
                None => e += 1,
                Some(s) => {
                    for i2 in i + 1..n {
                        if a.symbol_at(i2, sigma[i2]) == Some(s) {
                            e += 1;
                        }
                    }
                }
            }
        }
        e
    };
    for restart in 0..=max_restarts {
        stats.restarts = restart;
        let mut sigma: Vec<usize> = (0..n).collect();
        shuffle(&mut sigma, &mut rng);
        let mut e = energy(&sigma);
        let stall_limit = (2 * n * n).max(8) as u64;
        let mut stalled = 0u64;
        while e > 0 && stalled < stall_limit {
            let i = rng.gen_range(0..n);
            let k = rng.gen_range(0..n);
            stats.proposals += 1;
            if i == k {
                stalled += 1;
                continue;
            }
            sigma.swap(i, k);
            let e2 = energy(&sigma);
            if e2 < e {
                e = e2;
                stats.accepted += 1;
                stalled = 0;
            } else {
                sigma.swap(i, k);
                stalled += 1;
            }
        }
        if e == 0 {
            let entries = (0..n)
                .map(|i| Entry {
                    row: i,
                    col: sigma[i],
                    sym: a.symbol_at(i, sigma[i]).expect("zero energy has no holes"),
                })
                .collect();
            return (Some(Transversal::new(entries)), stats);
        }
    }
    (None, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_array;
    use crate::grid::GridArray;

    #[test]
    fn all_distinct_symbols_no_events() {
        let a = GridArray::from_rows(&[&[0, 1], &[2, 3]]).unwrap();
        let model = build_event_model(&a).unwrap();
        assert!(model.events.is_empty());
        assert!(lll_condition(&a).unwrap().guaranteed);
    }

    #[test]
    fn order_two_square_events() {
        let a = parse_array("a b\nb a").unwrap();
        let model = build_event_model(&a).unwrap();
        assert_eq!(model.events.len(), 2);
        for &e in &model.events {
            assert_eq!(model.cliques_of(e).len(), 4);
        }
        // kappa = n(n-1) = 2 for a Latin square; condition must fail
        let report = lll_condition(&a).unwrap();
        assert_eq!(report.kappa, 2);
        assert!(!report.guaranteed);
    }

    #[test]
    fn event_count_matches_pair_formula() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        let model = build_event_model(&a).unwrap();
        let counts = a.symbol_counts();
        let expected: usize = counts.iter().map(|&c| c * (c - 1) / 2).sum();
        assert_eq!(model.events.len(), expected);
    }

    #[test]
    fn non_latin_rejected() {
        let a = parse_array("a a\nb b").unwrap();
        assert!(build_event_model(&a).is_err());
    }

    #[test]
    fn random_search_finds_witness_on_distinct_array() {
        let a = GridArray::from_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]).unwrap();
        let (t, _) = random_transversal_search(&a, 123, 0);
        assert!(t.unwrap().validate(&a));
    }

    #[test]
    fn random_search_exhausts_when_no_transversal() {
        let a = parse_array("a b\nb a").unwrap();
        let (t, stats) = random_transversal_search(&a, 5, 3);
        assert!(t.is_none());
        assert_eq!(stats.restarts, 3);
    }

    #[test]
    fn identical_seed_identical_trace() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        let (t1, s1) = random_transversal_search(&a, 77, 10);
        let (t2, s2) = random_transversal_search(&a, 77, 10);
        assert_eq!(t1, t2);
        assert_eq!(s1.proposals, s2.proposals);
        assert_eq!(s1.restarts, s2.restarts);
    }
}
