//! Randomized property checks for the structural invariants the rest of
//! the crate relies on.

use latin_arrays::sample::{random_latin_array, random_latin_square, random_row_latin_array};
use latin_arrays::transversal::{count_transversals, find_transversal, max_partial_transversal};
use latin_arrays::trisotopy::scramble;
use latin_arrays::{parse_array, render_array, GridArray};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn arb_array() -> impl Strategy<Value = GridArray> {
    (1usize..=5, any::<u64>(), 0usize..3).prop_map(|(n, seed, kind)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = n + (seed as usize % (n * n - n + 1));
        match kind {
            0 => random_latin_square(n, &mut rng).unwrap(),
            1 => random_latin_array(n, s, &mut rng).unwrap(),
            _ => random_row_latin_array(n, s, &mut rng).unwrap(),
        }
    })
}

proptest! {
    #[test]
    fn render_parse_round_trip(a in arb_array()) {
        let text = render_array(&a);
        let b = parse_array(&text).unwrap();
        prop_assert_eq!(a.order(), b.order());
        for i in 0..a.order() {
            for j in 0..a.order() {
                prop_assert_eq!(
                    a.symbol_at(i, j).map(|s| a.label(s).to_string()),
                    b.symbol_at(i, j).map(|s| b.label(s).to_string())
                );
            }
        }
    }

    #[test]
    fn psi_contains_every_symbol_unique_to_the_deleted_lines(a in arb_array()) {
        let n = a.order();
        if n == 1 {
            // deleting the only line leaves nothing: psi is everything
            let psi = a.psi(0, 0).unwrap();
            for s in 0..a.num_symbols() as u16 {
                prop_assert!(psi.contains(s));
            }
            return Ok(());
        }
        for i in 0..n {
            for j in 0..n {
                let psi = a.psi(i, j).unwrap();
                let minor = a.delete_row_col(i, j).unwrap();
                // psi is exactly the set of symbols of A missing from A(i|j)
                for s in 0..a.num_symbols() as u16 {
                    let survives = (0..minor.order() * minor.order()).any(|p| {
                        minor.symbol_at(p / minor.order(), p % minor.order())
                            .map(|t| minor.label(t) == a.label(s))
                            .unwrap_or(false)
                    });
                    prop_assert_eq!(psi.contains(s), !survives);
                }
            }
        }
    }

    #[test]
    fn transversal_count_is_a_trisotopy_invariant(a in arb_array(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let b = scramble(&a, &mut rng);
        prop_assert_eq!(count_transversals(&a), count_transversals(&b));
        prop_assert_eq!(
            max_partial_transversal(&a).0,
            max_partial_transversal(&b).0
        );
    }

    #[test]
    fn found_transversals_validate(a in arb_array()) {
        if let Some(t) = find_transversal(&a) {
            prop_assert!(t.validate(&a));
            prop_assert_eq!(t.len(), a.order());
        } else {
            prop_assert_eq!(count_transversals(&a), 0);
        }
    }

    #[test]
    fn embedding_keeps_the_original_in_view(
        n in 1usize..=4, k in 1usize..=2, seed in any::<u64>()
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_latin_square(n, &mut rng).unwrap();
        let big = a.embed_fresh(k).unwrap();
        prop_assert!(big.is_latin());
        prop_assert_eq!(big.order(), n + k);
        prop_assert_eq!(big.num_symbols(), a.num_symbols() + 2 * n * k + k * k);
        // border symbols are pairwise distinct, so a transversal of the
        // embedding uses at least n - k cells of the original array
        if let Some(t) = find_transversal(&big) {
            let inside = t
                .entries()
                .iter()
                .filter(|e| e.row < n && e.col < n)
                .count();
            prop_assert!(inside + k >= n, "only {inside} cells inside");
        }
    }

    #[test]
    fn max_partial_never_exceeds_order_and_is_monotone_under_embedding(
        n in 1usize..=4, seed in any::<u64>()
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = random_latin_square(n, &mut rng).unwrap();
        let (len, t) = max_partial_transversal(&a);
        prop_assert!(len <= n);
        prop_assert!(t.validate(&a));
        let big = a.embed_fresh(1).unwrap();
        let (big_len, _) = max_partial_transversal(&big);
        prop_assert!(big_len >= len, "embedding shrank the maximum");
    }
}
