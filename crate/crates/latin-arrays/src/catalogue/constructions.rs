//! Explicit representatives of the small transversal-free trisotopy
//! classes: the two order-4 and two order-5 classes, and the nineteen
//! order-6 classes with seven symbols. The latter are all small edits of
//! three base arrays, here called `l1`, `l_prime`, `l10`, and
//! `l_double_prime`.

use crate::grid::{parse_array, GridArray};

/// Representatives of the two transversal-free order-4 classes: the
/// cyclic group table and a 5-symbol array.
pub fn order4_representatives() -> [GridArray; 2] {
    [
        must_parse(
            "a b c d\n\
             b c d a\n\
             c d a b\n\
             d a b c\n",
        ),
        must_parse(
            "a b c d\n\
             b c a e\n\
             c a d b\n\
             e d b a\n",
        ),
    ]
}

/// Representatives of the two transversal-free order-5 classes, which
/// differ only in their (0,0) entry.
pub fn order5_representatives() -> [GridArray; 2] {
    [
        must_parse(
            "a b c d e\n\
             b c a e f\n\
             c a b f d\n\
             e d f c a\n\
             d f e a b\n",
        ),
        must_parse(
            "f b c d e\n\
             b c a e f\n\
             c a b f d\n\
             e d f c a\n\
             d f e a b\n",
        ),
    ]
}

const L1: &str = "a b c d e f\n\
                  b c a f d e\n\
                  c a b e f d\n\
                  d e f g b c\n\
                  f d e b g a\n\
                  e f d c a g\n";

const L_PRIME: &str = "a b c d e f\n\
                       c f b e d a\n\
                       b c e f a d\n\
                       d e f a b c\n\
                       e d a c f b\n\
                       f a d b c e\n";

const L10: &str = "a b c d e f\n\
                   b c g a f e\n\
                   c f d g a b\n\
                   d a f e g c\n\
                   e g a f c d\n\
                   g e b c d a\n";

const L_DOUBLE_PRIME: &str = "a b c d e f\n\
                              b c a e f d\n\
                              c a b f d e\n\
                              d e f a c b\n\
                              e f d c b a\n\
                              f d e b a c\n";

/// First of the three base arrays for the order-6 family.
pub fn l1() -> GridArray {
    must_parse(L1)
}

/// Base array from which `l2`..`l9` are derived by cell edits.
pub fn l_prime() -> GridArray {
    must_parse(L_PRIME)
}

/// Base array for `l11` and `l12`.
pub fn l10() -> GridArray {
    must_parse(L10)
}

/// The 6-symbol Latin square behind `l13`..`l19` and the Delta
/// certificate; its three 3x3 symbol blocks are the certificate's `S1`/
/// `S2` partition.
pub fn l_double_prime() -> GridArray {
    must_parse(L_DOUBLE_PRIME)
}

/// Positions (row, col) of symbol `d` in [`l_double_prime`], one per line.
pub const D_POSITIONS: [(usize, usize); 6] = [(0, 3), (1, 5), (2, 4), (3, 0), (4, 2), (5, 1)];

/// [`l_double_prime`] with the `d` entries selected by `mask` (bit `i` =
/// row `i`'s occurrence) replaced by a new symbol `g`. All 64 variants
/// are transversal-free; up to trisotopy they form 5 classes plus the
/// base square.
pub fn l_double_prime_d_replacement(mask: u8) -> GridArray {
    let mut chars = char_grid(L_DOUBLE_PRIME);
    for (row, &(r, c)) in D_POSITIONS.iter().enumerate() {
        if mask >> row & 1 != 0 {
            debug_assert_eq!(chars[r][c], 'd');
            chars[r][c] = 'g';
        }
    }
    from_char_grid(&chars)
}

/// Builds the nineteen pairwise non-trisotopic transversal-free order-6
/// arrays with seven symbols, in index order `l1`..`l19`.
pub fn generate_order6_constructions() -> Vec<GridArray> {
    let mut out = Vec::with_capacity(19);
    out.push(l1());

    // l2..l8: new symbol g on the main diagonal of l_prime, in the rows
    // listed (1-indexed) per variant
    const DIAG_ROWS: [&[usize]; 7] = [
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 4, 5, 6],
        &[1, 3, 4, 5],
        &[1, 3, 6],
        &[1, 4],
        &[2, 3, 5, 6],
        &[3, 4, 5, 6],
    ];
    for rows in DIAG_ROWS {
        let mut chars = char_grid(L_PRIME);
        for &r in rows {
            chars[r - 1][r - 1] = 'g';
        }
        out.push(from_char_grid(&chars));
    }

    // l9: new symbol g on one scattered cell per line of l_prime
    let mut chars = char_grid(L_PRIME);
    for (r, c) in [(0, 5), (1, 3), (2, 4), (3, 2), (4, 0), (5, 1)] {
        chars[r][c] = 'g';
    }
    out.push(from_char_grid(&chars));

    out.push(l10());

    // l11 and l12: single-cell edits of l10
    let mut chars = char_grid(L10);
    chars[2][2] = 'e';
    out.push(from_char_grid(&chars));
    let mut chars = char_grid(L10);
    chars[3][3] = 'b';
    out.push(from_char_grid(&chars));

    // l13: in l_double_prime, the d of rows 2 and 3 becomes g and the f
    // of row 2 becomes d; l14 additionally turns row 3's e into d
    let mut chars = char_grid(L_DOUBLE_PRIME);
    chars[1][5] = 'g';
    chars[2][4] = 'g';
    chars[1][4] = 'd';
    out.push(from_char_grid(&chars));
    chars[2][5] = 'd';
    out.push(from_char_grid(&chars));

    // l15..l19: d -> g replacements in l_double_prime, by 1-indexed row
    const D_ROWS: [&[usize]; 5] = [&[1], &[1, 2], &[1, 2, 3], &[1, 3, 5], &[1, 4]];
    for rows in D_ROWS {
        let mut mask = 0u8;
        for &r in rows {
            mask |= 1 << (r - 1);
        }
        out.push(l_double_prime_d_replacement(mask));
    }
    out
}

fn must_parse(text: &str) -> GridArray {
    parse_array(text).expect("construction text is well-formed")
}

fn char_grid(text: &str) -> Vec<Vec<char>> {
    text.lines()
        .map(|l| l.split_whitespace().map(|t| t.chars().next().unwrap()).collect())
        .collect()
}

fn from_char_grid(chars: &[Vec<char>]) -> GridArray {
    let text: String = chars
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n");
    must_parse(&text)
}
