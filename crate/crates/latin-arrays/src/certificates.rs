//! Executable certificates: the Delta-lemma transversal-freeness check,
//! clone/column lemma predicates, and exact-arithmetic evaluation of the
//! symbol-count thresholds that force a transversal.

use crate::grid::GridArray;
use crate::symset::SymSet;
use crate::transversal::has_transversal;
use crate::{classify_symbols, Error};

/// Weighting of rows/columns/symbols over Z3 whose sum constraints rule
/// out any transversal of a structured order-6 array with 7 symbols.
///
/// Rows and columns are split into halves `(R1, R2)` and `(C1, C2)`; the
/// block `D = R2 x C2` is the only place where `Delta(r,c,s) =
/// rho(r)+rho(c)-nu(s)` may be nonzero.
#[derive(Clone, Debug)]
pub struct DeltaCertificate {
    /// Rows of the first half `R1`; `R2` is the complement.
    pub rows_top: Vec<usize>,
    /// Columns of the first half `C1`; `C2` is the complement.
    pub cols_left: Vec<usize>,
    /// The three symbols allowed in `R1 x C1` and `D`.
    pub s1: Vec<u16>,
    /// Line weighting mod 3, indexed by row/column index.
    pub rho: Vec<u8>,
    /// Symbol weighting mod 3, indexed by symbol id.
    pub nu: Vec<u8>,
}

impl DeltaCertificate {
    /// The certificate used for the order-6 family with symbols
    /// `a..g = 0..6`: rho = (0,1,2,0,1,2) on both rows and columns,
    /// nu(a)=nu(d)=nu(g)=0, nu(b)=nu(e)=1, nu(c)=nu(f)=2, S1 = {a,b,c},
    /// D = bottom-right 3x3 block.
    pub fn order6_standard() -> DeltaCertificate {
        DeltaCertificate {
            rows_top: vec![0, 1, 2],
            cols_left: vec![0, 1, 2],
            s1: vec![0, 1, 2],
            rho: vec![0, 1, 2, 0, 1, 2],
            nu: vec![0, 1, 2, 0, 1, 2, 0],
        }
    }

    /// The standard certificate rebuilt against an array's actual symbol
    /// ids by label: `a`, `d`, `g` get weight 0, `b`, `e` weight 1, `c`,
    /// `f` weight 2, and `S1 = {a, b, c}`. Works for both the 6- and
    /// 7-symbol members of the family, where `d` or `g` may be absent.
    pub fn order6_by_labels(a: &GridArray) -> Result<DeltaCertificate, Error> {
        let mut nu = Vec::with_capacity(a.num_symbols());
        let mut s1 = vec![u16::MAX; 3];
        for id in 0..a.num_symbols() as u16 {
            let label = a.label(id);
            let w = match label {
                "a" | "d" | "g" => 0,
                "b" | "e" => 1,
                "c" | "f" => 2,
                _ => {
                    return Err(Error::MalformedCertificate(format!(
                        "unexpected symbol label {label:?}"
                    )))
                }
            };
            nu.push(w);
            if let Some(slot) = match label {
                "a" => Some(0),
                "b" => Some(1),
                "c" => Some(2),
                _ => None,
            } {
                s1[slot] = id;
            }
        }
        if s1.contains(&u16::MAX) {
            return Err(Error::MalformedCertificate(
                "labels a, b, c must all be present".into(),
            ));
        }
        Ok(DeltaCertificate {
            rows_top: vec![0, 1, 2],
            cols_left: vec![0, 1, 2],
            s1,
            rho: vec![0, 1, 2, 0, 1, 2],
            nu,
        })
    }

    fn validate(&self, n: usize, num_symbols: usize) -> Result<(), Error> {
        let half: SymSet = self.rows_top.iter().map(|&r| r as u16).collect();
        if half.len() != self.rows_top.len() || self.rows_top.iter().any(|&r| r >= n) {
            return Err(Error::MalformedCertificate("bad row partition".into()));
        }
        let chalf: SymSet = self.cols_left.iter().map(|&c| c as u16).collect();
        if chalf.len() != self.cols_left.len() || self.cols_left.iter().any(|&c| c >= n) {
            return Err(Error::MalformedCertificate("bad column partition".into()));
        }
        let s1: SymSet = self.s1.iter().copied().collect();
        if s1.len() != self.s1.len() || self.s1.iter().any(|&s| s as usize >= num_symbols) {
            return Err(Error::MalformedCertificate("bad symbol partition".into()));
        }
        if self.rho.len() != n {
            return Err(Error::MalformedCertificate("rho must cover all lines".into()));
        }
        if self.nu.len() != num_symbols {
            return Err(Error::MalformedCertificate("nu must cover the alphabet".into()));
        }
        if self.rho.iter().chain(self.nu.iter()).any(|&v| v >= 3) {
            return Err(Error::MalformedCertificate("weights must be in Z3".into()));
        }
        Ok(())
    }
}

/// Verifies every premise of the Delta argument by direct scan. A `true`
/// verdict certifies that the array has no transversal.
///
/// For a 7-symbol order-6 array the premises are:
///
/// - blocks `R1 x C1` and `D` carry only `S1` symbols, the other two
///   blocks only `S2` symbols, with `|S1| = 3` and `|S2| = 4`;
/// - `Delta(r,c,s) = 0` for every entry outside `D` and
///   `Delta(r,c,s) = nu(s)` inside `D`;
/// - `nu` is injective on `S1` and the total line weight minus the total
///   symbol weight vanishes mod 3.
///
/// Under these premises a transversal `T` would have exactly one entry in
/// `D` (it carries `2x` entries with `S1` symbols when it has `x` in `D`,
/// and only 4 of its 6 symbols can come from `S2`), and the weight sums
/// force that entry's symbol to be the one symbol `T` misses.
///
/// For the 6-symbol members of the same family the block partition alone
/// suffices: `2x <= |S1| = 3` and `6 - 2x <= |S2| = 3` have no integer
/// solution, so the checker only demands the block premise there.
pub fn verify_delta_certificate(l: &GridArray, cert: &DeltaCertificate) -> Result<bool, Error> {
    let n = l.order();
    let s = l.num_symbols();
    cert.validate(n, s)?;

    // the counting step needs the exact order-6 shape
    if n != 6 || !(s == 6 || s == 7) || l.num_holes() != 0 {
        return Ok(false);
    }
    if cert.rows_top.len() != 3 || cert.cols_left.len() != 3 || cert.s1.len() != 3 {
        return Ok(false);
    }
    let s1: SymSet = cert.s1.iter().copied().collect();
    let in_r1 = |r: usize| cert.rows_top.contains(&r);
    let in_c1 = |c: usize| cert.cols_left.contains(&c);

    if s == 7 {
        // nu injective on S1
        let mut seen = [false; 3];
        for &sym in &cert.s1 {
            let v = cert.nu[sym as usize] as usize;
            if seen[v] {
                return Ok(false);
            }
            seen[v] = true;
        }
        // total weight balance: sum_rho(rows) + sum_rho(cols) - sum_nu = 0
        // (mod 3); -nu == 2*nu (mod 3)
        let rho_total: u32 = 2 * cert.rho.iter().map(|&v| v as u32).sum::<u32>();
        let nu_total: u32 = cert.nu.iter().map(|&v| v as u32).sum();
        if (rho_total + 2 * nu_total) % 3 != 0 {
            return Ok(false);
        }
    }

    for r in 0..n {
        for c in 0..n {
            let sym = match l.symbol_at(r, c) {
                Some(sym) => sym,
                None => return Ok(false),
            };
            let in_d = !in_r1(r) && !in_c1(c);
            let s1_block = (in_r1(r) && in_c1(c)) || in_d;
            if s1_block != s1.contains(sym) {
                return Ok(false); // block alphabet partition violated
            }
            if s == 7 {
                let delta = (cert.rho[r] + cert.rho[c] + 2 * cert.nu[sym as usize]) % 3;
                let expected = if in_d { cert.nu[sym as usize] % 3 } else { 0 };
                if delta != expected {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Verdict of a conditional bound check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable(&'static str),
}

/// Checks that some clone in row `i` witnesses the pigeonhole inequality
/// `|R_i u C_j| >= |R_i| + (s - (n-d)(n-1) - |R_i|) / d`, where `d` is the
/// number of clone cells in row `i` and `s` the total symbol count.
/// Must hold for every array; a `false` return is a bug (or a disproof).
pub fn check_good_col(a: &GridArray, i: usize) -> Result<bool, Error> {
    let n = a.order();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, order: n });
    }
    let classes = classify_symbols(a);
    let clone_cols: Vec<usize> = (0..n)
        .filter(|&j| matches!(a.symbol_at(i, j), Some(s) if classes.clones.contains(s)))
        .collect();
    let d = clone_cols.len() as i64;
    if d == 0 {
        return Err(Error::NoCloneInRow { row: i });
    }
    let s = a.num_symbols() as i64;
    let ri = a.row_symbols(i)?.len() as i64;
    let n = n as i64;
    // d * (|Ri u Cj| - |Ri|) >= s - (n-d)(n-1) - |Ri|, exact arithmetic
    let rhs = s - (n - d) * (n - 1) - ri;
    Ok(clone_cols.iter().any(|&j| {
        let union = a
            .row_symbols(i as usize)
            .unwrap()
            .union(&a.col_symbols(j).unwrap())
            .len() as i64;
        d * (union - ri) >= rhs
    }))
}

/// For a transversal-free array whose bottom-right minor has a transversal
/// and whose last line pair carries at least `(k+1)n - 1` symbols, checks
/// the bound `s <= ((k^2-2k+2)n^2 + (3k-2)n) / 2`.
pub fn check_upper_bound_from_larges(a: &GridArray, k: usize) -> Result<Verdict, Error> {
    let n = a.order();
    if n < 2 {
        return Ok(Verdict::NotApplicable("order too small"));
    }
    if has_transversal(a) {
        return Ok(Verdict::NotApplicable("array has a transversal"));
    }
    let minor = a.delete_row_col(n - 1, n - 1)?;
    if !has_transversal(&minor) {
        return Ok(Verdict::NotApplicable("minor has no transversal"));
    }
    let union = a
        .row_symbols(n - 1)?
        .union(&a.col_symbols(n - 1)?)
        .len() as i64;
    let (n, k) = (n as i64, k as i64);
    if union < (k + 1) * n - 1 {
        return Ok(Verdict::NotApplicable("last lines carry too few symbols"));
    }
    let s = a.num_symbols() as i64;
    let bound_twice = (k * k - 2 * k + 2) * n * n + (3 * k - 2) * n;
    Ok(if 2 * s <= bound_twice {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

/// Array class a guarantee applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrayKind {
    Latin,
    RowLatin,
}

/// Which theorems fire for a given order and symbol count, with their
/// exact integer thresholds.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub s: usize,
    pub kind: ArrayKind,
    /// smallest s with `s >= (2 - sqrt 2) n^2` (Latin arrays)
    pub latin_threshold: usize,
    /// smallest s with `s >= (5 - sqrt 5)/4 n^2` (row-Latin arrays)
    pub row_latin_threshold: usize,
    /// smallest s with `s >= (229 n^2 + 27 n)/256` (Latin arrays)
    pub lll_threshold: usize,
    /// names of the theorems whose hypotheses hold
    pub fired: Vec<String>,
    /// informational lower-bound context for row-Latin arrays
    pub row_latin_lower_note: String,
}

impl BoundReport {
    pub fn any_fired(&self) -> bool {
        !self.fired.is_empty()
    }
}

fn isqrt(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = 1u128 << (v.ilog2() / 2 + 1);
    loop {
        let y = (x + v / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Smallest symbol count at which the Latin-array guarantee fires:
/// `s >= (2 - sqrt 2) n^2`, via exact integer arithmetic.
pub fn latin_threshold(n: usize) -> usize {
    let n2 = (n * n) as u128;
    // floor(sqrt(2) n^2); 2 n^4 is never a perfect square for n >= 1
    let q = isqrt(2 * n2 * n2);
    ((2 * n2 - q) as usize).max(n)
}

/// Smallest symbol count at which the row-Latin guarantee fires:
/// `s >= (5 - sqrt 5)/4 n^2`.
pub fn row_latin_threshold(n: usize) -> usize {
    let n2 = (n * n) as u128;
    let q = isqrt(5 * n2 * n2);
    // ceil((5 n^2 - floor(sqrt 5 n^2)) / 4); the inner value is irrational
    (((5 * n2 - q) as usize).div_ceil(4)).max(n)
}

/// Smallest symbol count at which the probabilistic guarantee fires:
/// `s >= (229 n^2 + 27 n)/256`.
pub fn lll_threshold(n: usize) -> usize {
    ((229 * n * n + 27 * n).div_ceil(256)).max(n)
}

/// Reports which guarantee theorems apply to an array of order `n` with
/// `s` distinct symbols. All thresholds are exact.
pub fn guarantee_transversal(n: usize, s: usize, kind: ArrayKind) -> Result<BoundReport, Error> {
    if n == 0 {
        return Err(Error::ParamOutOfRange { name: "order", value: 0 });
    }
    if s < n || s > n * n {
        return Err(Error::ParamOutOfRange {
            name: "symbols",
            value: s as i64,
        });
    }
    let latin_t = latin_threshold(n);
    let row_latin_t = row_latin_threshold(n);
    let lll_t = lll_threshold(n);
    let mut fired = Vec::new();
    // Latin arrays are row-Latin, so all three theorems are in scope for
    // kind=Latin; only the row-Latin bound applies to general row-Latin input.
    if s >= row_latin_t {
        fired.push("row-latin-bound".to_string());
    }
    if kind == ArrayKind::Latin {
        if s >= latin_t {
            fired.push("latin-bound".to_string());
        }
        if s >= lll_t {
            fired.push("clique-lll-bound".to_string());
        }
    }
    Ok(BoundReport {
        n,
        s,
        kind,
        latin_threshold: latin_t,
        row_latin_threshold: row_latin_t,
        lll_threshold: lll_t,
        fired,
        row_latin_lower_note: "no guarantee is possible below n^2/2 - O(n) symbols for row-Latin arrays".to_string(),
    })
}

/// A Latin array is focused when every singleton lies in an all-singleton
/// row or column and some row/column pair consists entirely of singletons
/// (equivalently `|Psi_ij| = 2n - 1`). Returns the witness pair.
pub fn check_focused(a: &GridArray) -> Result<(bool, Option<(usize, usize)>), Error> {
    if !a.is_latin() {
        return Err(Error::NotLatin);
    }
    let n = a.order();
    let classes = classify_symbols(a);
    let all_singleton_row = |i: usize| {
        (0..n).all(|j| matches!(a.symbol_at(i, j), Some(s) if classes.singletons.contains(s)))
    };
    let all_singleton_col = |j: usize| {
        (0..n).all(|i| matches!(a.symbol_at(i, j), Some(s) if classes.singletons.contains(s)))
    };
    let rows_ok: Vec<bool> = (0..n).map(all_singleton_row).collect();
    let cols_ok: Vec<bool> = (0..n).map(all_singleton_col).collect();
    for i in 0..n {
        for j in 0..n {
            if let Some(s) = a.symbol_at(i, j) {
                if classes.singletons.contains(s) && !rows_ok[i] && !cols_ok[j] {
                    return Ok((false, None));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if rows_ok[i] && cols_ok[j] {
                debug_assert_eq!(a.psi(i, j)?.len(), 2 * n - 1);
                return Ok((true, Some((i, j))));
            }
        }
    }
    Ok((false, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_array;
    use crate::grid::GridArray;

    #[test]
    fn thresholds_at_order_six() {
        assert_eq!(latin_threshold(6), 22);
        assert_eq!(row_latin_threshold(6), 25);
        assert_eq!(lll_threshold(6), 33);
    }

    #[test]
    fn threshold_examples_at_order_ten() {
        // (2 - sqrt 2) * 100 ~ 58.58
        assert_eq!(latin_threshold(10), 59);
        let r59 = guarantee_transversal(10, 59, ArrayKind::Latin).unwrap();
        assert!(r59.fired.iter().any(|t| t == "latin-bound"));
        let r58 = guarantee_transversal(10, 58, ArrayKind::Latin).unwrap();
        assert!(!r58.fired.iter().any(|t| t == "latin-bound"));
    }

    #[test]
    fn lll_threshold_at_sixteen() {
        // (229*256 + 27*16)/256 = 230.6875
        assert_eq!(lll_threshold(16), 231);
    }

    #[test]
    fn no_theorem_fires_at_ell_six() {
        let r = guarantee_transversal(6, 9, ArrayKind::Latin).unwrap();
        assert!(r.fired.is_empty());
    }

    #[test]
    fn row_latin_kind_only_uses_row_latin_bound() {
        let r = guarantee_transversal(6, 33, ArrayKind::RowLatin).unwrap();
        assert_eq!(r.fired, vec!["row-latin-bound".to_string()]);
    }

    #[test]
    fn guarantee_rejects_bad_symbol_counts() {
        assert!(guarantee_transversal(4, 3, ArrayKind::Latin).is_err());
        assert!(guarantee_transversal(4, 17, ArrayKind::Latin).is_err());
    }

    #[test]
    fn good_col_two_by_two() {
        let a = parse_array("a b\nb a").unwrap();
        assert!(check_good_col(&a, 0).unwrap());
        assert!(check_good_col(&a, 1).unwrap());
    }

    #[test]
    fn good_col_needs_a_clone() {
        let a = GridArray::from_rows(&[&[0, 1], &[2, 3]]).unwrap();
        assert!(matches!(
            check_good_col(&a, 0),
            Err(Error::NoCloneInRow { row: 0 })
        ));
    }

    #[test]
    fn upper_bound_not_applicable_with_transversal() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        assert_eq!(
            check_upper_bound_from_larges(&a, 1).unwrap(),
            Verdict::NotApplicable("array has a transversal")
        );
    }

    #[test]
    fn focused_all_distinct() {
        let a = GridArray::from_rows(&[&[0, 1], &[2, 3]]).unwrap();
        let (focused, witness) = check_focused(&a).unwrap();
        assert!(focused);
        assert!(witness.is_some());
    }

    #[test]
    fn latin_square_not_focused() {
        let a = parse_array("a b c\nb c a\nc a b").unwrap();
        let (focused, _) = check_focused(&a).unwrap();
        assert!(!focused);
    }

    #[test]
    fn embedded_square_is_focused() {
        let a = parse_array("a b\nb a").unwrap().embed_fresh(2).unwrap();
        let (focused, witness) = check_focused(&a).unwrap();
        assert!(focused);
        let (i, j) = witness.unwrap();
        assert!(i >= 2 && j >= 2);
    }

    #[test]
    fn malformed_certificate_rejected() {
        let l = parse_array("a b\nb a").unwrap();
        let cert = DeltaCertificate::order6_standard();
        assert!(verify_delta_certificate(&l, &cert).is_err());
    }
}
