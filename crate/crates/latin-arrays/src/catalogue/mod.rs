//! Catalogues of transversal-free arrays at small orders.
//!
//! Two independent construction paths are provided: direct orderly
//! generation ([`enumerate_partial_catalogue`]) and the two-row/two-column
//! extension pipeline ([`extend_catalogue`]), which scales two orders
//! further. On top of the stores this module computes the threshold
//! `ell(n)` and the class-count summary tables.

pub mod constructions;
pub mod enumerate;
pub mod extend;
pub mod store;

use std::collections::BTreeMap;

pub use constructions::{
    generate_order6_constructions, l1, l10, l_double_prime, l_double_prime_d_replacement,
    l_prime, order4_representatives, order5_representatives, D_POSITIONS,
};
pub use enumerate::{enumerate_partial_catalogue, EnumerateOptions};
pub use extend::{extend_catalogue, latin_square_completions, ExtendOptions};
pub use store::{CatalogueRecord, CatalogueStore};

use crate::Error;

/// The least `s >= n` such that every Latin array of order `n` with at
/// least `s` distinct symbols has a transversal, computed from a complete
/// transversal-free catalogue of order `n`: one more than the largest
/// symbol count among the catalogued classes.
pub fn compute_ell(n: usize, catalogue: &CatalogueStore) -> Result<usize, Error> {
    if !catalogue.complete {
        return Err(Error::IncompleteCatalogue(format!(
            "order-{n} catalogue is a lower bound only"
        )));
    }
    let mut max_symbols = None;
    for r in catalogue.iter() {
        if r.order != n {
            return Err(Error::MalformedRecord(format!(
                "order-{} record in an order-{n} catalogue",
                r.order
            )));
        }
        if r.holes > 0 {
            return Err(Error::MalformedRecord(
                "ell is defined over hole-free catalogues".into(),
            ));
        }
        max_symbols = max_symbols.max(Some(r.symbols));
    }
    Ok(match max_symbols {
        Some(s) => n.max(s + 1),
        None => n,
    })
}

/// One row of the class-count summary across orders.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Table1Row {
    pub n: usize,
    /// `None` when the order's catalogue is missing or incomplete.
    pub ell: Option<usize>,
    /// classes with exactly `n` symbols
    pub classes_n: usize,
    /// classes with `n + 1` symbols
    pub classes_n_plus_1: usize,
    /// classes with `n + 2` symbols
    pub classes_n_plus_2: usize,
    pub total: usize,
    pub complete: bool,
}

/// Summarizes hole-free transversal-free catalogues for orders
/// `2..=upto`. Orders without a catalogue produce a row flagged
/// incomplete.
pub fn table1_report(
    catalogues: &BTreeMap<usize, CatalogueStore>,
    upto: usize,
) -> Vec<Table1Row> {
    (2..=upto)
        .map(|n| match catalogues.get(&n) {
            Some(c) => {
                let by_symbols = c.counts_by_symbols();
                Table1Row {
                    n,
                    ell: compute_ell(n, c).ok(),
                    classes_n: by_symbols.get(&n).copied().unwrap_or(0),
                    classes_n_plus_1: by_symbols.get(&(n + 1)).copied().unwrap_or(0),
                    classes_n_plus_2: by_symbols.get(&(n + 2)).copied().unwrap_or(0),
                    total: c.len(),
                    complete: c.complete,
                }
            }
            None => Table1Row {
                n,
                ell: None,
                classes_n: 0,
                classes_n_plus_1: 0,
                classes_n_plus_2: 0,
                total: 0,
                complete: false,
            },
        })
        .collect()
}

/// One `(holes, symbols)` bucket of a partial-array catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Table2Cell {
    pub holes: usize,
    pub symbols: usize,
    pub classes: usize,
}

/// Class counts of a partial-array catalogue by hole and symbol count.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Table2Report {
    pub order: usize,
    /// sorted by `(holes, symbols)`
    pub counts: Vec<Table2Cell>,
    pub total: usize,
    pub complete: bool,
}

impl Table2Report {
    pub fn classes(&self, holes: usize, symbols: usize) -> usize {
        self.counts
            .iter()
            .find(|c| c.holes == holes && c.symbols == symbols)
            .map_or(0, |c| c.classes)
    }
}

/// Tabulates a partial-array catalogue by hole and symbol count.
pub fn table2_report(catalogue: &CatalogueStore) -> Table2Report {
    let order = catalogue.iter().map(|r| r.order).next().unwrap_or(0);
    let sorted: BTreeMap<(usize, usize), usize> =
        catalogue.counts_by_holes_symbols().into_iter().collect();
    let counts = sorted
        .into_iter()
        .map(|((holes, symbols), classes)| Table2Cell {
            holes,
            symbols,
            classes,
        })
        .collect();
    Table2Report {
        order,
        counts,
        total: catalogue.len(),
        complete: catalogue.complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_of_two_from_enumeration() {
        let opts = EnumerateOptions {
            max_holes_per_line: 0,
            max_total_holes: None,
            max_symbols: None,
        };
        let c = enumerate_partial_catalogue(2, &opts).unwrap();
        assert_eq!(compute_ell(2, &c).unwrap(), 3);
    }

    #[test]
    fn ell_of_empty_catalogue_is_n() {
        let c = CatalogueStore::new();
        assert_eq!(compute_ell(3, &c).unwrap(), 3);
    }

    #[test]
    fn ell_rejects_incomplete_catalogues() {
        let mut c = CatalogueStore::new();
        c.complete = false;
        assert!(matches!(
            compute_ell(3, &c),
            Err(Error::IncompleteCatalogue(_))
        ));
    }

    #[test]
    fn table1_marks_missing_orders() {
        let mut catalogues = BTreeMap::new();
        let opts = EnumerateOptions {
            max_holes_per_line: 0,
            max_total_holes: None,
            max_symbols: None,
        };
        catalogues.insert(2, enumerate_partial_catalogue(2, &opts).unwrap());
        let rows = table1_report(&catalogues, 3);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].ell, Some(3));
        assert_eq!(rows[0].classes_n, 1);
        assert!(!rows[1].complete);
        assert_eq!(rows[1].ell, None);
    }

    #[test]
    fn table2_counts_by_holes_and_symbols() {
        let c = enumerate_partial_catalogue(2, &EnumerateOptions::default()).unwrap();
        let report = table2_report(&c);
        assert_eq!(report.order, 2);
        assert_eq!(report.total, c.len());
        assert_eq!(
            report.counts.iter().map(|cell| cell.classes).sum::<usize>(),
            report.total
        );
        // the hole-free order-2 class: 2 symbols, 0 holes
        assert_eq!(report.classes(0, 2), 1);
    }
}
