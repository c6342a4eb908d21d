//! JSON-lines persistence for catalogue records with an in-memory dedup
//! index keyed by canonical form.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::grid::GridArray;
use crate::trisotopy::CanonicalKey;
use crate::Error;

/// Header line of a saved store, distinguishing a full catalogue from a
/// capped or sharded run.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Meta {
    complete: bool,
}

/// One trisotopy class, stored by its canonical key.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CatalogueRecord {
    /// Canonical key string, e.g. `"n=4;0 1 2 3 1 2 3 0 ..."`.
    pub key: String,
    pub order: usize,
    pub symbols: usize,
    pub holes: usize,
    /// Transversal-free flag; every record in a transversal-free catalogue
    /// carries `true`, re-verified on load.
    pub tf: bool,
    /// Generation path tag, e.g. `"enumerate"` or `"extend:n=4"`.
    pub prov: String,
}

impl CatalogueRecord {
    pub fn new(key: &CanonicalKey, tf: bool, prov: &str) -> CatalogueRecord {
        CatalogueRecord {
            key: key.to_string(),
            order: key.order(),
            symbols: key.num_symbols(),
            holes: key.num_holes(),
            tf,
            prov: prov.to_string(),
        }
    }

    /// Decodes the canonical key back into an array.
    pub fn to_array(&self) -> Result<GridArray, Error> {
        Ok(CanonicalKey::from_str(&self.key)?.as_array())
    }

    /// Re-checks that the derived fields match the key.
    pub fn validate(&self) -> Result<(), Error> {
        let key = CanonicalKey::from_str(&self.key)?;
        if key.order() != self.order
            || key.num_symbols() != self.symbols
            || key.num_holes() != self.holes
        {
            return Err(Error::MalformedRecord(format!(
                "fields do not match key {}",
                self.key
            )));
        }
        Ok(())
    }
}

/// Dedup-indexed collection of [`CatalogueRecord`]s. Insertion order is
/// preserved; iteration in sorted key order is available for deterministic
/// output.
#[derive(Clone, Debug, Default)]
pub struct CatalogueStore {
    records: Vec<CatalogueRecord>,
    index: HashMap<String, usize>,
    /// Set when the producing run was truncated (sharding, checkpoint
    /// resume, hole caps): counts are then only lower bounds.
    pub complete: bool,
}

impl CatalogueStore {
    pub fn new() -> CatalogueStore {
        CatalogueStore {
            records: Vec::new(),
            index: HashMap::new(),
            complete: true,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.index.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&CatalogueRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    /// Inserts unless the key is already present. Returns whether the
    /// record was new.
    pub fn insert(&mut self, record: CatalogueRecord) -> bool {
        if self.index.contains_key(&record.key) {
            return false;
        }
        self.index.insert(record.key.clone(), self.records.len());
        self.records.push(record);
        true
    }

    /// Union of two stores; `other`'s duplicates are dropped. Completeness
    /// is inherited only if both inputs were complete.
    pub fn merge(&mut self, other: CatalogueStore) {
        self.complete &= other.complete;
        for r in other.records {
            self.insert(r);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &CatalogueRecord> {
        self.records.iter()
    }

    /// Records in canonical key order, independent of insertion order.
    pub fn sorted_records(&self) -> Vec<&CatalogueRecord> {
        let mut v: Vec<&CatalogueRecord> = self.records.iter().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }

    /// Writes a meta header line, then one JSON object per line in sorted
    /// key order.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let file = std::fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{}", serde_json::to_string(&Meta { complete: self.complete }).unwrap())?;
        for r in self.sorted_records() {
            let line = serde_json::to_string(r)
                .map_err(|e| Error::MalformedRecord(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Loads a JSON-lines file, validating every record.
    pub fn load(path: &Path) -> Result<CatalogueStore, Error> {
        let file = std::fs::File::open(path)?;
        let mut store = CatalogueStore::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            // header line; absent in hand-written files, which are then
            // taken at face value as complete
            if let Ok(meta) = serde_json::from_str::<Meta>(&line) {
                store.complete = meta.complete;
                continue;
            }
            let record: CatalogueRecord = serde_json::from_str(&line)
                .map_err(|e| Error::MalformedRecord(format!("{e}: {line}")))?;
            record.validate()?;
            store.insert(record);
        }
        Ok(store)
    }

    /// Class counts grouped by `(holes, symbols)`.
    pub fn counts_by_holes_symbols(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for r in &self.records {
            *counts.entry((r.holes, r.symbols)).or_insert(0) += 1;
        }
        counts
    }

    /// Class counts grouped by symbol count.
    pub fn counts_by_symbols(&self) -> HashMap<usize, usize> {
        let mut counts = HashMap::new();
        for r in &self.records {
            *counts.entry(r.symbols).or_insert(0) += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical_form;
    use crate::grid::parse_array;

    fn sample_record() -> CatalogueRecord {
        let a = parse_array("a b\nb a").unwrap();
        CatalogueRecord::new(&canonical_form(&a).unwrap(), true, "test")
    }

    #[test]
    fn insert_dedups_by_key() {
        let mut store = CatalogueStore::new();
        assert!(store.insert(sample_record()));
        assert!(!store.insert(sample_record()));
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn save_load_round_trip() {
        let mut store = CatalogueStore::new();
        store.insert(sample_record());
        let dir = std::env::temp_dir().join(format!("latin-store-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c2.jsonl");
        store.save(&path).unwrap();
        let loaded = CatalogueStore::load(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded.sorted_records()[0], &store.records[0]);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn record_round_trips_to_array() {
        let r = sample_record();
        let a = r.to_array().unwrap();
        assert_eq!(a.order(), 2);
        r.validate().unwrap();
    }

    #[test]
    fn load_rejects_mismatched_fields() {
        let dir = std::env::temp_dir().join(format!("latin-store-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.jsonl");
        let mut r = sample_record();
        r.symbols = 99;
        std::fs::write(&path, format!("{}\n", serde_json::to_string(&r).unwrap())).unwrap();
        assert!(CatalogueStore::load(&path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
