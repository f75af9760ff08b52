use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::ipa::{Inventory, Manner};

const BUILTIN_TABLE: &str = include_str!("../../data/mapping_table.json");

/// Largest index offset a table may declare.
pub const MAX_WINDOW_OFFSET: i32 = 2;

/// One row: any reference base in `rm` may pair with any helper base in `hm`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub rm: BTreeSet<String>,
    pub hm: BTreeSet<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct TableFile {
    #[serde(default = "default_window")]
    window_offsets: Vec<i32>,
    entries: Vec<MappingEntry>,
}

fn default_window() -> Vec<i32> {
    vec![0, 1]
}

/// Which reference and helper plosives may be matched, and at which index
/// offsets `j - i`. Symbols are compared after stripping phonation marks, i.e.
/// on base symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    entries: Vec<MappingEntry>,
    window_offsets: Vec<i32>,
}

impl MappingTable {
    /// The bundled table (`data/mapping_table.json`), checked against `inventory`.
    pub fn builtin(inventory: &Inventory) -> Result<Self> {
        Self::from_json_str(BUILTIN_TABLE, inventory)
    }

    pub fn from_path(path: impl AsRef<Path>, inventory: &Inventory) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, inventory)
    }

    pub fn from_json_str(text: &str, inventory: &Inventory) -> Result<Self> {
        let file: TableFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidTable(e.to_string()))?;
        Self::new(file.entries, file.window_offsets, inventory)
    }

    pub fn new(
        entries: Vec<MappingEntry>,
        window_offsets: Vec<i32>,
        inventory: &Inventory,
    ) -> Result<Self> {
        let nfc = |set: BTreeSet<String>| -> BTreeSet<String> {
            set.into_iter().map(|s| s.nfc().collect()).collect()
        };
        let entries: Vec<MappingEntry> = entries
            .into_iter()
            .map(|e| MappingEntry {
                rm: nfc(e.rm),
                hm: nfc(e.hm),
            })
            .collect();
        for entry in &entries {
            if entry.rm.is_empty() || entry.hm.is_empty() {
                return Err(Error::InvalidTable("entry with an empty side".into()));
            }
            for sym in entry.rm.iter().chain(&entry.hm) {
                let base = inventory
                    .entry(sym)
                    .ok_or_else(|| Error::InvalidTable(format!("`{sym}` not in inventory")))?;
                if !matches!(base.manner, Manner::Plosive | Manner::Affricate) {
                    return Err(Error::InvalidTable(format!(
                        "`{sym}` is not a plosive or affricate"
                    )));
                }
            }
        }
        let mut window_offsets = window_offsets;
        window_offsets.sort_unstable();
        window_offsets.dedup();
        if window_offsets.is_empty() {
            return Err(Error::InvalidTable("window_offsets is empty".into()));
        }
        if let Some(o) = window_offsets.iter().find(|o| o.abs() > MAX_WINDOW_OFFSET) {
            return Err(Error::InvalidTable(format!(
                "window offset {o} exceeds ±{MAX_WINDOW_OFFSET}"
            )));
        }
        Ok(MappingTable {
            entries,
            window_offsets,
        })
    }

    pub fn entries(&self) -> &[MappingEntry] {
        &self.entries
    }

    /// Sorted, deduplicated.
    pub fn window_offsets(&self) -> &[i32] {
        &self.window_offsets
    }

    pub fn with_window(mut self, offsets: Vec<i32>, inventory: &Inventory) -> Result<Self> {
        self = Self::new(std::mem::take(&mut self.entries), offsets, inventory)?;
        Ok(self)
    }

    /// Whether some row lists `rm_base` on the reference side.
    pub fn covers(&self, rm_base: &str) -> bool {
        self.entries.iter().any(|e| e.rm.contains(rm_base))
    }

    /// Whether some row pairs `rm_base` with `hm_base`.
    pub fn admits(&self, rm_base: &str, hm_base: &str) -> bool {
        self.entries
            .iter()
            .any(|e| e.rm.contains(rm_base) && e.hm.contains(hm_base))
    }

    pub fn to_json(&self) -> String {
        let file = TableFile {
            window_offsets: self.window_offsets.clone(),
            entries: self.entries.clone(),
        };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_rows() {
        let inv = Inventory::builtin();
        let table = MappingTable::builtin(&inv).unwrap();
        assert_eq!(table.entries().len(), 5);
        assert_eq!(table.window_offsets(), &[0, 1]);
        assert!(table.admits("t", "ʈ"));
        assert!(table.admits("d", "ɟ"));
        assert!(table.admits("k", "c"));
        assert!(!table.admits("t", "k"));
        assert!(!table.admits("k", "p"));
        assert!(table.covers("ɡ"));
        assert!(!table.covers("a"));
    }

    #[test]
    fn rejects_wide_window_and_non_plosives() {
        let inv = Inventory::builtin();
        let wide = r#"{"window_offsets": [0, 3], "entries": [{"rm": ["p"], "hm": ["p"]}]}"#;
        assert!(MappingTable::from_json_str(wide, &inv).is_err());
        let empty = r#"{"window_offsets": [], "entries": [{"rm": ["p"], "hm": ["p"]}]}"#;
        assert!(MappingTable::from_json_str(empty, &inv).is_err());
        let vowel = r#"{"entries": [{"rm": ["a"], "hm": ["p"]}]}"#;
        assert!(MappingTable::from_json_str(vowel, &inv).is_err());
        let unknown = r#"{"entries": [{"rm": ["g"], "hm": ["k"]}]}"#;
        assert!(MappingTable::from_json_str(unknown, &inv).is_err());
    }

    #[test]
    fn json_round_trip() {
        let inv = Inventory::builtin();
        let table = MappingTable::builtin(&inv).unwrap();
        assert_eq!(
            MappingTable::from_json_str(&table.to_json(), &inv).unwrap(),
            table
        );
    }
}
