//! Reference tables shipped with the crate: the generator classes, the
//! zero-entropy cycle unions with their maximal extensions, and the
//! marginal positive-entropy classes with their listed witnesses.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::certificate::Proposition;
use crate::tile::{Tile, TileSet};

const TABLES_JSON: &str = include_str!("../data/tables.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tables {
    pub version: u32,
    pub table_a1: Vec<GeneratorClassRow>,
    pub table_a2: Vec<ZeroUnionRow>,
    pub table_a3: Vec<MarginalRow>,
}

/// A generator class, written with tile names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorClassRow {
    pub representative: Vec<String>,
    pub members: Vec<Vec<String>>,
}

impl GeneratorClassRow {
    pub fn representative_set(&self) -> TileSet {
        named_set(&self.representative)
    }

    pub fn member_sets(&self) -> Vec<TileSet> {
        self.members.iter().map(|m| named_set(m)).collect()
    }
}

/// A zero-entropy cycle union `U` and the maximal extensions `U ∪ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroUnionRow {
    pub row: usize,
    /// Marked with a star in the source: `U` is itself a generator.
    pub generator_class: bool,
    pub union: TileSet,
    pub extensions: Vec<ExtensionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionEntry {
    pub remainder: TileSet,
    pub proposition: Proposition,
}

impl ZeroUnionRow {
    pub fn containers(&self) -> Vec<TileSet> {
        self.extensions
            .iter()
            .map(|e| self.union.union(e.remainder))
            .collect()
    }
}

/// A marginal positive-entropy class with the listed period and sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub row: usize,
    pub set: TileSet,
    pub m: usize,
    pub betas: Vec<u8>,
}

fn named_set(names: &[String]) -> TileSet {
    names
        .iter()
        .map(|n| Tile::from_name(n).unwrap_or_else(|| panic!("unknown tile name {n:?} in tables")))
        .collect()
}

/// The embedded tables, parsed once.
pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(TABLES_JSON).expect("embedded tables are valid"))
}

/// Rows 14 to 31 of the zero-union table: the saturated zero-entropy sets.
pub fn saturated_rows() -> impl Iterator<Item = &'static ZeroUnionRow> {
    tables().table_a2.iter().filter(|r| r.row >= 14)
}
