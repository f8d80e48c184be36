//! Computed versions of the reference tables and their comparison with the
//! embedded copies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bound::{find_positivity_witness, operator_product, PositivityWitness, SearchConfig};
use crate::certificate::{certify_zero, ZeroCertificate};
use crate::fixtures::{tables, ZeroUnionRow};
use crate::periodicity::{maximal_extensions, GeneratorCatalog};
use crate::spectral::exceeds_one;
use crate::tile::{canonicalize, format_tileset, orbit, stabilizer, TileSet, TileSetStyle};
use crate::transfer::Direction;

/// Outcome of one comparison. `diffs` are failures, `notes` are reported
/// differences that the comparison tolerates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub rows: usize,
    pub diffs: Vec<String>,
    pub notes: Vec<String>,
}

impl Check {
    pub fn new(name: &str) -> Check {
        Check {
            name: name.to_string(),
            ..Check::default()
        }
    }

    pub fn diff(&mut self, message: String) {
        self.diffs.push(message);
    }

    pub fn note(&mut self, message: String) {
        self.notes.push(message);
    }

    pub fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, found: T, expected: T) {
        if found != expected {
            self.diff(format!("{what}: found {found:?}, expected {expected:?}"));
        }
    }

    pub fn finish(mut self, rows: usize) -> Check {
        self.rows = rows;
        self.passed = self.diffs.is_empty();
        self
    }
}

fn names(set: TileSet) -> String {
    format_tileset(set, TileSetStyle::Names)
}

fn indices(set: TileSet) -> String {
    format_tileset(set, TileSetStyle::Indices)
}

fn canonical_set(sets: impl IntoIterator<Item = TileSet>) -> BTreeSet<TileSet> {
    sets.into_iter().map(canonicalize).collect()
}

/// Reports elements present on only one side.
fn compare_sets(
    check: &mut Check,
    what: &str,
    found: &BTreeSet<TileSet>,
    expected: &BTreeSet<TileSet>,
) {
    for extra in found.difference(expected) {
        check.diff(format!(
            "{what}: computed {} is not listed",
            indices(*extra)
        ));
    }
    for missing in expected.difference(found) {
        check.diff(format!(
            "{what}: listed {} was not computed",
            indices(*missing)
        ));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorClass {
    pub representative: TileSet,
    pub members: Vec<TileSet>,
}

/// Generator classes, using the listed representative where one matches
/// and keeping the listed order.
pub fn generator_classes(catalog: &GeneratorCatalog) -> Vec<GeneratorClass> {
    let mut classes: Vec<TileSet> = catalog.classes();
    let mut out = Vec::new();
    for row in &tables().table_a1 {
        let rep = row.representative_set();
        if let Some(pos) = classes.iter().position(|c| *c == canonicalize(rep)) {
            classes.remove(pos);
            out.push(GeneratorClass {
                representative: rep,
                members: orbit(rep),
            });
        }
    }
    out.extend(classes.into_iter().map(|c| GeneratorClass {
        representative: c,
        members: orbit(c),
    }));
    out
}

pub fn verify_generator_classes(catalog: &GeneratorCatalog) -> Check {
    let mut check = Check::new("generator classes");
    let listed = &tables().table_a1;
    let computed = generator_classes(catalog);
    check.expect_eq(
        "generator count",
        catalog.generators().len(),
        listed.iter().map(|r| r.members.len()).sum(),
    );
    check.expect_eq("class count", computed.len(), listed.len());
    for (i, row) in listed.iter().enumerate() {
        let rep = row.representative_set();
        let expected: BTreeSet<TileSet> = row.member_sets().into_iter().collect();
        if expected.len() != row.members.len() {
            check.diff(format!("row {}: listed members repeat", i + 1));
        }
        match computed.iter().find(|c| c.representative == rep) {
            Some(class) => {
                let found: BTreeSet<TileSet> = class.members.iter().copied().collect();
                compare_sets(&mut check, &format!("row {}", i + 1), &found, &expected);
            }
            None => check.diff(format!(
                "row {}: {} is not a generator class",
                i + 1,
                names(rep)
            )),
        }
    }
    check.finish(listed.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub container: TileSet,
    pub remainder: TileSet,
    pub certificate: Option<ZeroCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroUnion {
    /// Matching listed row, if any.
    pub row: Option<usize>,
    pub union: TileSet,
    pub generator: bool,
    pub extensions: Vec<Extension>,
}

/// Smallest image of `set` under the symmetries fixing `union`.
fn reduce_modulo(set: TileSet, symmetries: &[crate::tile::GroupElement]) -> TileSet {
    symmetries
        .iter()
        .map(|g| g.apply_set(set))
        .min()
        .unwrap_or(set)
}

fn listed_for(canonical: TileSet) -> Option<&'static ZeroUnionRow> {
    tables()
        .table_a2
        .iter()
        .find(|r| canonicalize(r.union) == canonical)
}

/// The maximal extensions and certificates of every zero-entropy cycle
/// union. `zero_classes` are canonical forms; listed rows come first, in
/// their order, written with the listed representative.
pub fn zero_unions(zero_classes: &[TileSet], catalog: &GeneratorCatalog) -> Vec<ZeroUnion> {
    let mut matched: Vec<(usize, TileSet, Option<&ZeroUnionRow>)> = zero_classes
        .iter()
        .map(|&c| match listed_for(c) {
            Some(row) => (row.row, row.union, Some(row)),
            None => (usize::MAX, c, None),
        })
        .collect();
    matched.sort_by_key(|&(row, union, _)| (row, union));
    matched
        .into_iter()
        .map(|(_, union, listed)| {
            let symmetries = stabilizer(union);
            let listed_containers = listed.map(|r| r.containers()).unwrap_or_default();
            let mut extensions: Vec<(usize, Extension)> = maximal_extensions(union, catalog)
                .expect("zero classes are cycle unions")
                .into_iter()
                .map(|found| {
                    let key = reduce_modulo(found, &symmetries);
                    let position = listed_containers
                        .iter()
                        .position(|c| reduce_modulo(*c, &symmetries) == key);
                    let container = position.map_or(found, |p| listed_containers[p]);
                    let extension = Extension {
                        container,
                        remainder: container.difference(union),
                        certificate: certify_zero(container, catalog),
                    };
                    (position.unwrap_or(usize::MAX), extension)
                })
                .collect();
            extensions.sort_by_key(|(p, e)| (*p, e.container));
            ZeroUnion {
                row: listed.map(|r| r.row),
                union,
                generator: catalog.generators().contains(&union),
                extensions: extensions.into_iter().map(|(_, e)| e).collect(),
            }
        })
        .collect()
}

pub fn verify_zero_unions(zero_classes: &[TileSet], catalog: &GeneratorCatalog) -> Check {
    let mut check = Check::new("zero-entropy unions");
    let listed = &tables().table_a2;
    check.expect_eq("zero union classes", zero_classes.len(), listed.len());
    compare_sets(
        &mut check,
        "union",
        &zero_classes.iter().copied().collect(),
        &canonical_set(listed.iter().map(|r| r.union)),
    );
    for row in listed {
        let label = format!("row {}", row.row);
        let union = row.union;
        if catalog.decompose(union).cycle_union() != union {
            check.diff(format!("{label}: {} is not a cycle union", indices(union)));
            continue;
        }
        check.expect_eq(
            &format!("{label} generator mark"),
            catalog.generators().contains(&union),
            row.generator_class,
        );
        let symmetries = stabilizer(union);
        let found: BTreeSet<TileSet> = maximal_extensions(union, catalog)
            .expect("checked above")
            .into_iter()
            .map(|s| reduce_modulo(s, &symmetries))
            .collect();
        let expected: BTreeSet<TileSet> = row
            .containers()
            .into_iter()
            .map(|s| reduce_modulo(s, &symmetries))
            .collect();
        if found != expected {
            let show = |s: &BTreeSet<TileSet>| {
                s.iter()
                    .map(|c| indices(c.difference(union)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            check.diff(format!(
                "{label}: extensions {} differ from listed {}",
                show(&found),
                show(&expected)
            ));
        }
        for entry in &row.extensions {
            let container = union.union(entry.remainder);
            let listed_prop = entry.proposition;
            match certify_zero(container, catalog) {
                None => check.diff(format!(
                    "{label}: no certificate for {}",
                    indices(container)
                )),
                Some(cert) if cert.proposition == listed_prop => {}
                Some(cert) if cert.proposition < listed_prop => {
                    let listed_holds = listed_prop.holds_up_to_symmetry(container).is_some();
                    check.note(format!(
                        "{label}: N = {} certified by {} before the listed {} (listed hypothesis {})",
                        indices(entry.remainder),
                        cert.proposition,
                        listed_prop,
                        if listed_holds { "also holds" } else { "does not hold" }
                    ));
                }
                Some(cert) => check.diff(format!(
                    "{label}: N = {} certified by {}, listed {} does not hold",
                    indices(entry.remainder),
                    cert.proposition,
                    listed_prop
                )),
            }
        }
    }
    check.finish(listed.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalClass {
    pub row: Option<usize>,
    pub set: TileSet,
    pub listed_m: Option<usize>,
    pub listed_betas: Option<Vec<u8>>,
    pub witness: Option<PositivityWitness>,
}

/// Witnesses for the marginal positive classes; listed rows first.
pub fn marginal_classes(classes: &[TileSet], config: &SearchConfig) -> Vec<MarginalClass> {
    let listed = &tables().table_a3;
    let mut out: Vec<MarginalClass> = Vec::new();
    let mut rest: BTreeSet<TileSet> = classes.iter().copied().collect();
    for row in listed {
        if rest.remove(&canonicalize(row.set)) {
            out.push(MarginalClass {
                row: Some(row.row),
                set: row.set,
                listed_m: Some(row.m),
                listed_betas: Some(row.betas.clone()),
                witness: find_positivity_witness(row.set, config).ok().flatten(),
            });
        }
    }
    out.extend(rest.into_iter().map(|set| MarginalClass {
        row: None,
        set,
        listed_m: None,
        listed_betas: None,
        witness: find_positivity_witness(set, config).ok().flatten(),
    }));
    out
}

pub fn verify_marginal_classes(classes: &[TileSet], config: &SearchConfig) -> Check {
    let mut check = Check::new("marginal positive classes");
    let listed = &tables().table_a3;
    check.expect_eq("class count", classes.len(), listed.len());
    compare_sets(
        &mut check,
        "class",
        &classes.iter().copied().collect(),
        &canonical_set(listed.iter().map(|r| r.set)),
    );
    for row in listed {
        let label = format!("row {}", row.row);
        match find_positivity_witness(row.set, config) {
            Ok(Some(w)) if w.m <= row.m => {}
            Ok(Some(w)) => check.diff(format!(
                "{label}: first witness needs m = {}, listed {}",
                w.m, row.m
            )),
            Ok(None) => check.diff(format!("{label}: no witness found")),
            Err(e) => check.diff(format!("{label}: {e}")),
        }
        let listed_ok = operator_product(row.set, row.m, &row.betas, Direction::Horizontal)
            .map(|p| exceeds_one(&p))
            .unwrap_or(false);
        if !listed_ok {
            check.note(format!(
                "{label}: listed product m = {} betas = {:?} does not exceed one",
                row.m, row.betas
            ));
        }
    }
    check.finish(listed.len())
}
