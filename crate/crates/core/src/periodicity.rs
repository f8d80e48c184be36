//! Periodic patterns, minimal cycle generators and cycle decompositions.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::has_cycle;
use crate::tile::{canonicalize, TileSet};
use crate::transfer::vertical_family;

pub const DEFAULT_PERIOD_BOUND: usize = 6;
/// Smallest period bound for which the generator list is complete.
pub const MIN_PERIOD_BOUND: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodicityError {
    #[error("period bound {0} is below the supported minimum of {MIN_PERIOD_BOUND}")]
    PeriodBoundTooSmall(usize),
    #[error("{0} is not a union of minimal cycle generators")]
    NotACycleUnion(TileSet),
}

/// True iff some horizontal period `a <= period_bound` admits a doubly
/// periodic pattern, i.e. the digraph of `S_{a;1} + S_{a;4}` has a cycle.
pub fn has_periodic_pattern(set: TileSet, period_bound: usize) -> bool {
    (1..=period_bound).any(|a| {
        let family = vertical_family(set, a).expect("width >= 1 and entries bounded");
        let closed = family.components()[0]
            .checked_add(&family.components()[3])
            .expect("entries bounded");
        has_cycle(&closed)
    })
}

/// All minimal cycle generators, sorted by mask.
///
/// Subsets are scanned in order of increasing size; any superset of a
/// generator already found is skipped.
pub fn enumerate_mcgs(period_bound: usize) -> Result<Vec<TileSet>, PeriodicityError> {
    if period_bound < MIN_PERIOD_BOUND {
        return Err(PeriodicityError::PeriodBoundTooSmall(period_bound));
    }
    let mut found: Vec<TileSet> = Vec::new();
    for size in 0..=16 {
        let fresh: Vec<TileSet> = TileSet::all()
            .filter(|s| s.len() == size)
            .filter(|s| !found.iter().any(|g| g.is_subset_of(*s)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|s| has_periodic_pattern(*s, period_bound))
            .collect();
        found.extend(fresh);
    }
    found.sort_unstable();
    Ok(found)
}

/// The minimal cycle generators, computed once per period bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCatalog {
    period_bound: usize,
    generators: Vec<TileSet>,
}

impl GeneratorCatalog {
    pub fn new(period_bound: usize) -> Result<Self, PeriodicityError> {
        Ok(GeneratorCatalog {
            period_bound,
            generators: enumerate_mcgs(period_bound)?,
        })
    }

    /// Shared catalog for [`DEFAULT_PERIOD_BOUND`].
    pub fn standard() -> &'static GeneratorCatalog {
        static CATALOG: OnceLock<GeneratorCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            GeneratorCatalog::new(DEFAULT_PERIOD_BOUND).expect("default bound is valid")
        })
    }

    /// Standard catalog when `period_bound` is the default, otherwise a
    /// freshly enumerated one.
    pub fn for_bound(period_bound: usize) -> Result<GeneratorCatalog, PeriodicityError> {
        if period_bound == DEFAULT_PERIOD_BOUND {
            Ok(Self::standard().clone())
        } else {
            Self::new(period_bound)
        }
    }

    pub fn period_bound(&self) -> usize {
        self.period_bound
    }

    pub fn generators(&self) -> &[TileSet] {
        &self.generators
    }

    /// Generators contained in `set`.
    pub fn contained_in(&self, set: TileSet) -> impl Iterator<Item = TileSet> + '_ {
        self.generators
            .iter()
            .copied()
            .filter(move |g| g.is_subset_of(set))
    }

    /// Canonical representatives of the generator classes, sorted.
    pub fn classes(&self) -> Vec<TileSet> {
        let mut reps: Vec<TileSet> = self.generators.iter().map(|g| canonicalize(*g)).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    pub fn decompose(&self, set: TileSet) -> CycleDecomposition {
        decompose(set, self)
    }
}

/// `B = C_1 ∪ ... ∪ C_k ∪ N`: the generators inside `B` and the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleDecomposition {
    pub generators: Vec<TileSet>,
    pub remainder: TileSet,
}

impl CycleDecomposition {
    pub fn cycle_union(&self) -> TileSet {
        self.generators
            .iter()
            .fold(TileSet::EMPTY, |acc, g| acc.union(*g))
    }

    pub fn has_generators(&self) -> bool {
        !self.generators.is_empty()
    }
}

pub fn decompose(set: TileSet, catalog: &GeneratorCatalog) -> CycleDecomposition {
    let generators: Vec<TileSet> = catalog.contained_in(set).collect();
    let union = generators
        .iter()
        .fold(TileSet::EMPTY, |acc, g| acc.union(*g));
    CycleDecomposition {
        generators,
        remainder: set.difference(union),
    }
}

/// True iff every generator inside `set` lies inside `cycle_union`.
fn admits_no_new_generator(set: TileSet, forbidden: &[TileSet]) -> bool {
    !forbidden.iter().any(|g| g.is_subset_of(set))
}

/// The maximal supersets of `cycle_union` containing no generator beyond
/// those already inside `cycle_union`, sorted by mask.
pub fn maximal_extensions(
    cycle_union: TileSet,
    catalog: &GeneratorCatalog,
) -> Result<Vec<TileSet>, PeriodicityError> {
    if decompose(cycle_union, catalog).cycle_union() != cycle_union {
        return Err(PeriodicityError::NotACycleUnion(cycle_union));
    }
    let forbidden: Vec<TileSet> = catalog
        .generators()
        .iter()
        .copied()
        .filter(|g| !g.is_subset_of(cycle_union))
        .collect();
    let free: Vec<_> = cycle_union.complement().iter().collect();
    let mut maximal = Vec::new();
    let mut stack = vec![(cycle_union, 0usize)];
    // Depth-first over supersets, adding free tiles in increasing order so
    // that each admissible superset is visited exactly once.
    while let Some((set, next)) = stack.pop() {
        let extendable = free
            .iter()
            .any(|t| !set.contains(*t) && admits_no_new_generator(set.with(*t), &forbidden));
        if !extendable {
            maximal.push(set);
        }
        for (i, tile) in free.iter().enumerate().skip(next) {
            let bigger = set.with(*tile);
            if admits_no_new_generator(bigger, &forbidden) {
                stack.push((bigger, i + 1));
            }
        }
    }
    maximal.sort_unstable();
    Ok(maximal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> &'static GeneratorCatalog {
        GeneratorCatalog::standard()
    }

    #[test]
    fn periodic_examples() {
        assert!(has_periodic_pattern(TileSet::from_psis(&[1]), 1));
        assert!(!has_periodic_pattern(TileSet::from_psis(&[5]), 6));
        assert!(!has_periodic_pattern(TileSet::EMPTY, 6));
    }

    #[test]
    fn thirty_eight_generators() {
        let gens = catalog().generators();
        assert_eq!(gens.len(), 38);
        assert!(gens.iter().all(|g| g.len() <= 3));
        assert!(!gens.contains(&TileSet::from_psis(&[1, 6])));
        assert_eq!(catalog().classes().len(), 6);
    }

    #[test]
    fn small_bound_rejected() {
        assert_eq!(
            enumerate_mcgs(5),
            Err(PeriodicityError::PeriodBoundTooSmall(5))
        );
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(TileSet::from_psis(&[1, 3]), catalog());
        assert_eq!(d.generators, vec![TileSet::from_psis(&[1])]);
        assert_eq!(d.remainder, TileSet::from_psis(&[3]));

        let d = decompose(TileSet::from_psis(&[7, 10]), catalog());
        assert_eq!(d.generators, vec![TileSet::from_psis(&[7, 10])]);
        assert_eq!(d.remainder, TileSet::EMPTY);

        let d = decompose(TileSet::from_psis(&[9]), catalog());
        assert!(d.generators.is_empty());
        assert_eq!(d.remainder, TileSet::from_psis(&[9]));
    }

    #[test]
    fn maximal_extension_examples() {
        let o = TileSet::from_psis(&[1]);
        let ext = maximal_extensions(o, catalog()).unwrap();
        assert!(ext.contains(&TileSet::from_psis(&[1, 2, 3, 4, 7, 8, 12])));

        let u = TileSet::from_psis(&[3, 5, 10]);
        assert_eq!(maximal_extensions(u, catalog()).unwrap(), vec![u]);

        let u = TileSet::from_psis(&[1, 5, 12]);
        let ext = maximal_extensions(u, catalog()).unwrap();
        assert!(ext.contains(&TileSet::from_psis(&[1, 5, 9, 10, 12, 13, 14])));
    }

    #[test]
    fn maximal_extensions_require_cycle_union() {
        let bad = TileSet::from_psis(&[1, 3]);
        assert_eq!(
            maximal_extensions(bad, catalog()),
            Err(PeriodicityError::NotACycleUnion(bad))
        );
    }

    #[test]
    fn extensions_are_maximal_and_admissible() {
        let u = TileSet::from_psis(&[1, 6]);
        for ext in maximal_extensions(u, catalog()).unwrap() {
            assert_eq!(decompose(ext, catalog()).cycle_union(), u);
            for tile in ext.complement().iter() {
                assert_ne!(decompose(ext.with(tile), catalog()).cycle_union(), u);
            }
        }
    }
}
