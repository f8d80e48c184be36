//! The positivity decision for a single tile set.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bound::{
    find_positivity_witness_audited, BoundError, PositivityWitness, SearchConfig, SpectralAudit,
};
use crate::certificate::{certify_zero, ZeroCertificate};
use crate::fixtures::{saturated_rows, tables};
use crate::periodicity::{
    CycleDecomposition, GeneratorCatalog, PeriodicityError, DEFAULT_PERIOD_BOUND,
};
use crate::tile::{canonicalize, orbit, TileSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    Zero,
    EmptySubshift,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Positive => "positive",
            Verdict::Zero => "zero",
            Verdict::EmptySubshift => "empty-subshift",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub set: TileSet,
    pub canonical: TileSet,
    pub decomposition: CycleDecomposition,
    pub verdict: Verdict,
    pub witness: Option<PositivityWitness>,
    pub certificate: Option<ZeroCertificate>,
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("witness search exhausted for {0}: no positivity witness and no zero certificate")]
    WitnessSearchExhausted(TileSet),
    #[error("{set} classified {verdict} but {detail}")]
    BoundaryMismatch {
        set: TileSet,
        verdict: Verdict,
        detail: &'static str,
    },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Periodicity(#[from] PeriodicityError),
}

/// Every image of the listed marginal positive and saturated zero sets.
#[derive(Clone, Debug)]
struct Boundary {
    marginal: Vec<TileSet>,
    saturated: Vec<TileSet>,
}

impl Boundary {
    fn from_tables() -> Boundary {
        let images = |sets: Vec<TileSet>| {
            let mut all: Vec<TileSet> = sets.into_iter().flat_map(orbit).collect();
            all.sort_unstable();
            all.dedup();
            all
        };
        Boundary {
            marginal: images(tables().table_a3.iter().map(|r| r.set).collect()),
            saturated: images(saturated_rows().flat_map(|r| r.containers()).collect()),
        }
    }

    fn check(&self, set: TileSet, verdict: Verdict) -> Result<(), ClassifyError> {
        let contains_marginal = self.marginal.iter().any(|m| m.is_subset_of(set));
        let detail = match verdict {
            Verdict::Positive if !contains_marginal => "it contains no marginal positive set",
            Verdict::Zero if contains_marginal => "it contains a marginal positive set",
            Verdict::Zero if !self.saturated.iter().any(|s| set.is_subset_of(*s)) => {
                "it lies in no saturated zero set"
            }
            _ => return Ok(()),
        };
        Err(ClassifyError::BoundaryMismatch {
            set,
            verdict,
            detail,
        })
    }
}

/// Classifies tile sets with a fixed generator catalog and search bounds.
#[derive(Clone, Debug)]
pub struct Classifier {
    catalog: GeneratorCatalog,
    config: SearchConfig,
    boundary: Option<Boundary>,
}

impl Classifier {
    pub fn new(config: SearchConfig, period_bound: usize) -> Result<Classifier, PeriodicityError> {
        Ok(Classifier {
            catalog: GeneratorCatalog::for_bound(period_bound)?,
            config,
            boundary: Some(Boundary::from_tables()),
        })
    }

    /// Default bounds: `m, k <= 5`, period bound 6.
    pub fn standard() -> Classifier {
        Classifier::new(SearchConfig::default(), DEFAULT_PERIOD_BOUND)
            .expect("default bound is valid")
    }

    /// Skips the cross-check against the reference boundary sets.
    pub fn without_boundary_check(mut self) -> Classifier {
        self.boundary = None;
        self
    }

    pub fn catalog(&self) -> &GeneratorCatalog {
        &self.catalog
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    pub fn classify(&self, set: TileSet) -> Result<ClassificationRecord, ClassifyError> {
        self.classify_audited(set, &mut SpectralAudit::default())
    }

    pub fn classify_audited(
        &self,
        set: TileSet,
        audit: &mut SpectralAudit,
    ) -> Result<ClassificationRecord, ClassifyError> {
        let canonical = canonicalize(set);
        let decomposition = self.catalog.decompose(set);
        let mut record = ClassificationRecord {
            set,
            canonical,
            decomposition,
            verdict: Verdict::EmptySubshift,
            witness: None,
            certificate: None,
        };
        if !record.decomposition.has_generators() {
            return Ok(record);
        }
        if let Some(witness) = find_positivity_witness_audited(set, &self.config, audit)? {
            record.verdict = Verdict::Positive;
            record.witness = Some(witness);
        } else if let Some(certificate) = certify_zero(set, &self.catalog) {
            record.verdict = Verdict::Zero;
            record.certificate = Some(certificate);
        } else {
            return Err(ClassifyError::WitnessSearchExhausted(set));
        }
        if let Some(boundary) = &self.boundary {
            boundary.check(canonical, record.verdict)?;
        }
        Ok(record)
    }
}

/// Classifies with [`Classifier::standard`].
pub fn classify(set: TileSet) -> Result<ClassificationRecord, ClassifyError> {
    use std::sync::OnceLock;
    static STANDARD: OnceLock<Classifier> = OnceLock::new();
    STANDARD.get_or_init(Classifier::standard).classify(set)
}
