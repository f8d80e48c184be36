//! Classification of every tile set up to symmetry, with the derived
//! boundary classes and the comparison against the reference tables.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bound::{SearchConfig, SpectralAudit};
use crate::classify::{ClassificationRecord, Classifier, ClassifyError, Verdict};
use crate::fixtures::{saturated_rows, tables};
use crate::periodicity::{GeneratorCatalog, PeriodicityError, DEFAULT_PERIOD_BOUND};
use crate::tables::{verify_generator_classes, verify_marginal_classes, verify_zero_unions, Check};
use crate::tile::{canonicalize, format_tileset, orbit, TileSet, TileSetStyle};
use crate::transfer::gamma;

/// Largest square checked when confirming that a set admits no tiling.
pub const VANISHING_SIZE_LIMIT: usize = 12;
/// Largest number of generators combined into a pure cycle union.
pub const PURE_CYCLE_MAX_GENERATORS: usize = 5;

const EXPECTED_PURE_CYCLE_CLASSES: usize = 1218;
const EXPECTED_PURE_CYCLE_POSITIVE: usize = 1187;
/// A second figure printed once for the positive pure-cycle classes.
const MISPRINTED_PURE_CYCLE_POSITIVE: usize = 1189;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub search: SearchConfig,
    pub period_bound: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            search: SearchConfig::default(),
            period_bound: DEFAULT_PERIOD_BOUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub classification: ClassificationRecord,
    pub orbit_size: usize,
    /// The set is itself a minimal cycle generator.
    pub generator: bool,
    /// The set is a union of at most five generators.
    pub pure_cycle: bool,
    pub marginal_positive: bool,
    pub saturated_zero: bool,
    /// For sets without generators: the least `q` with `gamma(set, q, q) = 0`.
    pub vanishing_size: Option<usize>,
    pub spectral_checks: u64,
    pub spectral_disagreements: Vec<String>,
}

impl CensusRecord {
    pub fn set(&self) -> TileSet {
        self.classification.set
    }

    pub fn verdict(&self) -> Verdict {
        self.classification.verdict
    }
}

/// Counts derived from the record list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub canonical_classes: usize,
    pub tile_sets: usize,
    pub generators: usize,
    pub generator_classes: usize,
    pub pure_cycle_classes: usize,
    pub pure_cycle_positive: usize,
    pub pure_cycle_zero: usize,
    pub positive_classes: usize,
    pub zero_classes: usize,
    pub empty_subshift_classes: usize,
    pub marginal_positive_classes: usize,
    pub saturated_zero_classes: usize,
    pub spectral_checks: u64,
    pub spectral_disagreements: usize,
}

impl CensusSummary {
    pub fn from_records(records: &[CensusRecord]) -> CensusSummary {
        let mut s = CensusSummary::default();
        for r in records {
            s.canonical_classes += 1;
            s.tile_sets += r.orbit_size;
            if r.generator {
                s.generators += r.orbit_size;
                s.generator_classes += 1;
            }
            match r.verdict() {
                Verdict::Positive => s.positive_classes += 1,
                Verdict::Zero => s.zero_classes += 1,
                Verdict::EmptySubshift => s.empty_subshift_classes += 1,
            }
            if r.pure_cycle {
                s.pure_cycle_classes += 1;
                match r.verdict() {
                    Verdict::Positive => s.pure_cycle_positive += 1,
                    Verdict::Zero => s.pure_cycle_zero += 1,
                    Verdict::EmptySubshift => {}
                }
            }
            s.marginal_positive_classes += r.marginal_positive as usize;
            s.saturated_zero_classes += r.saturated_zero as usize;
            s.spectral_checks += r.spectral_checks;
            s.spectral_disagreements += r.spectral_disagreements.len();
        }
        s
    }
}

/// The census output. The summary is always recomputed from `records`.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub tool_version: String,
    pub config: CensusConfig,
    pub checks: Vec<Check>,
    pub records: Vec<CensusRecord>,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    tool_version: &'a str,
    config: &'a CensusConfig,
    summary: CensusSummary,
    checks: &'a [Check],
    records: &'a [CensusRecord],
}

#[derive(Deserialize)]
struct ReportIn {
    tool_version: String,
    config: CensusConfig,
    #[allow(dead_code)]
    summary: Option<IgnoredAny>,
    checks: Vec<Check>,
    records: Vec<CensusRecord>,
}

impl Serialize for CensusReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ReportOut {
            tool_version: &self.tool_version,
            config: &self.config,
            summary: self.summary(),
            checks: &self.checks,
            records: &self.records,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CensusReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = ReportIn::deserialize(deserializer)?;
        Ok(CensusReport {
            tool_version: r.tool_version,
            config: r.config,
            checks: r.checks,
            records: r.records,
        })
    }
}

impl CensusReport {
    pub fn summary(&self) -> CensusSummary {
        CensusSummary::from_records(&self.records)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The record of the class containing `set`.
    pub fn record(&self, set: TileSet) -> Option<&CensusRecord> {
        let canonical = canonicalize(set);
        self.records
            .binary_search_by_key(&canonical, |r| r.set())
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn sets_where(&self, pred: impl Fn(&CensusRecord) -> bool) -> Vec<TileSet> {
        self.records
            .iter()
            .filter(|r| pred(r))
            .map(|r| r.set())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<CensusReport> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Catalog(#[from] PeriodicityError),
    #[error("{}", describe_failures(.0))]
    Classification(Vec<(TileSet, ClassifyError)>),
}

fn describe_failures(failures: &[(TileSet, ClassifyError)]) -> String {
    let mut text = format!("{} classes failed to classify", failures.len());
    for (_, err) in failures.iter().take(10) {
        text.push_str(&format!("\n  {err}"));
    }
    if failures.len() > 10 {
        text.push_str(&format!("\n  ... and {} more", failures.len() - 10));
    }
    text
}

/// Canonical forms of all 65,536 tile sets, ascending.
pub fn canonical_classes() -> Vec<TileSet> {
    canonical_table()
        .iter()
        .enumerate()
        .filter(|(mask, c)| **c as usize == *mask)
        .map(|(mask, _)| TileSet::from_mask(mask as u16))
        .collect()
}

/// `canonical_table()[mask]` is the canonical mask of `mask`.
fn canonical_table() -> Vec<u16> {
    (0..=u16::MAX)
        .into_par_iter()
        .map(|m| canonicalize(TileSet::from_mask(m)).mask())
        .collect()
}

/// Canonical forms of unions of one to five distinct generators.
pub fn pure_cycle_classes(catalog: &GeneratorCatalog) -> Vec<TileSet> {
    let gens = catalog.generators();
    let mut seen = vec![false; 1 << 16];
    fn extend(gens: &[TileSet], start: usize, acc: TileSet, depth: usize, seen: &mut [bool]) {
        for i in start..gens.len() {
            let next = acc.union(gens[i]);
            seen[next.mask() as usize] = true;
            if depth + 1 < PURE_CYCLE_MAX_GENERATORS {
                extend(gens, i + 1, next, depth + 1, seen);
            }
        }
    }
    extend(gens, 0, TileSet::EMPTY, 0, &mut seen);
    let classes: BTreeSet<TileSet> = seen
        .iter()
        .enumerate()
        .filter(|(_, s)| **s)
        .map(|(m, _)| canonicalize(TileSet::from_mask(m as u16)))
        .collect();
    classes.into_iter().collect()
}

/// Least `q <= limit` with `gamma(set, q, q) = 0` (`q` lattice points a side).
pub fn vanishing_size(set: TileSet, limit: usize) -> Option<usize> {
    (2..=limit).find(|&q| gamma(set, q, q).map(|g| g.is_zero()).unwrap_or(false))
}

fn verdict_lookup<'a>(
    canon: &'a [u16],
    verdicts: &'a [Option<Verdict>],
) -> impl Fn(TileSet) -> Verdict + 'a {
    move |set| verdicts[canon[set.mask() as usize] as usize].expect("every class is classified")
}

/// Classifies every canonical class in parallel and checks the results.
pub fn run_census(config: CensusConfig) -> Result<CensusReport, CensusError> {
    let classifier = Classifier::new(config.search, config.period_bound)?;
    let catalog = classifier.catalog();
    let canon = canonical_table();
    let classes = canonical_classes();

    let outcomes: Vec<Result<(ClassificationRecord, SpectralAudit), (TileSet, ClassifyError)>> =
        classes
            .par_iter()
            .map(|&set| {
                let mut audit = SpectralAudit::default();
                classifier
                    .classify_audited(set, &mut audit)
                    .map(|r| (r, audit))
                    .map_err(|e| (set, e))
            })
            .collect();
    let mut classified = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(pair) => classified.push(pair),
            Err(failure) => failures.push(failure),
        }
    }
    if !failures.is_empty() {
        return Err(CensusError::Classification(failures));
    }

    let mut verdicts = vec![None; 1 << 16];
    for (record, _) in &classified {
        verdicts[record.set.mask() as usize] = Some(record.verdict);
    }
    let verdict_of = verdict_lookup(&canon, &verdicts);
    let pure: BTreeSet<TileSet> = pure_cycle_classes(catalog).into_iter().collect();
    let generator_classes: BTreeSet<TileSet> = catalog.classes().into_iter().collect();

    let records: Vec<CensusRecord> = classified
        .into_par_iter()
        .map(|(classification, audit)| {
            let set = classification.set;
            let verdict = classification.verdict;
            let marginal_positive = verdict == Verdict::Positive
                && set
                    .iter()
                    .all(|t| verdict_of(set.without(t)) != Verdict::Positive);
            let saturated_zero = verdict == Verdict::Zero
                && set
                    .complement()
                    .iter()
                    .all(|t| verdict_of(set.with(t)) == Verdict::Positive);
            let vanishing = (verdict == Verdict::EmptySubshift)
                .then(|| vanishing_size(set, VANISHING_SIZE_LIMIT))
                .flatten();
            CensusRecord {
                orbit_size: orbit(set).len(),
                generator: generator_classes.contains(&set),
                pure_cycle: pure.contains(&set),
                marginal_positive,
                saturated_zero,
                vanishing_size: vanishing,
                spectral_checks: audit.checked,
                spectral_disagreements: audit.disagreements,
                classification,
            }
        })
        .collect();

    let mut report = CensusReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        checks: Vec::new(),
        records,
    };
    report.checks = run_checks(&report, catalog, &canon, &verdicts);
    Ok(report)
}

fn run_checks(
    report: &CensusReport,
    catalog: &GeneratorCatalog,
    canon: &[u16],
    verdicts: &[Option<Verdict>],
) -> Vec<Check> {
    let verdict_of = verdict_lookup(canon, verdicts);
    let zero_unions = report.sets_where(|r| r.pure_cycle && r.verdict() == Verdict::Zero);
    let marginal = report.sets_where(|r| r.marginal_positive);
    vec![
        check_counts(report),
        verify_generator_classes(catalog),
        verify_zero_unions(&zero_unions, catalog),
        verify_marginal_classes(&marginal, &report.config.search),
        check_saturated(report, &verdict_of),
        check_dichotomy(report),
        check_invariants(report, &verdict_of),
    ]
}

fn check_counts(report: &CensusReport) -> Check {
    let s = report.summary();
    let t = tables();
    let mut check = Check::new("headline counts");
    check.expect_eq("tile sets", s.tile_sets, 1 << 16);
    check.expect_eq(
        "generators",
        s.generators,
        t.table_a1.iter().map(|r| r.members.len()).sum(),
    );
    check.expect_eq("generator classes", s.generator_classes, t.table_a1.len());
    check.expect_eq(
        "pure-cycle classes",
        s.pure_cycle_classes,
        EXPECTED_PURE_CYCLE_CLASSES,
    );
    check.expect_eq(
        "pure-cycle positive",
        s.pure_cycle_positive,
        EXPECTED_PURE_CYCLE_POSITIVE,
    );
    check.expect_eq("pure-cycle zero", s.pure_cycle_zero, t.table_a2.len());
    check.expect_eq(
        "marginal positive classes",
        s.marginal_positive_classes,
        t.table_a3.len(),
    );
    check.expect_eq(
        "saturated zero classes",
        s.saturated_zero_classes,
        saturated_rows().count(),
    );
    check.note(format!(
        "positive pure-cycle classes found: {} (reference figures {} and {})",
        s.pure_cycle_positive, EXPECTED_PURE_CYCLE_POSITIVE, MISPRINTED_PURE_CYCLE_POSITIVE
    ));
    check.finish(8)
}

fn check_saturated(report: &CensusReport, verdict_of: &impl Fn(TileSet) -> Verdict) -> Check {
    let mut check = Check::new("saturated zero classes");
    let found: BTreeSet<TileSet> = report
        .sets_where(|r| r.saturated_zero)
        .into_iter()
        .collect();
    let listed: BTreeSet<TileSet> = saturated_rows()
        .flat_map(|r| r.containers())
        .map(canonicalize)
        .collect();
    for extra in found.difference(&listed) {
        check.diff(format!("computed {} is not listed", fmt_set(*extra)));
    }
    for missing in listed.difference(&found) {
        check.diff(format!("listed {} was not computed", fmt_set(*missing)));
    }
    for &set in &found {
        for t in set.complement().iter() {
            if verdict_of(set.with(t)) != Verdict::Positive {
                check.diff(format!(
                    "{} plus {} is not positive",
                    fmt_set(set),
                    t.name()
                ));
            }
        }
    }
    check.finish(listed.len())
}

fn images(sets: &[TileSet]) -> Vec<TileSet> {
    let mut all: Vec<TileSet> = sets.iter().flat_map(|s| orbit(*s)).collect();
    all.sort_unstable();
    all.dedup();
    all
}

fn check_dichotomy(report: &CensusReport) -> Check {
    let mut check = Check::new("dichotomy");
    let marginal = images(&report.sets_where(|r| r.marginal_positive));
    let saturated = images(&report.sets_where(|r| r.saturated_zero));
    for r in &report.records {
        let set = r.set();
        let label = fmt_set(set);
        let verdict = r.verdict();
        let above_marginal = marginal.iter().any(|m| m.is_subset_of(set));
        let below_saturated = saturated.iter().any(|s| set.is_subset_of(*s));
        let has_generators = r.classification.decomposition.has_generators();
        if (verdict == Verdict::Positive) != above_marginal {
            check.diff(format!(
                "{label}: {verdict} but contains marginal set = {above_marginal}"
            ));
        }
        if has_generators && (verdict == Verdict::Zero) != below_saturated {
            check.diff(format!(
                "{label}: {verdict} but inside saturated set = {below_saturated}"
            ));
        }
        if (verdict == Verdict::EmptySubshift) != !has_generators {
            check.diff(format!(
                "{label}: {verdict} with generators = {has_generators}"
            ));
        }
        if verdict == Verdict::EmptySubshift && r.vanishing_size.is_none() {
            check.diff(format!(
                "{label}: still has {n} x {n} patterns",
                n = VANISHING_SIZE_LIMIT
            ));
        }
        if (verdict == Verdict::Positive) != r.classification.witness.is_some()
            || (verdict == Verdict::Zero) != r.classification.certificate.is_some()
        {
            check.diff(format!(
                "{label}: evidence does not match verdict {verdict}"
            ));
        }
    }
    check.finish(report.records.len())
}

fn check_invariants(report: &CensusReport, verdict_of: &impl Fn(TileSet) -> Verdict) -> Check {
    let mut check = Check::new("invariants");
    for r in &report.records {
        let set = r.set();
        let verdict = r.verdict();
        for d in &r.spectral_disagreements {
            check.diff(format!("spectral disagreement: {d}"));
        }
        let union = r.classification.decomposition.cycle_union();
        if r.classification.decomposition.has_generators() && verdict_of(union) != verdict {
            check.diff(format!(
                "{}: {verdict} but its cycle union is {}",
                fmt_set(set),
                verdict_of(union)
            ));
        }
        for t in set.complement().iter() {
            let bigger = verdict_of(set.with(t));
            let monotone = match verdict {
                Verdict::Positive => bigger == Verdict::Positive,
                Verdict::Zero => bigger != Verdict::EmptySubshift,
                Verdict::EmptySubshift => true,
            };
            if !monotone {
                check.diff(format!(
                    "{}: {verdict} but adding {} gives {bigger}",
                    fmt_set(set),
                    t.name()
                ));
            }
        }
        if let Some(cert) = &r.classification.certificate {
            if !cert.verify(set) {
                check.diff(format!("{}: certificate does not re-check", fmt_set(set)));
            }
        }
    }
    check.finish(report.records.len())
}

fn fmt_set(set: TileSet) -> String {
    format_tileset(set, TileSetStyle::Indices)
}

impl fmt::Display for CensusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "minimal cycle generators: {} in {} classes",
            self.generators, self.generator_classes
        )?;
        writeln!(
            f,
            "pure-cycle classes: {} ({} positive, {} zero)",
            self.pure_cycle_classes, self.pure_cycle_positive, self.pure_cycle_zero
        )?;
        writeln!(
            f,
            "marginal positive-entropy classes: {}",
            self.marginal_positive_classes
        )?;
        write!(
            f,
            "saturated zero-entropy classes: {}",
            self.saturated_zero_classes
        )
    }
}
