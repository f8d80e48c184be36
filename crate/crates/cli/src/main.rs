mod export;

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::json;

use wang_entropy::census::{pure_cycle_classes, run_census, CensusConfig, CensusError};
use wang_entropy::periodicity::{GeneratorCatalog, DEFAULT_PERIOD_BOUND};
use wang_entropy::spectral::{exceeds_one, spectral_radius};
use wang_entropy::tables::{
    generator_classes, marginal_classes, verify_generator_classes, verify_marginal_classes,
    verify_zero_unions, zero_unions, Check,
};
use wang_entropy::tile::{canonicalize, format_tileset, orbit, TileSet, TileSetStyle};
use wang_entropy::transfer::{brute_force_gamma, gamma, Direction, TransferError};
use wang_entropy::{
    operator_product, BoundError, ClassificationRecord, Classifier, ClassifyError, SearchConfig,
    Verdict,
};

#[derive(Parser)]
#[command(
    name = "wang-entropy",
    version,
    about = "Positivity of spatial entropy for two-color Wang tile sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one tile set.
    Classify {
        /// Tile names (O,E1,...), indices 1..16, or a 0x mask.
        #[arg(long, value_parser = parse_tiles)]
        tiles: TileSet,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Classify every tile set up to symmetry and verify the reference tables.
    Census {
        #[arg(long, default_value = "census.json")]
        out: PathBuf,
        /// Per-class CSV summary; defaults to the JSON path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, env = "WANG_ENTROPY_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print a computed reference table.
    Table {
        which: TableName,
        /// Compare with the embedded copy and fail on any difference.
        #[arg(long)]
        verify: bool,
    },
    /// Count admissible patterns on a lattice of `cols x rows` points.
    Gamma {
        #[arg(long, value_parser = parse_tiles)]
        tiles: TileSet,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        cols: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        rows: u64,
        /// Also count by backtracking and require agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate the lower bound of one operator product.
    Bound {
        #[arg(long, value_parser = parse_tiles)]
        tiles: TileSet,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        m: u64,
        /// Comma-separated boundary indices, each 1 or 4.
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<u8>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Horizontal)]
        direction: DirectionArg,
    },
    /// List the minimal cycle generators.
    Mcg {
        #[arg(long, default_value_t = DEFAULT_PERIOD_BOUND, value_parser = period_bound)]
        period_bound: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct SearchArgs {
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=5))]
    m_max: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=5))]
    k_max: u64,
    #[arg(long, default_value_t = DEFAULT_PERIOD_BOUND, value_parser = period_bound)]
    period_bound: usize,
}

impl SearchArgs {
    fn config(self) -> CensusConfig {
        CensusConfig {
            search: SearchConfig {
                m_max: self.m_max as usize,
                k_max: self.k_max as usize,
            },
            period_bound: self.period_bound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    A1,
    A2,
    A3,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Horizontal,
    Vertical,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Horizontal => Direction::Horizontal,
            DirectionArg::Vertical => Direction::Vertical,
        }
    }
}

fn parse_tiles(text: &str) -> Result<TileSet, String> {
    text.parse::<TileSet>().map_err(|e| e.to_string())
}

fn period_bound(text: &str) -> Result<usize, String> {
    let bound: usize = text.parse().map_err(|e| format!("{e}"))?;
    if !(6..=10).contains(&bound) {
        return Err("period bound must be between 6 and 10".into());
    }
    Ok(bound)
}

/// Failure kinds, mapped onto exit codes 1 to 3.
enum Failure {
    Mismatch(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        let (code, text) = match self {
            Failure::Mismatch(t) => (1, t),
            Failure::Usage(t) => (2, t),
            Failure::Internal(t) => (3, t),
        };
        eprintln!("error: {text}");
        ExitCode::from(code)
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        Failure::Internal(e.to_string())
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Failure {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify {
            tiles,
            json,
            search,
        } => cmd_classify(tiles, json, search),
        Command::Census {
            out,
            csv,
            jobs,
            search,
        } => cmd_census(&out, csv, jobs, search),
        Command::Table { which, verify } => cmd_table(which, verify),
        Command::Gamma {
            tiles,
            cols,
            rows,
            oracle,
        } => cmd_gamma(tiles, cols as usize, rows as usize, oracle),
        Command::Bound {
            tiles,
            m,
            betas,
            direction,
        } => cmd_bound(tiles, m as usize, &betas, direction.into()),
        Command::Mcg { period_bound } => cmd_mcg(period_bound),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.exit(),
    }
}

fn names(set: TileSet) -> String {
    if set.is_empty() {
        return "∅".to_string();
    }
    format_tileset(set, TileSetStyle::Names)
}

fn indices(set: TileSet) -> String {
    if set.is_empty() {
        return "∅".to_string();
    }
    format_tileset(set, TileSetStyle::Indices)
}

fn betas_text(betas: &[u8]) -> String {
    betas
        .iter()
        .map(u8::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn classifier(search: SearchArgs) -> Result<Classifier, Failure> {
    let config = search.config();
    Classifier::new(config.search, config.period_bound).map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_classify(set: TileSet, as_json: bool, search: SearchArgs) -> Outcome {
    let record = classifier(search)?.classify(set)?;
    let orbit_size = orbit(set).len();
    if as_json {
        let value = json!({
            "record": record,
            "orbit_size": orbit_size,
            "bound_bits": record.witness.as_ref().map(|w| w.bound / std::f64::consts::LN_2),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("record serializes")
        );
    } else {
        print_record(&record, orbit_size);
    }
    Ok(())
}

fn print_record(record: &ClassificationRecord, orbit_size: usize) {
    let d = &record.decomposition;
    println!(
        "set:         {}  [{}]",
        names(record.set),
        indices(record.set)
    );
    println!(
        "canonical:   {}  [{}]  orbit size {}",
        names(record.canonical),
        indices(record.canonical),
        orbit_size
    );
    let generators: Vec<String> = d.generators.iter().map(|g| names(*g)).collect();
    println!(
        "generators:  {}",
        if generators.is_empty() {
            "none".to_string()
        } else {
            generators.join(" ")
        }
    );
    println!("remainder:   {}", names(d.remainder));
    println!("verdict:     {}", record.verdict);
    if let Some(w) = &record.witness {
        println!(
            "witness:     {} m={} betas={} rho={:.6} bound={:.6} nats ({:.6} bits)",
            w.direction,
            w.m,
            betas_text(&w.betas),
            w.rho,
            w.bound,
            w.bound / std::f64::consts::LN_2
        );
    }
    if let Some(c) = &record.certificate {
        let container = c.container.map_or("none".to_string(), names);
        println!(
            "certificate: Prop {} with g = {}, container {}",
            c.proposition, c.group_element, container
        );
    }
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn write_all(file: &mut File, path: &Path, bytes: &[u8]) -> Outcome {
    file.write_all(bytes)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_census(out: &Path, csv: Option<PathBuf>, jobs: Option<u64>, search: SearchArgs) -> Outcome {
    let csv_path = csv.unwrap_or_else(|| out.with_extension("csv"));
    let mut json_file = create(out)?;
    let csv_file = create(&csv_path)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool.build().map_err(|e| Failure::Internal(e.to_string()))?;
    let report = pool.install(|| run_census(search.config()))?;

    let mut text = report.to_json();
    text.push('\n');
    write_all(&mut json_file, out, text.as_bytes())?;
    export::write_csv(csv_file, &report)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", csv_path.display())))?;

    println!("{}", report.summary());
    print_checks(&report.checks);
    println!("wrote {} and {}", out.display(), csv_path.display());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(
            "census differs from the reference tables".into(),
        ))
    }
}

fn print_checks(checks: &[Check]) {
    for check in checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({} rows)", check.name, check.rows);
        for diff in &check.diffs {
            println!("  diff: {diff}");
        }
        for note in &check.notes {
            println!("  note: {note}");
        }
    }
}

fn verified(check: Check, verify: bool) -> Outcome {
    if !verify {
        return Ok(());
    }
    print_checks(std::slice::from_ref(&check));
    if check.passed {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} differ from the embedded table",
            check.name
        )))
    }
}

fn cmd_table(which: TableName, verify: bool) -> Outcome {
    let catalog = GeneratorCatalog::standard();
    match which {
        TableName::A1 => {
            let classes = generator_classes(catalog);
            for (i, class) in classes.iter().enumerate() {
                let members: Vec<String> = class.members.iter().map(|m| names(*m)).collect();
                println!(
                    "({}) {}  [{} sets]: {}",
                    i + 1,
                    names(class.representative),
                    members.len(),
                    members.join(" ")
                );
            }
            let total: usize = classes.iter().map(|c| c.members.len()).sum();
            println!("{} classes, {} sets", classes.len(), total);
            verified(verify_generator_classes(catalog), verify)
        }
        TableName::A2 => {
            let zero = zero_pure_cycle_classes(catalog)?;
            for row in zero_unions(&zero, catalog) {
                let label = row.row.map_or("-".to_string(), |r| r.to_string());
                let star = if row.generator { "*" } else { "" };
                for (i, ext) in row.extensions.iter().enumerate() {
                    let prop = ext
                        .certificate
                        .as_ref()
                        .map_or("none".to_string(), |c| c.proposition.to_string());
                    let head = if i == 0 {
                        format!("({label}) {}{star}", indices(row.union))
                    } else {
                        String::new()
                    };
                    println!("{head:<22} N = {:<28} Prop {prop}", indices(ext.remainder));
                }
            }
            verified(verify_zero_unions(&zero, catalog), verify)
        }
        TableName::A3 => {
            let report = run_census(CensusConfig::default())?;
            let marginal = report.sets_where(|r| r.marginal_positive);
            let search = SearchConfig::default();
            for class in marginal_classes(&marginal, &search) {
                let label = class.row.map_or("-".to_string(), |r| r.to_string());
                let listed = match (&class.listed_m, &class.listed_betas) {
                    (Some(m), Some(b)) => format!("m={m} betas={}", betas_text(b)),
                    _ => "unlisted".to_string(),
                };
                let found = class.witness.as_ref().map_or("none".to_string(), |w| {
                    format!("{} m={} betas={}", w.direction, w.m, betas_text(&w.betas))
                });
                println!(
                    "({label}) {:<22} {listed:<22} found {found}",
                    indices(class.set)
                );
            }
            verified(verify_marginal_classes(&marginal, &search), verify)
        }
    }
}

/// Zero-entropy classes among the pure cycle unions.
fn zero_pure_cycle_classes(catalog: &GeneratorCatalog) -> Result<Vec<TileSet>, Failure> {
    let classifier = Classifier::standard();
    let verdicts: Result<Vec<(TileSet, Verdict)>, ClassifyError> = pure_cycle_classes(catalog)
        .into_par_iter()
        .map(|s| classifier.classify(s).map(|r| (s, r.verdict)))
        .collect();
    Ok(verdicts?
        .into_iter()
        .filter(|(_, v)| *v == Verdict::Zero)
        .map(|(s, _)| canonicalize(s))
        .collect())
}

/// Natural logarithm of a big integer, accurate to double precision.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top: BigUint = x >> shift;
    let lead = top.iter_u64_digits().next().unwrap_or(0) as f64;
    lead.ln() + shift as f64 * std::f64::consts::LN_2
}

fn cmd_gamma(set: TileSet, cols: usize, rows: usize, oracle: bool) -> Outcome {
    let count = gamma(set, cols, rows).map_err(|e| Failure::Usage(e.to_string()))?;
    if oracle {
        let check = brute_force_gamma(set, cols, rows).map_err(|e| match e {
            TransferError::TooLarge { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        })?;
        if check != count {
            return Err(Failure::Internal(format!(
                "transfer count {count} differs from backtracking count {check}"
            )));
        }
    }
    println!("gamma({cols}x{rows}) = {count}");
    if count == BigUint::from(0u8) {
        println!("no admissible patterns");
    } else {
        let ln = ln_big(&count);
        let per_point = ln / (cols * rows) as f64;
        let per_cell = ln / ((cols - 1) * (rows - 1)) as f64;
        println!(
            "ln(gamma)/(p q)         = {per_point:.9} nats ({:.9} bits)",
            per_point / std::f64::consts::LN_2
        );
        println!(
            "ln(gamma)/((p-1)(q-1))  = {per_cell:.9} nats ({:.9} bits)",
            per_cell / std::f64::consts::LN_2
        );
    }
    if oracle {
        println!("backtracking count agrees");
    }
    Ok(())
}

fn cmd_bound(set: TileSet, m: usize, betas: &[u8], direction: Direction) -> Outcome {
    let product = operator_product(set, m, betas, direction).map_err(|e| match e {
        BoundError::EmptyBetas | BoundError::InvalidBeta(_) => Failure::Usage(e.to_string()),
        other => Failure::Internal(other.to_string()),
    })?;
    println!(
        "product of {} {} operators at m={}: {}x{}",
        betas.len(),
        direction,
        m,
        product.dim(),
        product.dim()
    );
    println!("exceeds one: {}", exceeds_one(&product));
    let rho = spectral_radius(&product);
    if rho == 0.0 {
        println!("rho = 0: no admissible rows, no bound");
        return Ok(());
    }
    let bound = rho.ln() / (m * betas.len()) as f64;
    println!("rho = {rho:.10}");
    println!(
        "bound = {bound:.10} nats ({:.10} bits)",
        bound / std::f64::consts::LN_2
    );
    Ok(())
}

fn cmd_mcg(period_bound: usize) -> Outcome {
    let catalog =
        GeneratorCatalog::for_bound(period_bound).map_err(|e| Failure::Usage(e.to_string()))?;
    let classes = catalog.classes();
    for g in catalog.generators() {
        let class = classes
            .iter()
            .position(|c| *c == canonicalize(*g))
            .unwrap_or(0)
            + 1;
        println!("{:<16} [{}]  class {}", names(*g), indices(*g), class);
    }
    println!(
        "{} generators in {} classes",
        catalog.generators().len(),
        classes.len()
    );
    Ok(())
}
