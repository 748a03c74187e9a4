//! `entangle`: enumerate and classify entanglement groups, reproduce the
//! frequency tables, run the pre-twist search, verify explicit models and
//! run the specialization census.

mod catalog;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entangle::census::{census_with_budget, CensusReport, DEFAULT_HEIGHT_BUDGET};
use entangle::classify::{
    classify_groups, construct_g6d, detect_entanglement, match_maximal, maximal_filter,
    permissible_splits, pretwist_search_on, table_rows, Classified, EntanglementRecord, TableRow,
};
use entangle::goursat::decompose;
use entangle::group::GroupFile;
use entangle::invariants::{invariants_report, InvariantsReport};
use entangle::lattice::{filter_exact_level, subgroup_classes_composite, DEFAULT_BUDGET};
use entangle::ratfield::{verify_all, ModelReport, ModelSelection};
use entangle::{Error, MatGroup};

use catalog::Catalogs;

/// Levels covered by default; others need `--extended`.
const DEFAULT_LEVELS: [u32; 6] = [6, 10, 12, 15, 18, 20];

#[derive(Parser)]
#[command(name = "entangle", version, about)]
struct Cli {
    /// Worker threads; output does not depend on this value.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Work budget: ambient group order for enumeration, height for the
    /// census.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Catalog cache directory (default: $ENTANGLE_CACHE_DIR, then the
    /// user cache directory).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Disable the catalog cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Output destination; `-` is standard output.
    #[arg(short = 'o', long, global = true, default_value = "-")]
    output: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup catalogs, invariants and decompositions.
    #[command(subcommand)]
    Groups(GroupsCommand),
    /// Frequency tables of non-abelian entanglements.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Maximal genus-zero non-abelian entanglement groups.
    Maximal(MaximalArgs),
    /// Pre-twist search at one level.
    Pretwist(PretwistArgs),
    /// Constructions of named families.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Exact verification of explicit models.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Height census of specializations.
    Census(CensusArgs),
}

#[derive(Subcommand)]
enum GroupsCommand {
    /// Subgroup classes of exact GL₂-level m.
    Enumerate {
        #[arg(long)]
        level: u32,
        /// Restrict to the given genus (only 0 is supported).
        #[arg(long)]
        genus: Option<u64>,
        /// Emit entanglement records of classes with a non-abelian common quotient.
        #[arg(long)]
        nonabelian: bool,
    },
    /// Level, curve invariants, genus, twist independence and admissibility.
    Invariants { file: PathBuf },
    /// Goursat decomposition along a coprime split.
    Decompose {
        file: PathBuf,
        #[arg(long, value_parser = parse_split)]
        split: (u32, u32),
    },
    /// The named groups of the classification, as group files.
    Named {
        /// G6, G10, G15, G18, G(6), or a detection group such as G9,2.
        #[arg(long)]
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum TablesCommand {
    /// Per-split counts by quotient type.
    Reproduce {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LEVELS)]
        levels: Vec<u32>,
        /// Allow levels beyond the default set.
        #[arg(long)]
        extended: bool,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
}

#[derive(Args)]
struct MaximalArgs {
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LEVELS)]
    levels: Vec<u32>,
    #[arg(long)]
    extended: bool,
}

#[derive(Args)]
struct PretwistArgs {
    #[arg(long)]
    level: u32,
    /// Defaults to every permissible split.
    #[arg(long, value_parser = parse_split)]
    split: Option<(u32, u32)>,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// The D₆-family group for a fundamental discriminant D.
    G6d {
        #[arg(long = "D", allow_hyphen_values = true)]
        d: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "10")]
    L10,
    #[value(name = "15")]
    L15,
    #[value(name = "18")]
    L18,
    Ed,
    Factors,
    All,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Identity checks; exit status 2 when any identity fails.
    Models {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        /// Discriminants for the E_D family.
        #[arg(long = "D", value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-3i64, 5, 8])]
        d: Vec<i64>,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long = "T")]
    t: u64,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<u64>,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
}

fn parse_split(s: &str) -> std::result::Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected m1,m2, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Failure classes mapped to exit codes.
enum Failure {
    Verification(String),
    Library(Error),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx {
    budget: Option<u64>,
    output: String,
    catalogs: Catalogs,
}

impl Ctx {
    fn emit(&self, text: &str) -> CliResult<()> {
        if self.output == "-" {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            out.flush()?;
        } else {
            fs::write(&self.output, text)?;
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let text =
            serde_json::to_string_pretty(value).map_err(|e| Failure::Other(e.to_string()))?;
        self.emit(&text)
    }

    fn records(&self, level: u32) -> CliResult<Vec<Classified>> {
        Ok(classify_groups(
            &self.catalogs.genus0_exact(level, self.group_budget())?,
        )?)
    }

    fn group_budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }
}

fn read_group(path: &PathBuf) -> CliResult<MatGroup> {
    let text = fs::read_to_string(path)?;
    let file: GroupFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    Ok(file.to_group()?)
}

fn check_levels(levels: &[u32], extended: bool) -> CliResult<()> {
    if !extended {
        if let Some(l) = levels.iter().find(|l| !DEFAULT_LEVELS.contains(l)) {
            return Err(Failure::Other(format!(
                "level {l} is outside the default set {DEFAULT_LEVELS:?}; pass --extended"
            )));
        }
    }
    Ok(())
}

fn named_group(name: &str) -> Option<MatGroup> {
    use entangle::classify::{detection_groups, maximal_groups, serre_level6_group};
    let key = name.trim().to_ascii_uppercase();
    if key == "G(6)" {
        return Some(serre_level6_group());
    }
    if let Some(level) = key.strip_prefix('G').and_then(|s| s.parse::<u32>().ok()) {
        return maximal_groups()
            .into_iter()
            .find(|(l, _)| *l == level)
            .map(|x| x.1);
    }
    detection_groups()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(&key))
        .map(|x| x.1)
}

#[derive(Serialize)]
struct ConstructReport {
    group: GroupFile,
    invariants: InvariantsReport,
    entanglement: Option<EntanglementRecord>,
}

fn table_csv(rows: &[TableRow]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(["m", "m1", "m2", "total", "D3", "D6", "Dic3"])
        .map_err(|e| Failure::Other(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Other(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn census_csv(report: &CensusReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "T",
        "total",
        "excluded",
        "t2",
        "t6",
        "t9",
        "t18",
        "union",
        "serre_ratio",
    ])
    .map_err(|e| Failure::Other(e.to_string()))?;
    for r in &report.checkpoints {
        let c = r.exceptional_by_map;
        w.write_record([
            r.t.to_string(),
            r.total.to_string(),
            r.excluded.to_string(),
            c.t2.to_string(),
            c.t6.to_string(),
            c.t9.to_string(),
            c.t18.to_string(),
            c.union.to_string(),
            format!("{:.8}", r.serre_ratio),
        ])
        .map_err(|e| Failure::Other(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn run(cli: Cli) -> CliResult<()> {
    let cache_dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir
            .or_else(|| std::env::var_os("ENTANGLE_CACHE_DIR").map(PathBuf::from))
            .or_else(default_cache_dir)
    };
    let ctx = Ctx {
        budget: cli.budget,
        output: cli.output,
        catalogs: Catalogs::new(cache_dir),
    };
    match cli.command {
        Command::Groups(GroupsCommand::Enumerate {
            level,
            genus,
            nonabelian,
        }) => {
            if genus.is_some_and(|g| g != 0) {
                return Err(Failure::Other("only --genus 0 is supported".into()));
            }
            if nonabelian {
                let records: Vec<EntanglementRecord> =
                    ctx.records(level)?.into_iter().map(|c| c.record).collect();
                return ctx.emit_json(&records);
            }
            let groups = if genus == Some(0) {
                ctx.catalogs.genus0_exact(level, ctx.group_budget())?
            } else {
                filter_exact_level(
                    &subgroup_classes_composite(level, ctx.group_budget())?,
                    level,
                )
            };
            let files: Vec<GroupFile> = groups.iter().map(GroupFile::catalog_entry).collect();
            ctx.emit_json(&files)
        }
        Command::Groups(GroupsCommand::Invariants { file }) => {
            let g = read_group(&file)?;
            ctx.emit_json(&invariants_report(&g))
        }
        Command::Groups(GroupsCommand::Decompose { file, split }) => {
            let g = read_group(&file)?;
            ctx.emit_json(&decompose(&g, split.0, split.1)?.report())
        }
        Command::Groups(GroupsCommand::Named { name }) => {
            let g = named_group(&name)
                .ok_or_else(|| Failure::Other(format!("unknown group name {name:?}")))?;
            ctx.emit_json(&GroupFile::catalog_entry(&g))
        }
        Command::Tables(TablesCommand::Reproduce {
            levels,
            extended,
            out,
        }) => {
            check_levels(&levels, extended)?;
            let mut rows = Vec::new();
            for &m in &levels {
                let records: Vec<EntanglementRecord> =
                    ctx.records(m)?.into_iter().map(|c| c.record).collect();
                rows.extend(table_rows(m, &records));
            }
            match out {
                Format::Csv => ctx.emit(&table_csv(&rows)?),
                Format::Json => ctx.emit_json(&rows),
            }
        }
        Command::Maximal(args) => {
            check_levels(&args.levels, args.extended)?;
            // Every divisor level that can host a strict supergroup is included.
            let mut levels: Vec<u32> = args
                .levels
                .iter()
                .flat_map(|&m| entangle::modarith::divisors(m))
                .filter(|&d| entangle::modarith::prime_powers(d).len() >= 2)
                .collect();
            levels.sort_unstable();
            levels.dedup();
            let mut items = Vec::new();
            for m in levels {
                items.extend(ctx.records(m)?);
            }
            maximal_filter(&mut items)?;
            ctx.emit_json(&match_maximal(&items)?)
        }
        Command::Pretwist(args) => {
            let splits = match args.split {
                Some(s) => vec![s],
                None => permissible_splits(args.level),
            };
            let groups = ctx.catalogs.genus0_exact(args.level, ctx.group_budget())?;
            let reports = splits
                .into_iter()
                .map(|(m1, m2)| pretwist_search_on(&groups, args.level, m1, m2))
                .collect::<entangle::Result<Vec<_>>>()?;
            ctx.emit_json(&reports)
        }
        Command::Construct(ConstructCommand::G6d { d }) => {
            let g = construct_g6d(d)?;
            ctx.emit_json(&ConstructReport {
                group: GroupFile::catalog_entry(&g),
                invariants: invariants_report(&g),
                entanglement: detect_entanglement(&g)?,
            })
        }
        Command::Verify(VerifyCommand::Models { which, d }) => {
            let mut sel = Vec::new();
            if matches!(which, Which::L10 | Which::All) {
                sel.push(ModelSelection::Level10);
            }
            if matches!(which, Which::L15 | Which::All) {
                sel.push(ModelSelection::Level15);
            }
            if matches!(which, Which::L18 | Which::All) {
                sel.push(ModelSelection::Level18);
            }
            if matches!(which, Which::Factors | Which::All) {
                sel.push(ModelSelection::FactorLemmas);
            }
            if matches!(which, Which::Ed | Which::All) {
                sel.extend(d.iter().map(|&x| ModelSelection::Ed(x)));
            }
            let reports: Vec<ModelReport> = verify_all(&sel);
            ctx.emit_json(&reports)?;
            match reports
                .iter()
                .find_map(|r| r.first_failure().map(|c| (r, c)))
            {
                Some((r, c)) => Err(Failure::Verification(format!(
                    "identity failed: {}: {}",
                    r.model, c.name
                ))),
                None => Ok(()),
            }
        }
        Command::Census(args) => {
            let budget = ctx.budget.unwrap_or(DEFAULT_HEIGHT_BUDGET);
            let report = census_with_budget(args.t, &args.checkpoints, budget)?;
            match args.out {
                Format::Csv => ctx.emit(&census_csv(&report)?),
                Format::Json => ctx.emit_json(&report),
            }
        }
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("entangle"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("entangle"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("error: could not configure {n} workers: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Library(e @ (Error::BudgetExceeded { .. } | Error::TooLarge { .. }))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
