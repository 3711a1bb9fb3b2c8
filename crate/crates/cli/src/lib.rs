//! Command-line front end for the workbench.
//!
//! [`run`] parses arguments, dispatches to a subcommand and maps outcomes to
//! exit codes: 0 when everything passes, 1 on a failed verification, 2 for
//! usage, domain and parse errors, 3 when a resource limit is hit, and 4 when
//! the network is needed but unavailable.

pub mod oeis;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dorp_core::count::{count_a, count_fp, order_dorp, schroder, CountTable, TableKind};
use dorp_core::enumerate::{
    enumerate_dorp, enumerate_drp, enumerate_ideal, enumerate_jstar, enumerate_ls,
};
use dorp_core::map::ceil_half;
use dorp_core::rank::{certify_rank, RankObject, RankOptions};
use dorp_core::verify::{run_suite, Suite, SuiteConfig};
use dorp_core::vital::factorize;
use dorp_core::{
    Bounds, EggBox, ElementSet, PartialMap, ReesElement, RelationKind, VerificationReport,
};
use num_bigint::BigUint;

use crate::oeis::{OeisClient, OeisError, SequenceQuery};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_NETWORK: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dorp_core::Error),
    #[error(transparent)]
    Oeis(#[from] OeisError),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(dorp_core::Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Oeis(e) if e.is_network() => EXIT_NETWORK,
            CliError::Oeis(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dorp",
    version,
    about = "Verification workbench for monotone order-decreasing partial maps"
)]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Recorded in report parameters; every suite is currently exhaustive.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a counting table.
    Count(CountArgs),
    /// Stream the literals of an element set, one per line.
    Enumerate(EnumerateArgs),
    /// Egg-box diagram of a relation as JSON.
    Greens(GreensArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Closure certificate for a rank value.
    Rank(RankArgs),
    /// Factor one map over idempotents and vital elements.
    Factorize(FactorizeArgs),
    /// Look the computed sequences up in the OEIS.
    OeisCheck(OeisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, default_value = "order")]
    table: String,
    /// Largest chain size.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetKind {
    Dorp,
    Ls,
    Drp,
    Ideal,
    Jstar,
    Rq,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long, value_enum, default_value = "dorp")]
    set: SetKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Debug, Args)]
struct GreensArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "L*")]
    relation: String,
    #[arg(long, value_enum, default_value = "dorp")]
    set: SetKind,
    #[arg(long)]
    p: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Largest carrier scanned by the definitional oracles.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    object: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<usize>,
    /// Largest carrier for which a multiplication table is built.
    #[arg(long)]
    bound: Option<usize>,
    /// Skip the exact completion search and report only the irreducibles.
    #[arg(long)]
    no_exact: bool,
}

#[derive(Debug, Args)]
struct FactorizeArgs {
    #[arg(long)]
    map: String,
}

#[derive(Debug, Args)]
struct OeisArgs {
    #[arg(long, default_value = ".oeis-cache")]
    cache_dir: PathBuf,
    #[arg(long)]
    offline: bool,
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let buffered = || {
        let mut buf = Vec::new();
        let res = dispatch(&cli, &mut buf);
        (res, buf)
    };
    let (outcome, buf) = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
        {
            Ok(pool) => pool.install(buffered),
            Err(e) => (
                Err(CliError::Usage(format!("thread pool: {e}"))),
                Vec::new(),
            ),
        },
        None => buffered(),
    };
    let outcome = outcome.and_then(|code| {
        out.write_all(&buf)?;
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Count(a) => count(a, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Greens(a) => greens(a, out),
        Command::Verify(a) => verify(a, cli, out),
        Command::Rank(a) => rank(a, out),
        Command::Factorize(a) => factor(a, out),
        Command::OeisCheck(a) => oeis_check(a, cli, out),
    }
}

fn count(a: &CountArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind = TableKind::from_name(&a.table).ok_or_else(|| {
        let names: Vec<_> = TableKind::ALL.iter().map(|k| k.name()).collect();
        CliError::Usage(format!(
            "unknown table `{}` (one of {})",
            a.table,
            names.join(", ")
        ))
    })?;
    let mut table = CountTable::build(kind, a.n);
    table
        .rows
        .retain(|row| a.r.is_none_or(|r| row.r == Some(r)) && a.p.is_none_or(|p| row.p == Some(p)));
    match a.format {
        Format::Csv => write!(out, "{}", table.to_csv())?,
        Format::Json => writeln!(out, "{}", table.to_json())?,
        Format::Text => return Err(CliError::Usage("count supports csv and json".into())),
    }
    Ok(EXIT_PASS)
}

fn height(p: Option<usize>, set: SetKind) -> Result<usize, CliError> {
    p.ok_or_else(|| CliError::Usage(format!("--p is required for --set {set:?}").to_lowercase()))
}

fn maps_of(set: SetKind, n: usize, p: Option<usize>) -> Result<ElementSet, CliError> {
    let bounds = Bounds::default();
    Ok(match set {
        SetKind::Dorp => enumerate_dorp(n, &bounds)?,
        SetKind::Ls => enumerate_ls(n, &bounds)?,
        SetKind::Drp => enumerate_drp(n, &bounds)?,
        SetKind::Ideal => enumerate_ideal(n, height(p, set)?, &bounds)?,
        SetKind::Jstar | SetKind::Rq => enumerate_jstar(n, height(p, set)?, &bounds)?,
    })
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let maps = maps_of(a.set, a.n, a.p)?;
    for m in maps.iter() {
        writeln!(out, "{m}")?;
    }
    if a.set == SetKind::Rq {
        writeln!(out, "{}", ReesElement::Zero)?;
    }
    Ok(EXIT_PASS)
}

fn greens(a: &GreensArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind: RelationKind = a.relation.parse()?;
    let maps = maps_of(a.set, a.n, a.p)?;
    let json = if a.set == SetKind::Rq {
        let mut carrier: Vec<ReesElement> =
            maps.into_vec().into_iter().map(ReesElement::Map).collect();
        carrier.push(ReesElement::Zero);
        EggBox::build(&carrier, kind).to_json()
    } else {
        EggBox::build(maps.members(), kind).to_json()
    };
    writeln!(out, "{json}")?;
    Ok(EXIT_PASS)
}

fn emit_report(
    report: &VerificationReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Text => writeln!(out, "{report}")?,
        Format::Csv => return Err(CliError::Usage("reports support json and text".into())),
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn verify(a: &VerifyArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let suite: Suite = a.suite.parse()?;
    let cfg = SuiteConfig {
        n: a.n,
        p: a.p,
        bound: a.bound,
    };
    let mut report = run_suite(suite, &cfg)?;
    if let Some(seed) = cli.seed {
        report.set_param("seed", seed);
    }
    emit_report(&report.finish(), a.format, out)
}

fn rank(a: &RankArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let object: RankObject = a.object.parse()?;
    let mut opts = RankOptions {
        exact: !a.no_exact,
        ..RankOptions::default()
    };
    if let Some(b) = a.bound {
        opts.table_limit = b;
    }
    let p = if object == RankObject::Dorp {
        None
    } else {
        a.p
    };
    let cert = certify_rank(object, a.n, p, &opts)?;
    writeln!(out, "{}", cert.to_json())?;
    Ok(if cert.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn factor(a: &FactorizeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let map: PartialMap = a.map.parse()?;
    let word = factorize(&map)?;
    let recomposes = word.recomposes();
    let mut value = serde_json::to_value(&word).expect("word serializes");
    value["length"] = word.len().into();
    value["recomposes"] = recomposes.into();
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&value).expect("value serializes")
    )?;
    Ok(if recomposes { EXIT_PASS } else { EXIT_FAIL })
}

/// The sequences submitted by `oeis-check`: a known control followed by the
/// computed sequences.
pub fn standard_queries() -> Vec<SequenceQuery> {
    let q = |label: &str, terms: Vec<BigUint>| SequenceQuery::new(label, terms).expect("nonempty");
    vec![
        q("large Schroder numbers", (0..8).map(schroder).collect()),
        q("a_n", (2..=9).map(count_a).collect()),
        q("s_n + a_n", (1..=8).map(order_dorp).collect()),
        q(
            "F(n,p) by rows",
            (2..=8)
                .flat_map(|n| (1..=ceil_half(n)).map(move |p| count_fp(n, p)))
                .collect(),
        ),
    ]
}

fn oeis_check(a: &OeisArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let client = OeisClient::new(&a.cache_dir, a.offline);
    let mut report = VerificationReport::new("oeis-check")
        .param("cache_dir", a.cache_dir.display())
        .param("offline", a.offline);
    if let Some(seed) = cli.seed {
        report.set_param("seed", seed);
    }
    for (k, q) in standard_queries().iter().enumerate() {
        let verdict = client.lookup(q)?;
        let expected = if k == 0 { "found" } else { "not found" };
        let actual = if verdict.found {
            format!("found {}", verdict.matches.join(" "))
        } else {
            "not found".to_string()
        };
        let source = serde_json::to_value(verdict.source).expect("source serializes");
        report.note(
            format!("{} [{}]", q.label, q.term_string()),
            expected,
            actual,
            format!(
                "informational, source {}",
                source.as_str().unwrap_or_default()
            ),
        );
    }
    emit_report(&report.finish(), Format::Json, out)
}
