//! Command-line front end: bound reports for network files, verification
//! campaigns, two-rate regions and reproduction of stored reference systems.
//!
//! Commands never print or write anything themselves. They return an
//! [`Outcome`] (or a [`Failure`]) and `main` emits it, so a failed command
//! leaves no partial output behind.

pub mod document;
pub mod golden;
mod region;

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use gcsb_core::bounds::{enumerate_bounds, instantiate};
use gcsb_core::campaign::{FunctionKind, DEFAULT_TOLERANCE};
use gcsb_core::network::cut_and_message_families;
use gcsb_core::rational::to_coprime_integers;
use gcsb_core::{run_campaign, BroadcastNetwork, Campaign, CampaignConfig, Cut, Error, RuleSet};

use document::{cuts_from_document, BoundsReport, CutDocument, NetworkDocument, ReportRow};

pub const EXIT_OK: i32 = 0;
/// A verification found a violation, or a reproduced system differs from
/// its reference.
pub const EXIT_MISMATCH: i32 = 1;
/// Malformed input or parameters out of range.
pub const EXIT_INVALID: i32 = 2;
/// A supplied cut does not separate its sink, or no finite cut exists.
pub const EXIT_CUT: i32 = 3;
pub const EXIT_UNBOUNDED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gcsb", version, about = "Generalized cut-set bounds for broadcast networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate bounds and instantiate them on a network file.
    Bounds(BoundsArgs),
    /// Run a seeded verification campaign.
    Verify(VerifyArgs),
    /// Project a bound system onto two rates and list the region's vertices.
    Region(RegionArgs),
    /// Regenerate a stored reference system and diff against it.
    #[command(alias = "paper")]
    Golden(GoldenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Network document (JSON).
    pub network: PathBuf,
    /// Comma-separated rules: csb, gcsb3, cor3, cor2, thm2, or all.
    #[arg(long, default_value = "all")]
    pub rules: String,
    /// `min` for one minimum cut per sink, or a JSON file mapping each sink to arc ids.
    #[arg(long, default_value = "min")]
    pub cuts: String,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// 1, 2, cor1, multiway, appendixA or appendixC.
    #[arg(long, value_parser = parse_campaign)]
    pub lemma: Campaign,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Ground set size.
    #[arg(long, default_value_t = 5)]
    pub ground: usize,
    /// Number of sets in each family.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// entropy or modular.
    #[arg(long, value_parser = parse_functions, default_value = "entropy")]
    pub functions: FunctionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundFamily {
    /// Standard cut-set bounds only.
    Cutset,
    /// Cut-set plus generalized bounds.
    Gcsb,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Network document (JSON).
    pub network: Option<PathBuf>,
    /// Symmetric combination network: K followed by C1..CK.
    #[arg(long, num_args = 2.., value_name = "K C1..CK", allow_negative_numbers = true)]
    pub symmetric: Option<Vec<String>>,
    /// A linear system file (`variables:` line, then one inequality per line).
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Two axes, comma-separated; each is a variable, `name=a+b+..`, or `Rsp`
    /// for the private sum of a symmetric network.
    #[arg(long)]
    pub axes: Option<String>,
    #[arg(long, value_enum, default_value = "gcsb")]
    pub bounds: BoundFamily,
    /// Override the generalized rule set (see `bounds --rules`).
    #[arg(long)]
    pub rules: Option<String>,
    #[arg(long, default_value = "min")]
    pub cuts: String,
    /// Write the vertices as CSV (`-` for standard output).
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Also build the other bound family and report containment both ways.
    #[arg(long, value_enum)]
    pub compare: Option<BoundFamily>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GoldenCase {
    K3Complete,
    K3Symmetric,
    FmDerivation,
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    #[arg(long = "case", value_enum)]
    pub case: GoldenCase,
}

fn parse_campaign(s: &str) -> Result<Campaign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_functions(s: &str) -> Result<FunctionKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a successful (or mismatching) command produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub(crate) fn invalid(message: impl std::fmt::Display) -> Self {
        Self { code: EXIT_INVALID, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotACut { .. } | Error::NoFiniteCut(_) => EXIT_CUT,
            Error::Unbounded(..) => EXIT_UNBOUNDED,
            _ => EXIT_INVALID,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::invalid(format!("{e:#}"))
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Region(a) => region::cmd_region(a),
        Command::Golden(a) => region::cmd_golden(a),
    }
}

pub(crate) fn read_file(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn load_network(path: &Path) -> Result<BroadcastNetwork, Failure> {
    let doc = NetworkDocument::parse(&read_file(path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Ok(doc.to_network()?)
}

pub(crate) fn load_cuts(net: &BroadcastNetwork, spec: &str) -> Result<Vec<Cut>, Failure> {
    if spec == "min" {
        return Ok((1..=net.k()).map(|k| net.min_cut(k)).collect::<gcsb_core::Result<_>>()?);
    }
    let path = Path::new(spec);
    let doc: CutDocument =
        serde_json::from_str(&read_file(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    cuts_from_document(net, &doc).map_err(|e| Failure { code: EXIT_CUT, message: e.to_string() })
}

pub(crate) fn parse_rules(s: &str) -> Result<RuleSet, Failure> {
    s.parse().map_err(|e: Error| Failure::invalid(e))
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Outcome, Failure> {
    let rules = parse_rules(&a.rules)?;
    let net = load_network(&a.network)?;
    let cuts = load_cuts(&net, &a.cuts)?;
    let (cf, mf) = cut_and_message_families(&net, &cuts)?;
    let caps = net.capacity_function();
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for b in enumerate_bounds(net.k(), rules) {
        let inst = instantiate(&b, &cf, &mf, Some(&caps))?;
        if inst.is_degenerate() {
            continue;
        }
        // different bounds can land on the same network inequality
        let key = to_coprime_integers(&[inst.rate_coeffs(), inst.capacity_coeffs()].concat());
        if seen.insert(key) {
            rows.push(inst);
        }
    }
    let text = match a.out {
        OutputFormat::Json => {
            let report: BoundsReport = rows.iter().map(ReportRow::from).collect();
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        OutputFormat::Text => rows
            .iter()
            .map(|r| format!("{}  [{}]  = {}\n", r, r.provenance(), gcsb_core::rational::format(r.cap_value().expect("numeric"))))
            .collect(),
    };
    Ok(match &a.output {
        Some(p) => Outcome { files: vec![(p.clone(), text)], stdout: format!("{} inequalities\n", rows.len()), code: EXIT_OK },
        None => Outcome { stdout: text, ..Outcome::default() },
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let cfg = CampaignConfig {
        campaign: a.lemma,
        functions: a.functions,
        trials: a.trials,
        ground: a.ground,
        k: a.k,
        seed: a.seed,
        tolerance: a.tolerance,
    };
    let summary = run_campaign(&cfg)?;
    Ok(Outcome {
        code: if summary.passed() { EXIT_OK } else { EXIT_MISMATCH },
        stdout: summary.to_string(),
        files: Vec::new(),
    })
}
