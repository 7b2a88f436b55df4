//! Command-line flags, numeric parsing and config-file merging.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moments_core::disc::{MomentGroup, Sign};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default directory for CSV output.
pub const OUTPUT_DIR_ENV: &str = "GI_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "gi", version, about = "GI-extensions and unramified Q8/D4 moment computations")]
pub struct Cli {
    /// key=value file supplying defaults for any long flag; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: available parallelism). Never changes output.
    #[arg(long, global = true, value_parser = parse_count)]
    pub workers: Option<u64>,

    /// CSV destination; defaults to `$GI_OUTPUT_DIR/<command>.csv`, else stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GI report for a preset group (c12, ab2x4, d4, q8, s4, a5, ...).
    Group(GroupArgs),
    /// Theorem prediction against exhaustive search for every G(q, d).
    AffineScan(AffineScanArgs),
    /// Running Q8 or D4 moments over fundamental discriminants.
    Sieve(SieveArgs),
    /// Exact restricted sum for fixed first parts.
    Restricted(RestrictedArgs),
    /// Restricted partial sums against the predicted residue.
    Residue(ResidueArgs),
    /// Twist counts against the claimed density.
    Density(DensityArgs),
    /// L(1, χ_D) by character sum and, for small |D|, the class number formula.
    Lfunc(LfuncArgs),
    /// Partial sums of L(1, χ_d)/d over real fundamental discriminants.
    Gh(GhArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Group(_) => "group",
            Command::AffineScan(_) => "affine-scan",
            Command::Sieve(_) => "sieve",
            Command::Restricted(_) => "restricted",
            Command::Residue(_) => "residue",
            Command::Density(_) => "density",
            Command::Lfunc(_) => "lfunc",
            Command::Gh(_) => "gh",
        }
    }
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub preset: String,
    /// Largest group order the automorphism search accepts.
    #[arg(long, value_parser = parse_count, default_value = "200")]
    pub aut_cap: u64,
}

#[derive(Debug, Args)]
pub struct AffineScanArgs {
    /// Scan all (p, n, d) with q·d at most this.
    #[arg(long, value_parser = parse_count, default_value = "200")]
    pub max_qd: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Q8,
    D4,
}

impl From<GroupArg> for MomentGroup {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Q8 => MomentGroup::Q8,
            GroupArg::D4 => MomentGroup::D4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(alias = "-", alias = "negative")]
    Neg,
    #[value(alias = "+", alias = "positive")]
    Pos,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Neg => Sign::Negative,
            SignArg::Pos => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Printed,
    Derived,
}

/// Options shared by the sharded, resumable commands.
#[derive(Debug, Args)]
pub struct ShardArgs {
    /// Checkpoint file; defaults to `<output>.ckpt` when writing to a file.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many shards, leaving the checkpoint in place.
    #[arg(long, hide = true, value_parser = parse_count)]
    pub max_shards: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long, value_enum)]
    pub group: GroupArg,
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub sign: SignArg,
    #[arg(long, value_parser = parse_count)]
    pub x_max: u64,
    /// Comma-separated cutoffs below x_max at which to report.
    #[arg(long, value_parser = parse_count, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Largest x_max accepted.
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    pub bound: u64,
    /// Discriminants per work unit.
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    pub shard_size: u64,
    #[command(flatten)]
    pub shards: ShardArgs,
}

#[derive(Debug, Args)]
pub struct PartsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: i64,
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub sign: SignArg,
    #[arg(long, value_parser = parse_count)]
    pub x: u64,
}

#[derive(Debug, Args)]
pub struct RestrictedArgs {
    #[command(flatten)]
    pub parts: PartsArgs,
}

#[derive(Debug, Args)]
pub struct ResidueArgs {
    #[command(flatten)]
    pub parts: PartsArgs,
    /// Primes up to this enter the Euler products.
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub cutoff: u64,
    /// Which residue expression fills the `predicted` column.
    #[arg(long, value_enum, default_value = "printed")]
    pub form: FormArg,
    /// Accepted |ratio - 1|.
    #[arg(long, default_value = "0.15")]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long, value_parser = parse_count)]
    pub xmax: u64,
    #[arg(long, default_value = "0.05")]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct LfuncArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub disc: i64,
    #[arg(long, default_value = "1e-8")]
    pub prec: f64,
}

#[derive(Debug, Args)]
pub struct GhArgs {
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    /// Comma-separated N below the final one at which to report.
    #[arg(long, value_parser = parse_count, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    #[arg(long, value_parser = parse_count, default_value = "20000")]
    pub shard_size: u64,
    #[command(flatten)]
    pub shards: ShardArgs,
}

/// Nonnegative integers written plainly, with `_` separators, or as
/// `1e7` / `10^7` / `2.5e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let bad = || format!("{s:?} is not a nonnegative integer");
    let (mantissa, exp) = if let Some((m, e)) = t.split_once(['e', 'E']) {
        (m.to_string(), e.parse::<u32>().map_err(|_| bad())?)
    } else if let Some((b, e)) = t.split_once('^') {
        if b != "10" {
            return Err(bad());
        }
        ("1".to_string(), e.parse::<u32>().map_err(|_| bad())?)
    } else {
        return Err(bad());
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    let frac = frac.trim_end_matches('0');
    if frac.len() as u32 > exp || int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let base: u64 = digits.parse().map_err(|_| bad())?;
    10u64
        .checked_pow(exp - frac.len() as u32)
        .and_then(|p| base.checked_mul(p))
        .ok_or_else(|| format!("{s:?} overflows"))
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("config line {}: expected key=value", i + 1)));
        };
        let key = k.trim().replace('_', "-");
        if key == "config" {
            return Err(CliError::Config("a config file cannot name another config file".into()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn names_flag(arg: &OsString, key: &str) -> bool {
    let Some(a) = arg.to_str() else { return false };
    a.strip_prefix("--").is_some_and(|rest| rest == key || rest.strip_prefix(key).is_some_and(|r| r.starts_with('=')))
}

/// Appends config entries as flags unless the command line already sets them.
pub fn merge_config(args: &[OsString], entries: &[(String, String)]) -> Vec<OsString> {
    let mut merged = args.to_vec();
    for (key, value) in entries {
        if !args.iter().any(|a| names_flag(a, key)) {
            merged.push(format!("--{key}={value}").into());
        }
    }
    merged
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let a = a.to_str()?;
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

pub fn parse(args: Vec<OsString>) -> CliResult<Cli> {
    let args = match config_path(&args) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(CliError::io(&path))?;
            merge_config(&args, &read_config(&text)?)
        }
        None => args,
    };
    Cli::try_parse_from(args).map_err(clap_error)
}

fn clap_error(e: clap::Error) -> CliError {
    use clap::error::ErrorKind;
    if matches!(
        e.kind(),
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
    ) {
        let _ = e.print();
        std::process::exit(0);
    }
    CliError::Config(e.render().to_string().trim_end().to_string())
}
