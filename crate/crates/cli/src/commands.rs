use std::path::PathBuf;

use rayon::prelude::*;

use moments_core::affine::{affine_parameters, scan_affine, AffineScanRow};
use moments_core::analytic::{
    gh_range, l_value_at_1, l_value_class_number, tauberian_check, LMethod, LValue, CLASS_NUMBER_BOUND, GH_BOUND,
};
use moments_core::arith::SpfTable;
use moments_core::disc::{
    count_compositum_twists, restricted_sum, sieve_range, twist_density_constant, FundamentalDiscriminant, MomentGroup,
    RangeTotals, Sign,
};
use moments_core::group::{automorphism_group_with, gi_extension_count_with, standard_group, AutConfig, StandardGroup};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::shard::{config_hash, plan, write_atomic, Accumulator, Runner, Shard};

/// Largest `max_qd` accepted by `affine-scan`.
pub const AFFINE_SCAN_BOUND: u64 = 300;

/// Where CSV goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn resolve(output: Option<PathBuf>, env_dir: Option<PathBuf>, command: &str) -> Sink {
        match (output, env_dir) {
            (Some(p), _) => Sink::File(p),
            (None, Some(dir)) => Sink::File(dir.join(format!("{command}.csv"))),
            (None, None) => Sink::Stdout,
        }
    }

    fn default_checkpoint(&self, explicit: &Option<PathBuf>) -> Option<PathBuf> {
        explicit.clone().or_else(|| match self {
            Sink::File(p) => {
                let mut s = p.clone().into_os_string();
                s.push(".ckpt");
                Some(PathBuf::from(s))
            }
            Sink::Stdout => None,
        })
    }

    fn emit(&self, header: &str, rows: &[String]) -> CliResult<()> {
        let mut text = String::with_capacity(64 * (rows.len() + 1));
        text.push_str(header);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        match self {
            Sink::Stdout => {
                print!("{text}");
                Ok(())
            }
            Sink::File(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
                }
                write_atomic(p, &text)
            }
        }
    }
}

pub struct Context {
    pub sink: Sink,
    pub workers: usize,
}

pub fn run(cli: Cli) -> CliResult<()> {
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let sink = Sink::resolve(cli.output, env_dir, cli.command.name());
    let workers = match cli.workers {
        Some(0) => return Err(CliError::Config("--workers must be positive".into())),
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ctx = Context { sink, workers };
    match cli.command {
        Command::Group(a) => group(&ctx, a),
        Command::AffineScan(a) => affine_scan(&ctx, a),
        Command::Sieve(a) => sieve(&ctx, a),
        Command::Restricted(a) => restricted(&ctx, a),
        Command::Residue(a) => residue(&ctx, a),
        Command::Density(a) => density(&ctx, a),
        Command::Lfunc(a) => lfunc(&ctx, a),
        Command::Gh(a) => gh(&ctx, a),
    }
}

fn group(ctx: &Context, a: GroupArgs) -> CliResult<()> {
    let which = StandardGroup::parse(&a.preset)?;
    let g = standard_group(&which)?;
    let config = AutConfig { max_group_order: a.aut_cap as usize, ..AutConfig::default() };
    let report = gi_extension_count_with(&g, &config)?;
    let aut = automorphism_group_with(&g, &config)?.order();
    let inner = (g.order() / g.center().len()) as u128;
    eprintln!(
        "{}: order {}, |Aut| = {aut}, |Out| = {}, generated by involutions: {}, GI-extensions: {}",
        which.label(),
        g.order(),
        aut / inner,
        report.generated_by_involutions,
        report.gi_extension_count
    );
    let row = format!(
        "{},{},{},{},{},{aut},{}",
        a.preset,
        g.order(),
        report.has_gi,
        report.gi_extension_count,
        report.generated_by_involutions,
        aut / inner
    );
    ctx.sink.emit("preset,order,has_gi,gi_extension_count,generated_by_involutions,aut_order,out_order", &[row])
}

fn pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn affine_scan(ctx: &Context, a: AffineScanArgs) -> CliResult<()> {
    if a.max_qd > AFFINE_SCAN_BOUND {
        return Err(CliError::Config(format!("--max-qd {} exceeds {AFFINE_SCAN_BOUND}", a.max_qd)));
    }
    let params = affine_parameters(a.max_qd);
    let scanned: Vec<moments_core::Result<AffineScanRow>> =
        pool(ctx.workers)?.install(|| params.par_iter().map(|&(p, n, d)| scan_affine(p, n, d)).collect());
    let rows = scanned.into_iter().collect::<moments_core::Result<Vec<_>>>()?;
    let lines: Vec<String> =
        rows.iter().map(|r| format!("{},{},{},{},{}", r.q, r.d, r.predicted, r.brute_force, r.agree())).collect();
    ctx.sink.emit("q,d,theorem_prediction,brute_force_count,agree", &lines)?;
    let bad: Vec<String> = rows.iter().filter(|r| !r.agree()).map(|r| format!("({},{})", r.q, r.d)).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Disagreement(format!("{} of {} rows disagree: {}", bad.len(), rows.len(), bad.join(" "))))
    }
}

fn check_cutoffs(checkpoints: &[u64], last: u64) -> CliResult<Vec<u64>> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("checkpoints must be strictly increasing".into()));
    }
    if checkpoints.last().is_some_and(|&c| c >= last) {
        return Err(CliError::Config("checkpoints must lie below the final value".into()));
    }
    let mut cuts = checkpoints.to_vec();
    cuts.push(last);
    Ok(cuts)
}

#[derive(Default)]
struct SieveAcc(RangeTotals);

impl Accumulator for SieveAcc {
    type Part = RangeTotals;

    fn absorb(&mut self, part: RangeTotals) {
        self.0 += part;
    }

    fn encode(&self) -> String {
        format!("{},{},{}", self.0.q8, self.0.d4, self.0.fields)
    }

    fn decode(s: &str) -> Option<Self> {
        let v: Vec<u64> = s.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?;
        let [q8, d4, fields] = v[..] else { return None };
        Some(SieveAcc(RangeTotals { q8, d4, fields }))
    }
}

/// `num/den` rounded to `digits` decimals with integer arithmetic.
pub fn exact_decimal(num: u64, den: u64, digits: u32) -> String {
    if den == 0 {
        return "NaN".into();
    }
    let scale = 10u128.pow(digits);
    let scaled = (num as u128 * scale + den as u128 / 2) / den as u128;
    format!("{}.{:0width$}", scaled / scale, scaled % scale, width = digits as usize)
}

fn sieve(ctx: &Context, a: SieveArgs) -> CliResult<()> {
    if a.x_max < 3 || a.x_max > a.bound {
        return Err(CliError::Config(format!("--x-max must lie in 3..={}, got {}", a.bound, a.x_max)));
    }
    if a.shard_size == 0 {
        return Err(CliError::Config("--shard-size must be positive".into()));
    }
    let cuts = check_cutoffs(&a.checkpoints, a.x_max)?;
    let group = MomentGroup::from(a.group);
    let sign = Sign::from(a.sign);
    let canonical = format!("sieve|group={group:?}|sign={sign}|cutoffs={cuts:?}|shard={}", a.shard_size);
    let runner = Runner {
        hash: config_hash(&canonical),
        checkpoint: ctx.sink.default_checkpoint(&a.shards.checkpoint),
        workers: ctx.workers,
        max_shards: a.shards.max_shards.map(|m| m as usize),
    };
    let table = SpfTable::new(a.x_max as usize);
    let shards = plan(0, &cuts, a.shard_size);
    let rows = runner.run(
        &shards,
        |s: &Shard| sieve_range(&table, sign, s.lo, s.hi),
        |c, acc: &SieveAcc| {
            let (num, den) = (acc.0.numerator(group), acc.0.fields);
            format!("{c},{num},{den},{}", exact_decimal(num, den, 10))
        },
    )?;
    ctx.sink.emit("X,sum_counts,num_fields,moment", &rows)
}

fn restricted(ctx: &Context, a: RestrictedArgs) -> CliResult<()> {
    let p = a.parts;
    let sign = Sign::from(p.sign);
    let sum = restricted_sum(p.d1, p.d2, sign, p.x)?;
    ctx.sink.emit("d1,d2,sign,X,sum", &[format!("{},{},{sign},{},{sum}", p.d1, p.d2, p.x)])
}

fn residue(ctx: &Context, a: ResidueArgs) -> CliResult<()> {
    let p = a.parts;
    let sign = Sign::from(p.sign);
    let c = tauberian_check(p.d1, p.d2, sign, p.x, a.cutoff)?;
    let (predicted, ratio, other, other_ratio) = match a.form {
        FormArg::Printed => (c.predicted, c.ratio, "derived", c.derived_ratio),
        FormArg::Derived => (c.derived, c.derived_ratio, "printed", c.ratio),
    };
    eprintln!("ratio against the {other} residue: {other_ratio:.6}");
    let row = format!("{},{},{sign},{},{:.9e},{predicted:.9e},{ratio:.6}", p.d1, p.d2, p.x, c.empirical);
    ctx.sink.emit("d1,d2,sign,X,empirical,predicted,ratio", &[row])?;
    if (ratio - 1.0).abs() > a.tolerance {
        return Err(CliError::Disagreement(format!("ratio {ratio:.6} is outside 1 ± {}", a.tolerance)));
    }
    Ok(())
}

fn density(ctx: &Context, a: DensityArgs) -> CliResult<()> {
    let d = FundamentalDiscriminant::new(a.d)?;
    if a.xmax == 0 {
        return Err(CliError::Config("--xmax must be positive".into()));
    }
    let count = count_compositum_twists(d, a.xmax);
    let empirical = count as f64 / a.xmax as f64;
    let predicted = twist_density_constant(d);
    let ratio = empirical / predicted;
    let row = format!("{d},{},{count},{empirical:.9e},{predicted:.9e},{ratio:.6}", a.xmax);
    ctx.sink.emit("d,X,count,empirical,predicted,ratio", &[row])?;
    if (ratio - 1.0).abs() > a.tolerance {
        return Err(CliError::Disagreement(format!("ratio {ratio:.6} is outside 1 ± {}", a.tolerance)));
    }
    Ok(())
}

fn method_name(m: LMethod) -> &'static str {
    match m {
        LMethod::CharacterSum => "character-sum",
        LMethod::ClassNumberFormula => "class-number-formula",
        LMethod::SmoothedSeries => "smoothed-series",
    }
}

fn lfunc(ctx: &Context, a: LfuncArgs) -> CliResult<()> {
    let d = FundamentalDiscriminant::new(a.disc)?;
    let mut values: Vec<LValue> = vec![l_value_at_1(d, a.prec)?];
    if d.abs() <= CLASS_NUMBER_BOUND {
        values.push(l_value_class_number(d)?);
    }
    let rows: Vec<String> =
        values.iter().map(|v| format!("{d},{},{:.12},{:.3e}", method_name(v.method), v.value, v.error_bound)).collect();
    ctx.sink.emit("D,method,value,error_bound", &rows)?;
    if let [a, b] = &values[..] {
        if !a.agrees_with(b) {
            return Err(CliError::Disagreement(format!("methods differ: {} vs {}", a.value, b.value)));
        }
    }
    Ok(())
}

#[derive(Default)]
struct GhAcc(f64);

impl Accumulator for GhAcc {
    type Part = f64;

    fn absorb(&mut self, part: f64) {
        self.0 += part;
    }

    fn encode(&self) -> String {
        format!("{:016x}", self.0.to_bits())
    }

    fn decode(s: &str) -> Option<Self> {
        u64::from_str_radix(s, 16).ok().map(|b| GhAcc(f64::from_bits(b)))
    }
}

fn gh(ctx: &Context, a: GhArgs) -> CliResult<()> {
    if a.n < 2 || a.n > GH_BOUND {
        return Err(CliError::Config(format!("--n must lie in 2..={GH_BOUND}, got {}", a.n)));
    }
    if a.shard_size == 0 {
        return Err(CliError::Config("--shard-size must be positive".into()));
    }
    let cuts = check_cutoffs(&a.checkpoints, a.n)?;
    if cuts[0] == 0 {
        return Err(CliError::Config("checkpoints must be positive".into()));
    }
    // sums run over d < N
    let last: Vec<u64> = cuts.iter().map(|c| c - 1).collect();
    let canonical = format!("gh|cutoffs={cuts:?}|shard={}", a.shard_size);
    let runner = Runner {
        hash: config_hash(&canonical),
        checkpoint: ctx.sink.default_checkpoint(&a.shards.checkpoint),
        workers: ctx.workers,
        max_shards: a.shards.max_shards.map(|m| m as usize),
    };
    let rows = runner.run(
        &plan(0, &last, a.shard_size),
        |s: &Shard| gh_range(s.lo, s.hi + 1),
        |c, acc: &GhAcc| format!("{},{:.12}", c + 1, acc.0),
    )?;
    ctx.sink.emit("N,gh_sum", &rows)
}
