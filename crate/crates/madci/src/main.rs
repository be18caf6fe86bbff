//! madci: MAD dispersion inference from the command line.
//!
//! Subcommands: `ci` (intervals from CSV data), `simulate` (Monte-Carlo
//! coverage), `pif` (partial influence curves), `truth` (population values).

mod config;
mod errors;
mod input;
mod report;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use madstat::{
    ci_diff_from_parts, ci_mad_from_parts, ci_ratio_sq_from_parts, estimate_asv, pif_curve,
    run_coverage, true_diff, true_ratio_sq, DistributionSpec, Measure, PifMeasure, Sample,
    SimulationPlan,
};

use config::Config;
use errors::CliError;
use input::{parse_csv, GroupedData};
use report::{
    ci_report, write_json, CiReport, Format, GroupReport, PifPoint, PifReport, SimulateReport,
    TruthReport,
};

#[derive(Parser)]
#[command(
    name = "madci",
    version,
    about = "Confidence intervals and robustness diagnostics for median absolute deviations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Confidence interval for one- or two-group CSV data
    Ci(CiArgs),
    /// Monte-Carlo coverage simulation
    Simulate(SimulateArgs),
    /// Tabulate the first partial influence function over an x-grid
    Pif(PifArgs),
    /// Population MAD / squared-ratio / difference truths
    Truth(TruthArgs),
}

#[derive(Args)]
struct Shared {
    /// Confidence level (default 0.95)
    #[arg(long)]
    level: Option<f64>,
    /// Output format: json | csv (default json)
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value config file; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CiArgs {
    #[command(flatten)]
    shared: Shared,
    /// Input CSV path (header row required)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Value column (name or zero-based index)
    #[arg(long)]
    value: Option<String>,
    /// Group column for long-format data
    #[arg(long)]
    group: Option<String>,
    /// Second value column for wide-format data
    #[arg(long)]
    value2: Option<String>,
    /// Which group label is the first (numerator) group
    #[arg(long)]
    first: Option<String>,
    /// mad | ratio-sq | diff (default mad for single-group data)
    #[arg(long)]
    measure: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    shared: Shared,
    /// mad | ratio-sq | diff
    #[arg(long)]
    measure: Option<String>,
    /// First population, e.g. exp:1, lognormal:0,1, chisq:5, pareto:1,7
    #[arg(long)]
    dist1: Option<String>,
    /// Second population (two-sample measures)
    #[arg(long)]
    dist2: Option<String>,
    /// First sample size
    #[arg(long)]
    n1: Option<usize>,
    /// Second sample size (two-sample measures)
    #[arg(long)]
    n2: Option<usize>,
    /// Trials per simulation (default 2000)
    #[arg(long)]
    trials: Option<usize>,
    /// Simulation seed (default 1)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: rayon's choice); results do not depend on it
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct PifArgs {
    #[command(flatten)]
    shared: Shared,
    /// ratio-sq | diff
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    dist1: Option<String>,
    #[arg(long)]
    dist2: Option<String>,
    /// Grid start
    #[arg(long)]
    from: Option<f64>,
    /// Grid end (inclusive)
    #[arg(long)]
    to: Option<f64>,
    /// Grid step
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args)]
struct TruthArgs {
    #[command(flatten)]
    shared: Shared,
    #[arg(long)]
    dist1: Option<String>,
    #[arg(long)]
    dist2: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ci(args) => cmd_ci(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Pif(args) => cmd_pif(args),
        Command::Truth(args) => cmd_truth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let payload = serde_json::json!({
                "error": { "code": err.code(), "message": err.to_string() }
            });
            eprintln!("{payload}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// Shared flag handling: config merge, then defaults.
struct Common {
    level: f64,
    format: Format,
    out: Option<PathBuf>,
}

fn resolve_shared(shared: &Shared, cfg: &Config) -> Result<Common, CliError> {
    let level = cfg.merge(shared.level, "level")?.unwrap_or(0.95);
    let format = cfg
        .merge(shared.format.clone(), "format")?
        .map(|s: String| s.parse::<Format>().map_err(CliError::BadValue))
        .transpose()?
        .unwrap_or(Format::Json);
    let out = cfg.merge(shared.out.clone(), "out")?;
    Ok(Common { level, format, out })
}

fn emit<T: serde::Serialize>(
    common: &Common,
    value: &T,
    write_csv: impl Fn(&T, &mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match common.format {
        Format::Json => write_json(value, &mut sink),
        Format::Csv => write_csv(value, &mut sink),
    }
}

fn parse_dist(text: &str) -> Result<DistributionSpec, CliError> {
    text.parse::<DistributionSpec>()
        .map_err(|e| CliError::BadValue(e.to_string()))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::BadValue(format!("--{flag} is required")))
}

fn cmd_ci(args: CiArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.shared.config.as_deref())?;
    let common = resolve_shared(&args.shared, &cfg)?;
    let input: PathBuf = require(cfg.merge(args.input, "input")?, "input")?;
    let value: String = require(cfg.merge(args.value, "value")?, "value")?;
    let group: Option<String> = cfg.merge(args.group, "group")?;
    let value2: Option<String> = cfg.merge(args.value2, "value2")?;
    let first: Option<String> = cfg.merge(args.first, "first")?;
    let measure_text: Option<String> = cfg.merge(args.measure, "measure")?;
    cfg.finish()?;

    if group.is_some() && value2.is_some() {
        return Err(CliError::BadValue(
            "--group and --value2 are mutually exclusive".into(),
        ));
    }

    let file = File::open(&input)?;
    let mut data = parse_csv(file, &value, group.as_deref(), value2.as_deref())?;
    if let Some(first) = &first {
        data = data.with_first(first)?;
    }

    let measure = match measure_text {
        Some(text) => text
            .parse::<Measure>()
            .map_err(CliError::BadValue)?,
        None if data.group_b.is_none() => Measure::Mad,
        None => {
            return Err(CliError::BadValue(
                "two-group data needs --measure ratio-sq or diff".into(),
            ))
        }
    };

    let report = build_ci_report(&data, measure, common.level)?;
    emit(&common, &report, |r, w| r.write_csv(w))
}

fn build_ci_report(
    data: &GroupedData,
    measure: Measure,
    level: f64,
) -> Result<CiReport, CliError> {
    let group_stats = |sample: &Sample,
                       label: &str,
                       which: madstat::Group|
     -> Result<(f64, madstat::EstimatedAsv, GroupReport), CliError> {
        let mad = sample.mad().map_err(|e| e.in_group_cli(which))?;
        let est = estimate_asv(sample).map_err(|e| e.in_group_cli(which))?;
        let report = GroupReport::new(label, sample.len(), mad, &est);
        Ok((mad, est, report))
    };

    match measure {
        Measure::Mad => {
            if data.group_b.is_some() {
                return Err(CliError::BadValue(
                    "--measure mad expects single-group data".into(),
                ));
            }
            let (mad, est, g) = group_stats(&data.group_a, &data.label_a, madstat::Group::First)?;
            let interval = ci_mad_from_parts(mad, est.asv, data.group_a.len(), level)?;
            Ok(ci_report("mad", level, &interval, vec![g], data.dropped))
        }
        Measure::RatioSq | Measure::Diff => {
            let group_b = data.group_b.as_ref().ok_or_else(|| {
                CliError::BadValue("two-sample measure needs two groups".into())
            })?;
            let label_b = data.label_b.clone().unwrap_or_else(|| "b".into());
            if measure == Measure::RatioSq {
                let mad_b = group_b
                    .mad()
                    .map_err(|e| e.in_group_cli(madstat::Group::Second))?;
                if mad_b == 0.0 {
                    return Err(CliError::Stat(madstat::Error::ZeroDenominatorMad));
                }
            }
            let (mad_a, est_a, ga) =
                group_stats(&data.group_a, &data.label_a, madstat::Group::First)?;
            let (mad_b, est_b, gb) = group_stats(group_b, &label_b, madstat::Group::Second)?;
            let (n1, n2) = (data.group_a.len(), group_b.len());
            let (name, interval) = match measure {
                Measure::RatioSq => (
                    "ratio-sq",
                    ci_ratio_sq_from_parts(mad_a, est_a.asv, n1, mad_b, est_b.asv, n2, level)?,
                ),
                _ => (
                    "diff",
                    ci_diff_from_parts(mad_a, est_a.asv, n1, mad_b, est_b.asv, n2, level)?,
                ),
            };
            Ok(ci_report(name, level, &interval, vec![ga, gb], data.dropped))
        }
    }
}

trait InGroupCli {
    fn in_group_cli(self, which: madstat::Group) -> CliError;
}

impl InGroupCli for madstat::Error {
    fn in_group_cli(self, which: madstat::Group) -> CliError {
        CliError::Stat(madstat::Error::Group {
            which,
            source: Box::new(self),
        })
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.shared.config.as_deref())?;
    let common = resolve_shared(&args.shared, &cfg)?;
    let measure: String = require(cfg.merge(args.measure, "measure")?, "measure")?;
    let measure = measure.parse::<Measure>().map_err(CliError::BadValue)?;
    let dist1: String = require(cfg.merge(args.dist1, "dist1")?, "dist1")?;
    let dist2: Option<String> = cfg.merge(args.dist2, "dist2")?;
    let n1: usize = require(cfg.merge(args.n1, "n1")?, "n1")?;
    let n2: Option<usize> = cfg.merge(args.n2, "n2")?;
    let trials = cfg.merge(args.trials, "trials")?.unwrap_or(2000);
    let seed = cfg.merge(args.seed, "seed")?.unwrap_or(1);
    let workers: Option<usize> = cfg.merge(args.workers, "workers")?;
    cfg.finish()?;

    if measure.is_two_sample() && (dist2.is_none() || n2.is_none()) {
        return Err(CliError::BadValue(
            "two-sample measures need --dist2 and --n2".into(),
        ));
    }

    let plan = SimulationPlan {
        dist1: parse_dist(&dist1)?,
        dist2: dist2.as_deref().map(parse_dist).transpose()?,
        measure,
        n1,
        n2,
        trials,
        level: common.level,
        seed,
    };

    let summary = match workers {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::BadValue(format!("cannot build thread pool: {e}")))?;
            pool.install(|| run_coverage(&plan))?
        }
        None => run_coverage(&plan)?,
    };

    let report = SimulateReport::new(&plan, &summary);
    emit(&common, &report, |r, w| r.write_csv(w))
}

fn cmd_pif(args: PifArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.shared.config.as_deref())?;
    let common = resolve_shared(&args.shared, &cfg)?;
    let measure: String = require(cfg.merge(args.measure, "measure")?, "measure")?;
    let dist1: String = require(cfg.merge(args.dist1, "dist1")?, "dist1")?;
    let dist2: String = require(cfg.merge(args.dist2, "dist2")?, "dist2")?;
    let from: f64 = require(cfg.merge(args.from, "from")?, "from")?;
    let to: f64 = require(cfg.merge(args.to, "to")?, "to")?;
    let step: f64 = require(cfg.merge(args.step, "step")?, "step")?;
    cfg.finish()?;

    let pif_measure = match measure.parse::<Measure>().map_err(CliError::BadValue)? {
        Measure::RatioSq => PifMeasure::RatioSq,
        Measure::Diff => PifMeasure::Diff,
        Measure::Mad => {
            return Err(CliError::BadValue(
                "pif needs a two-sample measure: ratio-sq or diff".into(),
            ))
        }
    };
    let d1 = parse_dist(&dist1)?;
    let d2 = parse_dist(&dist2)?;
    let curve = pif_curve(&d1, &d2, pif_measure, from, to, step)?;

    let report = PifReport {
        command: "pif",
        measure,
        dist1: d1.to_string(),
        dist2: d2.to_string(),
        from,
        to,
        step,
        points: curve.into_iter().map(|(x, pif1)| PifPoint { x, pif1 }).collect(),
    };
    emit(&common, &report, |r, w| r.write_csv(w))
}

fn cmd_truth(args: TruthArgs) -> Result<(), CliError> {
    let cfg = Config::load(args.shared.config.as_deref())?;
    let common = resolve_shared(&args.shared, &cfg)?;
    let dist1: String = require(cfg.merge(args.dist1, "dist1")?, "dist1")?;
    let dist2: Option<String> = cfg.merge(args.dist2, "dist2")?;
    cfg.finish()?;

    let d1 = parse_dist(&dist1)?;
    let mad1 = d1.true_mad()?;
    let report = match dist2 {
        Some(text) => {
            let d2 = parse_dist(&text)?;
            TruthReport {
                command: "truth",
                dist1: d1.to_string(),
                dist2: Some(d2.to_string()),
                mad1,
                mad2: Some(d2.true_mad()?),
                ratio_sq: Some(true_ratio_sq(&d1, &d2)?),
                diff: Some(true_diff(&d1, &d2)?),
            }
        }
        None => TruthReport {
            command: "truth",
            dist1: d1.to_string(),
            dist2: None,
            mad1,
            mad2: None,
            ratio_sq: None,
            diff: None,
        },
    };
    emit(&common, &report, |r, w| r.write_csv(w))
}
