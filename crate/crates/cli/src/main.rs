mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use specbound::harness::{self, Family, PropertyScale, SweepConfig, VerifyConfig};
use specbound::matrix::{commute_check, read_matrix, COMMUTE_REL_TOL};
use specbound::{best_bound, catalog, lookup, Error, Operands, PowerSeries, DEFAULT_TOL};

/// Exit code for structural errors: bad input files, dimension mismatch,
/// unknown names, invalid numbers.
const EXIT_STRUCTURAL: u8 = 2;
/// Exit code when pair mode receives a non-commuting pair.
const EXIT_NON_COMMUTING: u8 = 3;
/// Exit code when verification finds a violation or a failed property.
const EXIT_VERIFY_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "specbound", version, about = "Certified upper bounds on r[f(T)] and r[f(AB)]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every applicable bound for one matrix (T) or two (A, B).
    Bound(BoundArgs),
    /// Run the verification sweep and property checks.
    Verify(SweepArgs),
    /// Emit per-bound tightness statistics and win rates as CSV.
    Compare(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(Args)]
struct SeriesArgs {
    /// Catalog name (exp, cos, geometric, 2F1, ...) or `poly:c0,c1,...` with
    /// `re` or `re:im` coefficients.
    #[arg(long)]
    series: Vec<String>,
    /// Series parameter `name=value`, e.g. `alpha=1.5` for 2F1.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Absolute tolerance for series evaluation.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Hölder exponents.
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0])]
    p_grid: Vec<f64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Matrix file; give once for T, twice for A and B.
    #[arg(long = "matrix", required = true, num_args = 1)]
    matrices: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Trials per family.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8])]
    dims: Vec<usize>,
    /// Instance families (default: all).
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the CSV and summary reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output on stdout (default: table for verify, csv for compare).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_param(raw: &str) -> anyhow::Result<(String, f64)> {
    let (k, v) = raw
        .split_once('=')
        .with_context(|| format!("parameter `{raw}` is not of the form name=value"))?;
    let v: f64 = v.trim().parse().with_context(|| format!("parameter `{raw}` has a non-numeric value"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_coefficient(raw: &str) -> anyhow::Result<Complex64> {
    let number = |s: &str| -> anyhow::Result<f64> {
        s.trim().parse().with_context(|| format!("bad polynomial coefficient `{raw}`"))
    };
    Ok(match raw.split_once(':') {
        Some((re, im)) => Complex64::new(number(re)?, number(im)?),
        None => Complex64::new(number(raw)?, 0.0),
    })
}

fn parse_series(name: &str, params: &[(String, f64)]) -> anyhow::Result<PowerSeries> {
    if let Some(list) = name.strip_prefix("poly:") {
        if !params.is_empty() {
            bail!("polynomial series take no --param");
        }
        let coeffs = list.split(',').map(parse_coefficient).collect::<anyhow::Result<Vec<_>>>()?;
        return Ok(PowerSeries::polynomial(name, coeffs)?);
    }
    Ok(lookup(name, params)?.series)
}

fn series_list(args: &SeriesArgs) -> anyhow::Result<Vec<PowerSeries>> {
    let params = args.params.iter().map(|p| parse_param(p)).collect::<anyhow::Result<Vec<_>>>()?;
    if args.series.is_empty() {
        if !params.is_empty() {
            bail!("--param needs an explicit --series");
        }
        return Ok(catalog().into_iter().map(|e| e.series).collect());
    }
    args.series.iter().map(|s| parse_series(s, &params)).collect()
}

fn check_numbers(args: &SeriesArgs) -> anyhow::Result<()> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        bail!(Error::InvalidArgument(format!("--tol must be positive, got {}", args.tol)));
    }
    if let Some(&p) = args.p_grid.iter().find(|&&p| !(p > 1.0 && p.is_finite())) {
        bail!(Error::BadExponent(p));
    }
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> anyhow::Result<ExitCode> {
    check_numbers(&args.series)?;
    let series = series_list(&args.series)?;
    let f = match (args.series.series.len(), series.as_slice()) {
        (1, [f]) => f,
        _ => bail!("`bound` needs exactly one --series"),
    };
    let mats = args.matrices.iter().map(read_matrix).collect::<Result<Vec<_>, _>>()?;
    let operands = match mats.as_slice() {
        [t] => Operands::Single(t),
        [a, b] => Operands::Pair(a, b),
        _ => bail!("`bound` takes one or two --matrix files, got {}", mats.len()),
    };
    let best = best_bound(f, operands, args.series.tol, &args.series.p_grid)?;
    let report = render::BoundReport::new(f, operands, &best, args.series.tol);
    print!("{}", render::bound(&report, args.format)?);
    if let Operands::Pair(a, b) = operands {
        let check = commute_check(a, b, COMMUTE_REL_TOL)?;
        if !check.commuting {
            eprintln!(
                "error: the pair does not commute: ‖AB − BA‖ = {:e} exceeds {:e}; only the bounds for arbitrary pairs apply",
                check.commutator_norm, check.threshold
            );
            return Ok(ExitCode::from(EXIT_NON_COMMUTING));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep_config(args: &SweepArgs) -> anyhow::Result<SweepConfig> {
    check_numbers(&args.series)?;
    if args.dims.iter().any(|&d| d == 0 || d > specbound::matrix::MAX_DIM) {
        bail!(Error::InvalidArgument(format!(
            "--dims must lie in 1..={}",
            specbound::matrix::MAX_DIM
        )));
    }
    let families = if args.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.families.iter().map(|f| f.parse()).collect::<Result<Vec<Family>, _>>()?
    };
    Ok(SweepConfig {
        series: series_list(&args.series)?,
        families,
        dims: args.dims.clone(),
        trials: args.trials,
        seed: args.seed,
        tol: args.series.tol,
        p_grid: args.series.p_grid.clone(),
        threads: None,
    })
}

fn write_out(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    harness::report::write_text(dir.join(name), text)?;
    Ok(())
}

fn cmd_verify(args: &SweepArgs) -> anyhow::Result<ExitCode> {
    let sweep = sweep_config(args)?;
    let properties = PropertyScale {
        dims: sweep.dims.clone(),
        tol: sweep.tol,
        ..PropertyScale::default()
    };
    let report = harness::verify(&VerifyConfig { sweep, properties })?;
    let summary_json = harness::report::to_json_pretty(&report.summary)?;
    if let Some(dir) = &args.out {
        write_out(dir, "report.csv", &report.csv)?;
        write_out(dir, "summary.json", &summary_json)?;
    }
    match args.format.unwrap_or(Format::Table) {
        Format::Table => print!("{}", render::verify_table(&report.summary)),
        Format::Csv => print!("{}", report.csv),
        Format::Structured => println!("{summary_json}"),
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_compare(args: &SweepArgs) -> anyhow::Result<ExitCode> {
    let config = sweep_config(args)?;
    let records = harness::run_sweep(&config)?;
    let summary = harness::summarize(&records);
    let table = harness::summary_csv(&summary)?;
    if let Some(dir) = &args.out {
        write_out(dir, "compare.csv", &table)?;
        write_out(dir, "report.csv", &harness::trials_csv(&records)?)?;
    }
    match args.format.unwrap_or(Format::Csv) {
        Format::Table => print!("{}", render::summary_table(&summary)),
        Format::Csv => print!("{table}"),
        Format::Structured => println!("{}", harness::report::to_json_pretty(&summary)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NonCommuting { .. }) => EXIT_NON_COMMUTING,
        _ => EXIT_STRUCTURAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
