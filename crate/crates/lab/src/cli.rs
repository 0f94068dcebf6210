//! Command-line front end.
//!
//! Exit codes: 0 success, 1 data or solver error, 2 usage error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use spacing_core::analysis::{
    block_analysis, fit_gamma, fit_gen_gamma_omega, hwang_hu_diagnostic, BlockScheme, FitMethod,
    DEFAULT_PERMUTATIONS,
};
use spacing_core::ensembles::{EnsembleClass, EnsembleSpec, ExtractionMode};
use spacing_core::infogeo::{distance_from_randomness, immerse, kappa_arclength, GammaPoint};
use spacing_core::laws::{
    default_grid, empirical_ks, ks_distance, law_moments, two_sample_ks, SpacingLaw, TabulatedCdf,
};
use spacing_core::SpacingSample;

use crate::formats::{
    self, block_report_csv, fmt_f64, level_differences, looks_like_tabulated_cdf, parse_levels,
    parse_spacing_csv, parse_tabulated_cdf, read_spacing_csv, read_text, spacing_csv, FormatError,
};
use crate::montecarlo::parallel_monte_carlo;

#[derive(Debug, Parser)]
#[command(
    name = "spacing-lab",
    version,
    about = "Eigenvalue-spacing laws, random-matrix Monte Carlo and zeta-zero block statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate spacing laws.
    #[command(subcommand)]
    Law(LawCommand),
    /// Monte Carlo spacings from a random-matrix ensemble.
    Sample(SampleArgs),
    /// Fit a gamma or generalized gamma law to a spacing CSV.
    Fit(FitArgs),
    /// Block statistics of the spacings of a level file.
    Blocks(BlocksArgs),
    /// Diagnostics on spacing data.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Gamma-manifold immersion and arc lengths.
    Geo(GeoArgs),
    /// Kolmogorov–Smirnov distance between two laws, tables or samples.
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
pub enum LawCommand {
    /// Tabulate `s,pdf,cdf` on a grid.
    Eval(LawEvalArgs),
    /// Mean and variance table.
    Moments(LawMomentsArgs),
}

#[derive(Debug, Args)]
pub struct LawEvalArgs {
    /// Law name, e.g. wigner, goe-lower, gamma:2,3, gengamma:2,1.973, caer-gue.
    #[arg(long)]
    pub law: String,
    /// Comma-separated parameters appended to the law name.
    #[arg(long)]
    pub params: Option<String>,
    /// Grid `start:stop:step`, both ends included.
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LawMomentsArgs {
    /// One or more law names.
    #[arg(long, required = true, num_args = 1..)]
    pub law: Vec<String>,
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// goe, gue, gse or poisson.
    #[arg(long)]
    pub ensemble: EnsembleClass,
    /// Matrix order.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: usize,
    /// all, central or unfolded.
    #[arg(long, default_value = "central")]
    pub mode: ExtractionMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// moments, mle, unitvar or gengamma.
    #[arg(long)]
    pub method: String,
    /// Fixed β for the generalized gamma fit.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    /// Level file: one ascending value per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// consecutive or cumulative.
    #[arg(long, default_value = "consecutive")]
    pub scheme: BlockScheme,
    #[arg(long, default_value_t = 200_000)]
    pub block_size: usize,
    #[arg(long, default_value_t = 10)]
    pub num: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Correlation between per-block means and coefficients of variation.
    CvIndependence(CvArgs),
}

#[derive(Debug, Args)]
pub struct CvArgs {
    /// Spacing CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub block_size: usize,
    /// Number of blocks; defaults to as many as fit.
    #[arg(long)]
    pub num: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GeoArgs {
    /// Immerse the gamma law (ν, κ) in R³.
    #[arg(long, num_args = 2, value_names = ["NU", "KAPPA"], allow_negative_numbers = true)]
    pub immersion: Option<Vec<f64>>,
    /// Arc length along κ between two values.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub arclength: Option<Vec<f64>>,
    /// Arc length from κ = 1.
    #[arg(long, value_name = "KAPPA", allow_negative_numbers = true)]
    pub from_randomness: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// A law name, a spacing CSV or a tabulated `s,F` CSV.
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] spacing_core::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run_from_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Law(LawCommand::Eval(args)) => law_eval(args),
        Command::Law(LawCommand::Moments(args)) => law_moments_table(args),
        Command::Sample(args) => sample(args),
        Command::Fit(args) => fit(args),
        Command::Blocks(args) => blocks(args),
        Command::Diag(DiagCommand::CvIndependence(args)) => cv_independence(args),
        Command::Geo(args) => geo(args),
        Command::Compare(args) => compare(args),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => formats::write_text(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn law_from(name: &str, params: Option<&str>) -> Result<SpacingLaw, CliError> {
    let text = match params {
        Some(p) => format!("{name}:{p}"),
        None => name.to_string(),
    };
    Ok(text.parse::<SpacingLaw>()?)
}

fn decimals(text: &str) -> usize {
    let mantissa = text.split(['e', 'E']).next().unwrap_or(text);
    mantissa.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// Parses `start:stop:step` into abscissae rounded to the inputs' decimal precision.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let usage = || CliError::Usage(format!("grid `{spec}` is not start:stop:step"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(usage());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| usage()))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0 && stop >= start) {
        return Err(CliError::Usage(format!(
            "grid `{spec}` needs finite start ≤ stop and a positive step"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(CliError::Usage(format!(
            "grid `{spec}` has too many points"
        )));
    }
    let places = parts.iter().map(|p| decimals(p.trim())).max().unwrap_or(0) as i32;
    let scale = 10f64.powi(places.min(15));
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * scale).round() / scale)
        .collect())
}

fn law_eval(args: LawEvalArgs) -> Result<(), CliError> {
    let law = law_from(&args.law, args.params.as_deref())?;
    let grid = parse_grid(&args.grid)?;
    let mut out = String::with_capacity(grid.len() * 48);
    out.push_str("s,pdf,cdf\n");
    for s in grid {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(s),
            fmt_f64(law.pdf(s)?),
            fmt_f64(law.cdf(s)?)
        );
    }
    emit(args.out.as_deref(), &out)
}

fn law_moments_table(args: LawMomentsArgs) -> Result<(), CliError> {
    let mut out = String::from("law,mean,variance,cv,unit_mean_kappa\n");
    for name in &args.law {
        let law = law_from(name, args.params.as_deref())?;
        let m = law_moments(&law, 2)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            law.label(),
            fmt_f64(m.mean()),
            fmt_f64(m.variance()),
            fmt_f64(m.cv()),
            fmt_f64(m.unit_mean_kappa())
        );
    }
    emit(args.out.as_deref(), &out)
}

fn sample(args: SampleArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let spec = EnsembleSpec::new(args.ensemble, args.n)?;
    let run = parallel_monte_carlo(&spec, args.trials, args.mode, args.seed)?;
    let mut text = String::new();
    if let Some(gap) = run.max_pair_gap {
        let _ = writeln!(text, "# max_pair_gap: {}", fmt_f64(gap));
    }
    text.push_str(&spacing_csv(&run.sample));
    emit(args.out.as_deref(), &text)
}

fn fit(args: FitArgs) -> Result<(), CliError> {
    let data = read_spacing_csv(&args.input)?;
    let mut out = String::new();
    if args.method == "gengamma" {
        let r = fit_gen_gamma_omega(data.spacings(), args.beta)?;
        out.push_str("method,beta,omega,ks\n");
        let _ = writeln!(
            out,
            "gengamma,{},{},{}",
            fmt_f64(r.beta()),
            fmt_f64(r.omega()),
            fmt_f64(r.ks)
        );
    } else {
        let method: FitMethod = args
            .method
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown fit method `{}`", args.method)))?;
        let r = fit_gamma(data.spacings(), method)?;
        out.push_str("method,rate,shape,ks\n");
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.method,
            fmt_f64(r.rate()),
            fmt_f64(r.shape()),
            fmt_f64(r.ks)
        );
    }
    emit(args.out.as_deref(), &out)
}

fn blocks(args: BlocksArgs) -> Result<(), CliError> {
    let levels = parse_levels(&args.input)?;
    let raw = level_differences(&levels);
    let report = block_analysis(&raw, args.scheme, args.block_size, args.num)?;
    let name = args.input.file_name().map_or_else(
        || args.input.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let text = block_report_csv(&report, &format!("levels={name}"));
    emit(args.out.as_deref(), &text)
}

fn cv_independence(args: CvArgs) -> Result<(), CliError> {
    let data = read_spacing_csv(&args.input)?;
    if args.block_size == 0 {
        return Err(CliError::Usage("--block-size must be positive".into()));
    }
    let num = args.num.unwrap_or(data.len() / args.block_size);
    let r = hwang_hu_diagnostic(
        data.spacings(),
        args.block_size,
        num,
        args.permutations,
        args.seed,
    )?;
    let mut out = String::from("correlation,p_value,blocks,permutations\n");
    let _ = writeln!(
        out,
        "{},{},{},{}",
        fmt_f64(r.correlation),
        fmt_f64(r.p_value),
        r.blocks,
        r.permutations
    );
    emit(args.out.as_deref(), &out)
}

fn geo(args: GeoArgs) -> Result<(), CliError> {
    let line = if let Some(p) = args.immersion {
        let q = immerse(GammaPoint::new(p[0], p[1])?);
        format!("{},{},{}", fmt_f64(q.x), fmt_f64(q.y), fmt_f64(q.z))
    } else if let Some(ab) = args.arclength {
        fmt_f64(kappa_arclength(ab[0], ab[1])?)
    } else if let Some(k) = args.from_randomness {
        fmt_f64(distance_from_randomness(k)?)
    } else {
        return Err(CliError::Usage(
            "geo needs one of --immersion, --arclength, --from-randomness".into(),
        ));
    };
    emit(None, &format!("{line}\n"))
}

enum Operand {
    Law(SpacingLaw),
    Table(TabulatedCdf),
    Sample(SpacingSample),
}

fn operand(text: &str) -> Result<Operand, CliError> {
    if let Ok(law) = text.parse::<SpacingLaw>() {
        return Ok(Operand::Law(law));
    }
    let path = Path::new(text);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "`{text}` is neither a law name nor an existing file"
        )));
    }
    let body = read_text(path)?;
    if looks_like_tabulated_cdf(&body) {
        Ok(Operand::Table(parse_tabulated_cdf(&body, text)?))
    } else {
        Ok(Operand::Sample(parse_spacing_csv(&body, text)?))
    }
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let a = operand(&args.a)?;
    let b = operand(&args.b)?;
    let grid = default_grid();
    let ks = match (&a, &b) {
        (Operand::Sample(x), Operand::Sample(y)) => two_sample_ks(x.spacings(), y.spacings())?,
        (Operand::Sample(x), Operand::Law(l)) | (Operand::Law(l), Operand::Sample(x)) => {
            empirical_ks(x.spacings(), l)?
        }
        (Operand::Sample(x), Operand::Table(t)) | (Operand::Table(t), Operand::Sample(x)) => {
            empirical_ks(x.spacings(), t)?
        }
        (Operand::Law(x), Operand::Law(y)) => ks_distance(x, y, &grid)?,
        (Operand::Law(x), Operand::Table(t)) | (Operand::Table(t), Operand::Law(x)) => {
            ks_distance(x, t, &grid)?
        }
        (Operand::Table(x), Operand::Table(y)) => ks_distance(x, y, &grid)?,
    };
    emit(None, &format!("ks\n{}\n", fmt_f64(ks)))
}
