//! Command-line front end. Every subcommand prints one JSON line (or CSV
//! for surveys) on standard output, or appends it to `--out`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{read_key_values, OutputFormat, RunConfig};
use crate::report::{self, Envelope};
use crate::survey::{self, BoxKind, LocalSpec, SurveyParams};
use crate::{verify, Error, MonicIntPolynomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Environment variable overriding the number of survey workers.
pub const THREADS_ENV: &str = "HEILBRONN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "heilbronn", version, about = "Heilbronn-criterion screening of Eisenstein polynomials")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format (csv is available for `survey`)
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Append output to this file instead of writing to stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Plain key=value file supplying defaults for any flag
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Search bound Y for the auxiliary primes q1 < q2
    #[arg(long, global = true)]
    pub pair_bound: Option<u64>,
    /// Constant in the character-sum error term
    #[arg(long, global = true)]
    pub pv_constant: Option<f64>,
    /// Largest exhaustive enumeration allowed
    #[arg(long, global = true)]
    pub enumeration_cap: Option<u64>,
    /// Monte Carlo seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoxArg {
    HalfOpen,
    Height,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local densities and effective bounds at p
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Minimal p = u*q1 + v*q2 with q1 ∤ u, q2 ∤ v
    Decompose { p: u64, q1: u64, q2: u64 },
    /// Criterion verdict for one polynomial, coefficients a0,a1,...,a_{n-1}
    Check {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        p: u64,
    },
    /// Character-constrained decomposition search
    Theorem2 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        q2: u64,
    },
    /// Proportion of Eisenstein polynomials in a box the criterion applies to
    Survey {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long = "X")]
        x: u64,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long = "box", value_enum, default_value = "half-open")]
        box_kind: BoxArg,
    },
    /// Lattice count with local root conditions against its main term
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long = "X")]
        x: u64,
        #[arg(long, value_delimiter = ',')]
        rootless: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        rooted: Vec<u64>,
    },
    /// Lower bounds for the limiting proportion
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Recompute the worked examples against brute force
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Density { .. } => "density",
            Command::Decompose { .. } => "decompose",
            Command::Check { .. } => "check",
            Command::Theorem2 { .. } => "theorem2",
            Command::Survey { .. } => "survey",
            Command::Count { .. } => "count",
            Command::Bounds { .. } => "bounds",
            Command::Verify => "verify",
        }
    }
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn flag_present(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.strip_prefix(flag).is_some_and(|rest| rest.starts_with('='))
    })
}

/// Appends `--key=value` for every config entry not given on the command
/// line; clap then validates the keys against the chosen subcommand.
fn merge_config(mut args: Vec<OsString>) -> Result<Vec<OsString>, Error> {
    let Some(path) = config_path(&args) else { return Ok(args) };
    for (key, value) in read_key_values(&path)? {
        let key = if key.eq_ignore_ascii_case("x") { "X".to_string() } else { key };
        if key == "config" {
            return Err(Error::invalid("config files cannot include other config files"));
        }
        let flag = format!("--{key}");
        if !flag_present(&args, &flag) {
            args.push(format!("{flag}={value}").into());
        }
    }
    Ok(args)
}

fn run_config(g: &GlobalArgs) -> Result<RunConfig, Error> {
    let d = RunConfig::default();
    let config = RunConfig {
        pair_bound: g.pair_bound.unwrap_or(d.pair_bound),
        pv_constant: g.pv_constant.unwrap_or(d.pv_constant),
        enumeration_cap: g.enumeration_cap.unwrap_or(d.enumeration_cap),
        seed: g.seed.unwrap_or(d.seed),
        format: g.format.unwrap_or(d.format),
    };
    config.validate()?;
    Ok(config)
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::invalid(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // Fails only if a pool already exists, e.g. when called twice in-process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn json_line<T: Serialize>(command: &str, config: &RunConfig, report: T) -> Result<String, Error> {
    if config.format == OutputFormat::Csv {
        return Err(Error::invalid(format!("csv output is only available for survey, not {command}")));
    }
    serde_json::to_string(&Envelope::new(command, config, report)).map_err(|e| Error::Internal(e.to_string()))
}

fn survey_output(config: &RunConfig, r: survey::SurveyReport) -> Result<String, Error> {
    match config.format {
        OutputFormat::Json => json_line("survey", config, r),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(survey::SurveyReport::CSV_HEADER).map_err(io)?;
            w.write_record(r.csv_row()).map_err(io)?;
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            let text = String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(text.trim_end().to_string())
        }
    }
}

/// Output text plus whether the run counts as a verify failure.
fn execute(command: &Command, config: &RunConfig) -> Result<(String, bool), Error> {
    let name = command.name();
    let text = match *command {
        Command::Density { p, n } => json_line(name, config, report::density_report(p, n)?)?,
        Command::Decompose { p, q1, q2 } => json_line(name, config, report::decompose_report(p, q1, q2)?)?,
        Command::Check { ref poly, p } => {
            let f: MonicIntPolynomial = poly.parse()?;
            json_line(name, config, report::check_report(&f, p, config.pair_bound)?)?
        }
        Command::Theorem2 { p, n, q1, q2 } => json_line(name, config, report::theorem2_report(p, n, q1, q2, config)?)?,
        Command::Survey { p, n, x, mode, samples, box_kind } => {
            let params = SurveyParams {
                p,
                n,
                x,
                pair_bound: config.pair_bound,
                box_kind: match box_kind {
                    BoxArg::HalfOpen => BoxKind::HalfOpen,
                    BoxArg::Height => BoxKind::Height,
                },
            };
            let r = match mode {
                ModeArg::Exhaustive => survey::exhaustive_survey(&params, config.enumeration_cap as u128)?,
                ModeArg::Mc => {
                    if box_kind == BoxArg::Height {
                        return Err(Error::invalid("Monte Carlo mode always samples an aligned box"));
                    }
                    survey::montecarlo_survey(&params, config.seed, samples)?
                }
            };
            survey_output(config, r)?
        }
        Command::Count { p, n, x, ref rootless, ref rooted } => {
            let spec = LocalSpec::new(p, n, rootless.iter().copied(), rooted.iter().copied())?;
            json_line(name, config, survey::count_report(&spec, x, config.enumeration_cap as u128)?)?
        }
        Command::Bounds { p, n } => json_line(name, config, survey::lower_bound_report(p, n)?)?,
        Command::Verify => {
            let r = verify::run_verification();
            for item in &r.items {
                let status = if item.passed { "PASS" } else { "FAIL" };
                match &item.detail {
                    Some(d) => eprintln!("{status} {}: {d}", item.name),
                    None => eprintln!("{status} {}", item.name),
                }
            }
            let failed = r.failed > 0;
            return Ok((json_line(name, config, r)?, failed));
        }
    };
    Ok((text, false))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::invalid(format!("cannot write output: {e}"));
    match out {
        Some(path) => {
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
            writeln!(f, "{text}").map_err(io)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(io)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_INVALID,
        Error::Precondition(_) | Error::LimitExceeded(_) => EXIT_PRECONDITION,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = configure_threads()
        .and_then(|()| run_config(&cli.global))
        .and_then(|config| execute(&cli.command, &config))
        .and_then(|(text, failed)| emit(cli.global.out.as_ref(), &text).map(|()| failed));
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_VERIFY_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> ! {
    std::process::exit(run(std::env::args_os()))
}
