//! `hurst` command line: estimate H for a series file, run the Monte Carlo
//! grid, or print the expected R/S correction.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 estimation or simulation
//! error, 4 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use thiserror::Error;

use crate::error::HurstError;
use crate::estimate::{MaxWindowRule, Method, WindowPolicy};
use crate::montecarlo::{
    grid, run_grid, EstimatorSettings, GridConfig, COMPARED_METHODS, DEFAULT_ITERATION_COUNTS,
    DEFAULT_LAMBDAS, DEFAULT_SIZES, MIN_SERIES_LENGTH,
};
use crate::report::{self, EstimateDocument};
use crate::rescaled_range::expected_rs;
use crate::series::{SdMode, TimeSeries};
use crate::vtp::{RemainderRule, ScaleRule};

pub const SEED_ENV: &str = "HURST_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Estimation(#[from] HurstError),

    #[error("{method}: {source}")]
    Method { method: Method, source: HurstError },

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Input(_) => 2,
            CliError::Estimation(_) | CliError::Method { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hurst", version, about = "Hurst exponent estimation and estimator comparison")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate H for a series file (one value per line, `#` comments allowed).
    Estimate(EstimateArgs),
    /// Run the Monte Carlo grid on exponential data and write a report.
    Simulate(SimulateArgs),
    /// Print the expected R/S for one window length or an inclusive range `A..B`.
    ExpectedRs(ExpectedRsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Rs,
    Rsal,
    Dfa,
    Vtp,
    All,
}

impl MethodArg {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Rs => vec![Method::Rs],
            MethodArg::Rsal => vec![Method::Rsal],
            MethodArg::Dfa => vec![Method::Dfa],
            MethodArg::Vtp => vec![Method::Vtp],
            MethodArg::All => COMPARED_METHODS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Parses a value through its serde name, so the CLI spelling matches the
/// report spelling.
fn serde_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorOptions {
    /// Smallest R/S and DFA window length (DFA never goes below 4).
    #[arg(long, default_value_t = WindowPolicy::default().min_window())]
    pub min_window: usize,

    /// Largest window: half-n or full-n.
    #[arg(long, value_parser = serde_name::<MaxWindowRule>, default_value = "half-n")]
    pub max_window: MaxWindowRule,

    /// Subseries standard deviation denominator: sample or population.
    #[arg(long, value_parser = serde_name::<SdMode>, default_value = "sample")]
    pub sd_mode: SdMode,

    /// VTP block sizes: all or divisors-only.
    #[arg(long, value_parser = serde_name::<ScaleRule>, default_value = "all")]
    pub vtp_scales: ScaleRule,

    /// VTP trailing observations: partial or discard.
    #[arg(long, value_parser = serde_name::<RemainderRule>, default_value = "partial")]
    pub vtp_remainder: RemainderRule,
}

impl EstimatorOptions {
    pub fn settings(&self) -> Result<EstimatorSettings, CliError> {
        let window_policy = WindowPolicy::new(self.min_window, self.max_window)
            .map_err(|e| CliError::Input(e.to_string()))?;
        Ok(EstimatorSettings {
            window_policy,
            sd_mode: self.sd_mode,
            vtp_scales: self.vtp_scales,
            vtp_remainder: self.vtp_remainder,
        })
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Series file, or `-` for standard input.
    pub input: String,

    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,

    #[arg(long, value_enum, default_value = "text")]
    pub format: TextFormat,

    #[command(flatten)]
    pub options: EstimatorOptions,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Exponential rate parameters.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LAMBDAS)]
    pub lambdas: Vec<f64>,

    /// Series lengths.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
    pub sizes: Vec<usize>,

    /// Replications per cell.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ITERATION_COUNTS)]
    pub iteration_counts: Vec<usize>,

    /// Master seed for every random stream.
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Report path. Plot data files are written next to it. Without it the
    /// report goes to standard output and no plot files are written.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,

    /// Store the wall-clock duration in the report (breaks byte-identity
    /// between reruns).
    #[arg(long)]
    pub record_timing: bool,

    #[command(flatten)]
    pub options: EstimatorOptions,
}

#[derive(Debug, Args)]
pub struct ExpectedRsArgs {
    /// Window length `n` or inclusive range `A..B`.
    pub n: String,
}

/// Reads a series file: one decimal value per line, blank lines and lines
/// starting with `#` ignored. Errors carry the 1-based line number.
pub fn parse_series(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| CliError::Parse { line: i + 1, message };
        let value: f64 = line
            .parse()
            .map_err(|_| parse_err(format!("not a number: {line:?}")))?;
        if !value.is_finite() {
            return Err(parse_err(format!("value is not finite: {line:?}")));
        }
        values.push(value);
    }
    Ok(values)
}

/// `n` or `A..B` (inclusive), every value at least 2.
pub fn parse_window_range(arg: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let number = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("invalid window length {s:?}")))
    };
    let (lo, hi) = match arg.split_once("..") {
        Some((a, b)) => (number(a)?, number(b)?),
        None => {
            let n = number(arg)?;
            (n, n)
        }
    };
    if lo < 2 {
        return Err(CliError::Input(format!("window length must be at least 2, got {lo}")));
    }
    if hi < lo {
        return Err(CliError::Input(format!("empty range {lo}..{hi}")));
    }
    Ok(lo..=hi)
}

fn read_input(input: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if input == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::io("<stdin>", e))?;
    } else {
        text = std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    }
    Ok(text)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(args) => cmd_estimate(&args, out),
        Command::Simulate(args) => cmd_simulate(&args, out),
        Command::ExpectedRs(args) => cmd_expected_rs(&args, out),
    }
}

pub fn estimate_document(
    input: &str,
    values: Vec<f64>,
    methods: &[Method],
    settings: &EstimatorSettings,
) -> Result<EstimateDocument, CliError> {
    if values.len() < MIN_SERIES_LENGTH {
        return Err(HurstError::SeriesTooShortForEstimation {
            len: values.len(),
            min: MIN_SERIES_LENGTH,
        }
        .into());
    }
    let series = TimeSeries::new(values)?;
    let results = methods
        .iter()
        .map(|&method| {
            settings
                .run(method, &series)
                .map_err(|source| CliError::Method { method, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EstimateDocument {
        input: input.to_string(),
        length: series.len(),
        settings: *settings,
        results,
    })
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let settings = args.options.settings()?;
    let values = parse_series(&read_input(&args.input)?)?;
    let doc = estimate_document(&args.input, values, &args.method.methods(), &settings)?;
    let text = match args.format {
        TextFormat::Text => doc.to_text(),
        TextFormat::Json => doc.to_json(),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn render(report: &crate::montecarlo::SimulationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => report::to_json(report),
        ReportFormat::Csv => report::table_csv(report),
    }
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let settings = args.options.settings()?;
    let config = GridConfig {
        cells: grid(&args.lambdas, &args.sizes, &args.iteration_counts),
        master_seed: args.seed,
        settings,
        threads: args.threads,
    };

    // Fail on an unwritable path before spending time on the grid.
    let file = match &args.out {
        Some(path) => Some(File::create(path).map_err(|e| CliError::io(path, e))?),
        None => None,
    };

    let started = Instant::now();
    let mut report = run_grid(&config)?;
    if args.record_timing {
        report.metadata.duration_secs = Some(started.elapsed().as_secs_f64());
    }
    let text = render(&report, args.format);

    let (Some(path), Some(file)) = (&args.out, file) else {
        return out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e));
    };
    let mut writer = BufWriter::new(file);
    writer
        .write_all(text.as_bytes())
        .and_then(|_| writer.flush())
        .map_err(|e| CliError::io(path, e))?;

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let dir = path.parent().unwrap_or(Path::new(""));
    for plot in report::plot_data(&report) {
        let plot_path = dir.join(plot.file_name(&stem));
        std::fs::write(&plot_path, plot.csv).map_err(|e| CliError::io(&plot_path, e))?;
    }
    Ok(())
}

fn cmd_expected_rs(args: &ExpectedRsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let range = parse_window_range(&args.n)?;
    let mut text = String::from("n,expected_rs\n");
    for n in range {
        let e = expected_rs(n).map_err(|e| CliError::Input(e.to_string()))?;
        text.push_str(&format!("{n},{e:.10}\n"));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}
