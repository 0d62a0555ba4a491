//! Command-line front end. [`run`] parses arguments and returns the exit
//! code: 0 on success, 1 when a check fails, 2 on usage or parameter errors.

mod commands;
mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stablewave::Error;

#[derive(Parser, Debug)]
#[command(name = "stablewave", version, about = "Stable random wavelet series with fractional integration")]
pub struct Cli {
    /// File of `key=value` lines used as defaults for flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw symmetric p-stable variates.
    SampleStable(SampleArgs),
    /// Synthesise the field Y_gamma and write it as FSF.
    Field(FieldArgs),
    /// Law of the pairing of X_gamma with a test function.
    Pair(PairArgs),
    /// Truncation residuals over a ladder of scale windows.
    Tails(TailArgs),
    /// Numerical checks; prints `CHECK <name> <PASS|FAIL> <value> <bound>` lines.
    Verify(VerifyArgs),
    /// Periodogram slope of a stored field.
    Spectrum(SpectrumArgs),
    /// Box-counting dimension and Frostman energy of a stored field.
    Hausdorff(HausdorffArgs),
    /// Kolmogorov-Smirnov distance of samples to a stable law.
    Ks(KsArgs),
    /// Convert a stored 2-D field to a 16-bit PGM raster.
    ExportPgm(ExportArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Write the samples, one per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long)]
    pub d: usize,
    /// Samples per axis (power of two).
    #[arg(long)]
    pub n: usize,
    /// Side length of the periodic box (power of two).
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    /// Wavelet basis tag, e.g. db6.
    #[arg(long, default_value = "db6")]
    pub basis: String,
    #[arg(long)]
    pub jmin: Option<i32>,
    #[arg(long)]
    pub jmax: Option<i32>,
    /// Leave the scaling coefficients out of the series.
    #[arg(long)]
    pub no_scaling: bool,
    /// Skip parameter-window validation (negative controls).
    #[arg(long = "unsafe")]
    pub unchecked: bool,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ShapeArg {
    Bump,
    Deriv,
    Modulated,
    /// Grid-scale impulse; not smooth, for negative controls.
    Impulse,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "deriv")]
    pub shape: ShapeArg,
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Dilation of the test function.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Monte Carlo draws; 0 prints the exact scale only.
    #[arg(long, default_value_t = 0)]
    pub draws: usize,
    #[arg(long, default_value_t = 256)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 4.0)]
    pub length: f64,
    #[arg(long, default_value = "db6")]
    pub basis: String,
    #[arg(long = "unsafe")]
    pub unchecked: bool,
    /// Write the draws, one per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TailMode {
    Pairing,
    Point,
}

#[derive(Args, Debug)]
pub struct TailArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "pairing")]
    pub mode: TailMode,
    /// Finest scale of each rung, comma separated and increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8])]
    pub ladder: Vec<i32>,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
    /// Test function for `--mode pairing`.
    #[arg(long, value_enum, default_value = "deriv")]
    pub shape: ShapeArg,
    /// Test-function radius, or the distance of the point from the origin.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    #[arg(long, default_value = "db6")]
    pub basis: String,
    #[arg(long = "unsafe")]
    pub unchecked: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Check {
    Parseval,
    Scaling,
    Semigroup,
    Laplacian,
    Kernel,
    T1,
    Weighted,
    Ssbounds,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.4)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.75)]
    pub gamma: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.45)]
    pub s: f64,
    /// Dilations for `ssbounds`.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0])]
    pub a: Vec<f64>,
    #[arg(long, default_value = "db6")]
    pub basis: String,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
}

#[derive(Args, Debug)]
pub struct HausdorffArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Frostman exponents to evaluate.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct KsArgs {
    /// Samples, one per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Failure modes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A verification check did not pass.
    Check,
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

/// Turns the `--config` file into flags placed right after the subcommand
/// path, skipping keys that are also given on the command line.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let pos = argv.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(argv) };
    let (path, skip) = match argv[pos].split_once('=') {
        Some((_, p)) => (p.to_string(), 1),
        None => match argv.get(pos + 1) {
            Some(p) => (p.clone(), 2),
            None => return Err(Failure::Usage("--config needs a path".into())),
        },
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config {path}: {e}")))?;
    let mut rest: Vec<String> = argv[..pos].iter().chain(&argv[pos + skip..]).cloned().collect();
    let given = |key: &str| rest.iter().any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")));
    let mut extra = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("{path}:{}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if given(k) {
            continue;
        }
        match v {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => extra.push(format!("--{k}={v}")),
        }
    }
    // after the program name, the subcommand and, for verify, the check name
    let mut at = 1 + rest.iter().skip(1).take_while(|a| !a.starts_with('-')).count();
    at = at.min(rest.len());
    rest.splice(at..at, extra);
    Ok(rest)
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(f) => return report(f),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let result = match cli.command {
        Command::SampleStable(a) => commands::sample_stable(&a),
        Command::Field(a) => commands::field(&a),
        Command::Pair(a) => commands::pair(&a),
        Command::Tails(a) => commands::tails(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Hausdorff(a) => commands::hausdorff(&a),
        Command::Ks(a) => commands::ks(&a),
        Command::ExportPgm(a) => commands::export_pgm(&a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => report(f),
    }
}

fn report(f: Failure) -> i32 {
    match f {
        Failure::Check => 1,
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            2
        }
        Failure::Lib(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
