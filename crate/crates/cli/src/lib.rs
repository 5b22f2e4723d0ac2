//! Command-line front end for `gaugecalc`.
//!
//! Every command takes flags or a TOML config (`--config`), emits one
//! deterministic report and exits with 0 (success), 2 (an assertion suite
//! failed) or 1 (invalid input).

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod inputs;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gaugecalc::curves::TorusFamily;

pub use config::{CommandKind, ComplexArg, Format, RunConfig};
pub use error::{CliError, CliResult};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "gaugecalc", version, about = "Gauge-field calculus on the flat torus and punctured plane")]
struct Cli {
    /// TOML file mirroring the flags; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run every invariant suite.
    Verify(Flags),
    /// Sample the torus connection family and report flatness and residuals.
    TorusCurve(Flags),
    /// Yang-Mills residual of a grid connection.
    Residual(Flags),
    /// Transport and Wilson loops along paths.
    Holonomy(Flags),
    /// Aharonov-Bohm monodromy around the unit circle.
    Ab(Flags),
    /// Wong spin evolution along a path.
    Wong(Flags),
    /// Harmonic kernel dimensions of a flat connection.
    Spectrum(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Grid nodes per axis.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Integration steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Primary tolerance of the command.
    #[arg(long)]
    tol: Option<f64>,
    /// Named tolerance override, repeatable.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Seed for randomized suites and fields.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Aharonov-Bohm coefficient: re, re+imi or re-imi.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<ComplexArg>,
    #[arg(long, allow_hyphen_values = true)]
    winding: Option<i32>,
    /// Weight of the second algebra direction in the torus family.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Number of evenly spaced t samples in [0, 1].
    #[arg(long)]
    samples: Option<usize>,
    /// Path `family:params` (x, y, circle, segment), joined with `+`, `~` reverses; repeatable.
    #[arg(long = "loop", value_name = "FAMILY:PARAMS", allow_hyphen_values = true)]
    loops: Vec<String>,
    /// Field or potential specification.
    #[arg(long, allow_hyphen_values = true)]
    field: Option<String>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Form degree for `spectrum`.
    #[arg(long)]
    degree: Option<usize>,
    /// Initial su(2) spin coordinates `a,b,c`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    spin: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum FamilyArg {
    Seamed,
    Smooth,
}

impl Flags {
    fn into_config(self, command: CommandKind) -> CliResult<RunConfig> {
        let spin = match self.spin {
            None => None,
            Some(v) if v.len() == 3 => Some([v[0], v[1], v[2]]),
            Some(v) => return Err(CliError::Invalid(format!("`spin` takes 3 coordinates, got {}", v.len()))),
        };
        let tolerances = self
            .tolerances
            .iter()
            .map(|kv| {
                let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Invalid(format!("tolerance {kv:?} must be NAME=VALUE")))?;
                let v = v.trim().parse::<f64>().map_err(|_| CliError::Invalid(format!("tolerance {kv:?}: bad number")))?;
                Ok((k.trim().to_string(), v))
            })
            .collect::<CliResult<_>>()?;
        Ok(RunConfig {
            command: Some(command),
            grid: self.grid,
            steps: self.steps,
            tol: self.tol,
            seed: self.seed,
            out: self.out,
            format: self.format,
            k: self.k,
            winding: self.winding,
            lambda: self.lambda,
            samples: self.samples,
            loops: self.loops,
            field: self.field,
            family: self.family.map(|f| match f {
                FamilyArg::Seamed => TorusFamily::Seamed,
                FamilyArg::Smooth => TorusFamily::Smooth,
            }),
            degree: self.degree,
            spin,
            tolerances,
        })
    }
}

/// Merged configuration from the command line and an optional config file.
pub fn parse_args<I, S>(args: I) -> CliResult<RunConfig>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            let _ = e.print();
            std::process::exit(0)
        }
        _ => {
            let msg = e.to_string();
            CliError::Invalid(msg.trim_start_matches("error: ").trim_end().to_string())
        }
    })?;
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let flags = match cli.command {
        None => RunConfig::default(),
        Some(cmd) => {
            let (kind, flags) = match cmd {
                Cmd::Verify(f) => (CommandKind::Verify, f),
                Cmd::TorusCurve(f) => (CommandKind::TorusCurve, f),
                Cmd::Residual(f) => (CommandKind::Residual, f),
                Cmd::Holonomy(f) => (CommandKind::Holonomy, f),
                Cmd::Ab(f) => (CommandKind::Ab, f),
                Cmd::Wong(f) => (CommandKind::Wong, f),
                Cmd::Spectrum(f) => (CommandKind::Spectrum, f),
            };
            if let Some(fc) = file.command {
                if fc != kind {
                    return Err(CliError::Invalid(format!("config file is for `{fc}` but the command line asks for `{kind}`")));
                }
            }
            flags.into_config(kind)?
        }
    };
    Ok(flags.over(file))
}

/// Runs a config and writes its report; returns the exit status.
pub fn run_config(cfg: &RunConfig) -> CliResult<i32> {
    let report = commands::execute(cfg)?;
    let text = report.render(cfg.format.unwrap_or_default());
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    Ok(if report.passed { 0 } else { 2 })
}

/// Full entry point: parse, run, map errors to exit status 1.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    match parse_args(args).and_then(|cfg| run_config(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gaugecalc: {e}");
            e.exit_code()
        }
    }
}
