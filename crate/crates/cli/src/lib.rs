//! Batch front end for `qei-core`: argument and config handling, output
//! formatting and exit-code policy. The `qei` binary is a thin wrapper over
//! [`run`].

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

/// Exit status for malformed input.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for a failed scientific contract.
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: EXIT_VALIDATION, message: message.into() }
    }

    pub fn contract(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONTRACT, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qei_core::Error> for CliError {
    fn from(e: qei_core::Error) -> Self {
        let code = if e.is_contract_failure() { EXIT_CONTRACT } else { EXIT_VALIDATION };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qei", version, about = "Sharp energy-inequality bounds, sharpness runs and Virasoro checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Config file with `key = value` lines and `[command]` sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// CSV output path; a JSON mirror is written with extension `.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Recorded in the output header; all commands are deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Node count for catalog weights and plotting grids.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative tolerance override.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Catalog weight name.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Catalog parameters, `k=v,k=v`.
    #[arg(long, global = true)]
    pub params: Option<String>,
    /// Two-column CSV input (weight or trajectory) or tensor CSV.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Power-law tail exponent for CSV weights that do not vanish at the edges.
    #[arg(long, global = true)]
    pub tail_exponent: Option<f64>,
    /// Central charge(s), comma separated.
    #[arg(short = 'c', long = "central-charge", global = true)]
    pub central_charge: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sharp lower bound for a weight.
    Bound,
    /// Gap between regularised states and the bound along an ε list.
    Sharpness {
        #[arg(long)]
        eps: Option<String>,
        /// Fixed corrector position (default: automatic).
        #[arg(long)]
        n: Option<f64>,
    },
    /// Moving-mirror vacuum energy grid and mirror bound.
    Mirror {
        /// identity, mobius, accelerating (ignored with --input).
        #[arg(long)]
        trajectory: Option<String>,
        /// Tensor weight CSV for the mirror bound.
        #[arg(long)]
        tensor: Option<PathBuf>,
        /// Built-in tensor weight: locality or separable.
        #[arg(long)]
        scenario: Option<String>,
        /// x⁰ range `lo,hi` of the output grid.
        #[arg(long)]
        x0: Option<String>,
        /// x¹ range `lo,hi` of the output grid.
        #[arg(long)]
        x1: Option<String>,
    },
    /// Bound along a worldline.
    Worldline {
        /// static, boosted, spacelike, or a `lambda,u,v` CSV path.
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        rapidity: Option<f64>,
        #[arg(long)]
        offset: Option<f64>,
        /// Curve kind for CSV input: timelike or spacelike.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        cl: Option<f64>,
        #[arg(long)]
        cr: Option<f64>,
    },
    /// Bound for a spacetime tensor weight.
    Volume {
        /// Built-in tensor weight: locality or separable.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        cl: Option<f64>,
        #[arg(long)]
        cr: Option<f64>,
    },
    /// Half-line integrals of a dilated unweighted family.
    DemoUnweighted {
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Unitarity and commutator checks of truncated Virasoro modules.
    VirasoroCheck {
        /// `c,h` or `c,h,non-unitary`; repeatable.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Truncation level N.
        #[arg(long)]
        level: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Sharpness { .. } => "sharpness",
            Command::Mirror { .. } => "mirror",
            Command::Worldline { .. } => "worldline",
            Command::Volume { .. } => "volume",
            Command::DemoUnweighted { .. } => "demo-unweighted",
            Command::VirasoroCheck { .. } => "virasoro-check",
        }
    }
}

fn overlay(cfg: &mut RunConfig, key: &str, value: Option<String>) {
    if let Some(v) = value {
        cfg.set(key, v);
    }
}

fn path_str(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.to_string_lossy().into_owned())
}

/// Merges the config file with command-line values.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let name = cli.command.name();
    let mut cfg = match &cli.common.config {
        Some(p) => RunConfig::load(name, p)?,
        None => RunConfig::new(name),
    };
    let c = &cli.common;
    overlay(&mut cfg, "out", path_str(&c.out));
    overlay(&mut cfg, "seed", c.seed.map(|x| x.to_string()));
    overlay(&mut cfg, "grid", c.grid.map(|x| x.to_string()));
    overlay(&mut cfg, "tol", c.tol.map(|x| x.to_string()));
    overlay(&mut cfg, "catalog", c.catalog.clone());
    overlay(&mut cfg, "params", c.params.clone());
    overlay(&mut cfg, "input", path_str(&c.input));
    overlay(&mut cfg, "tail_exponent", c.tail_exponent.map(|x| x.to_string()));
    overlay(&mut cfg, "c", c.central_charge.clone());
    match &cli.command {
        Command::Bound => {}
        Command::Sharpness { eps, n } => {
            overlay(&mut cfg, "eps", eps.clone());
            overlay(&mut cfg, "n", n.map(|x| x.to_string()));
        }
        Command::Mirror { trajectory, tensor, scenario, x0, x1 } => {
            overlay(&mut cfg, "trajectory", trajectory.clone());
            overlay(&mut cfg, "tensor", path_str(tensor));
            overlay(&mut cfg, "scenario", scenario.clone());
            overlay(&mut cfg, "x0", x0.clone());
            overlay(&mut cfg, "x1", x1.clone());
        }
        Command::Worldline { curve, rapidity, offset, kind, cl, cr } => {
            overlay(&mut cfg, "curve", curve.clone());
            overlay(&mut cfg, "rapidity", rapidity.map(|x| x.to_string()));
            overlay(&mut cfg, "offset", offset.map(|x| x.to_string()));
            overlay(&mut cfg, "kind", kind.clone());
            overlay(&mut cfg, "cl", cl.map(|x| x.to_string()));
            overlay(&mut cfg, "cr", cr.map(|x| x.to_string()));
        }
        Command::Volume { scenario, cl, cr } => {
            overlay(&mut cfg, "scenario", scenario.clone());
            overlay(&mut cfg, "cl", cl.map(|x| x.to_string()));
            overlay(&mut cfg, "cr", cr.map(|x| x.to_string()));
        }
        Command::DemoUnweighted { lambda } => overlay(&mut cfg, "lambda", lambda.clone()),
        Command::VirasoroCheck { points, level } => {
            if !points.is_empty() {
                cfg.set("points", points.join(";"));
            }
            overlay(&mut cfg, "level", level.map(|x| x.to_string()));
        }
    }
    Ok(cfg)
}

/// Parses arguments, runs the command and writes its output.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError { code: 0, message: e.to_string() },
        _ => CliError::validation(e.to_string()),
    })?;
    let cfg = resolve_config(&cli)?;
    let outcome = commands::dispatch(&cfg)?;
    let out = cfg.get("out").map(PathBuf::from);
    outcome.report.emit(&cfg, out.as_deref(), stdout)?;
    match outcome.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}
