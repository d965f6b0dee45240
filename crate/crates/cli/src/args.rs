//! Command-line flags and the TOML run file that mirrors them.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "axlab", version, about = "Bit-accurate approximate multiplier laboratory")]
pub struct Cli {
    /// Seed for every sampled stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of samples (operand pairs, tiles, signal length or network inputs).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// TOML run file; flags given on the command line win over its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output CSV path (stdout when absent).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "AXLAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error metrics of multiplier configurations over a sampled operand stream.
    Sweep(SweepArgs),
    /// Run a DSP kernel against its accurate baseline.
    Kernel(KernelArgs),
    /// Exhaustive equivalence suites.
    Oracle(OracleArgs),
    /// Non-dominated rows of an error/cost CSV.
    Pareto(ParetoArgs),
    /// Accuracy proxy and energy of assignment schemes on a quantized network.
    Net(NetArgs),
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// Configuration text such as `rad:k=6`; repeatable.
    #[arg(long = "cfg")]
    pub cfg: Vec<String>,
    /// Fixed-point operand width.
    #[arg(long, conflicts_with = "format")]
    pub n: Option<u32>,
    /// Floating-point format (`half` or `single`).
    #[arg(long)]
    pub format: Option<String>,
    /// Sweep every B with A held fixed.
    #[arg(long)]
    pub exhaustive_b: bool,
    /// A operand for `--exhaustive-b`.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<i64>,
    /// Every (A, B) pair; narrow widths only.
    #[arg(long, conflicts_with = "exhaustive_b")]
    pub exhaustive: bool,
    /// Energy table CSV (`bundled` for the shipped one); adds a cost_units column.
    #[arg(long)]
    pub energy_table: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct KernelArgs {
    /// sobel, blur, fir or matmul.
    pub name: Option<String>,
    #[arg(long)]
    pub cfg: Option<String>,
    /// Binary or ASCII PGM (bundled image when absent).
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Text file with one integer sample per line (FIR).
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Sobel gradient-magnitude threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Where to write the approximate output raster or stream.
    #[arg(long)]
    pub artifact: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct OracleArgs {
    /// fixed, dlsb, partition, dyfxu, winograd or all.
    pub suite: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct ParetoArgs {
    /// CSV with a header row.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub error_col: Option<String>,
    #[arg(long)]
    pub cost_col: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct NetArgs {
    /// `.axnet` network (bundled toy network when absent).
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Assignment scheme TOML; repeatable.
    #[arg(long)]
    pub scheme: Vec<PathBuf>,
    /// Uniform scheme with this configuration everywhere; repeatable.
    #[arg(long = "cfg")]
    pub cfg: Vec<String>,
    /// Energy table CSV (bundled when absent).
    #[arg(long)]
    pub energy_table: Option<PathBuf>,
}

/// The run file. Top-level keys match the global flags, tables match the
/// subcommands.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub sweep: SweepFile,
    #[serde(default)]
    pub kernel: KernelFile,
    #[serde(default)]
    pub oracle: OracleFile,
    #[serde(default)]
    pub pareto: ParetoFile,
    #[serde(default)]
    pub net: NetFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default)]
    pub cfg: Vec<String>,
    pub n: Option<u32>,
    pub format: Option<String>,
    pub exhaustive_b: Option<bool>,
    pub a: Option<i64>,
    pub exhaustive: Option<bool>,
    pub energy_table: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFile {
    pub name: Option<String>,
    pub cfg: Option<String>,
    pub image: Option<PathBuf>,
    pub signal: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub artifact: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    pub suite: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParetoFile {
    pub input: Option<PathBuf>,
    pub error_col: Option<String>,
    pub cost_col: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetFile {
    pub network: Option<PathBuf>,
    #[serde(default)]
    pub scheme: Vec<PathBuf>,
    #[serde(default)]
    pub cfg: Vec<String>,
    pub energy_table: Option<PathBuf>,
}

impl RunFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Global settings after merging flags over the run file.
#[derive(Debug)]
pub struct Globals {
    pub seed: u64,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

fn or_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

/// Merges the run file under the flags. The run file's own relative paths
/// are kept as written.
pub fn merge(cli: Cli) -> Result<(Globals, Command)> {
    let file = match &cli.config {
        Some(p) => RunFile::load(p)?,
        None => RunFile::default(),
    };
    let globals = Globals {
        seed: cli.seed.or(file.seed).unwrap_or(1),
        samples: cli.samples.or(file.samples),
        out: cli.out.or(file.out),
        threads: cli.threads.or(file.threads),
    };
    let command = match cli.command {
        Command::Sweep(a) => {
            let f = file.sweep;
            Command::Sweep(SweepArgs {
                cfg: or_vec(a.cfg, f.cfg),
                n: a.n.or(if a.format.is_some() { None } else { f.n }),
                format: a.format.or(if a.n.is_some() { None } else { f.format }),
                exhaustive_b: a.exhaustive_b || (!a.exhaustive && f.exhaustive_b.unwrap_or(false)),
                a: a.a.or(f.a),
                exhaustive: a.exhaustive || (!a.exhaustive_b && f.exhaustive.unwrap_or(false)),
                energy_table: a.energy_table.or(f.energy_table),
            })
        }
        Command::Kernel(a) => {
            let f = file.kernel;
            Command::Kernel(KernelArgs {
                name: a.name.or(f.name),
                cfg: a.cfg.or(f.cfg),
                image: a.image.or(f.image),
                signal: a.signal.or(f.signal),
                threshold: a.threshold.or(f.threshold),
                artifact: a.artifact.or(f.artifact),
            })
        }
        Command::Oracle(a) => Command::Oracle(OracleArgs { suite: a.suite.or(file.oracle.suite) }),
        Command::Pareto(a) => {
            let f = file.pareto;
            Command::Pareto(ParetoArgs {
                input: a.input.or(f.input),
                error_col: a.error_col.or(f.error_col),
                cost_col: a.cost_col.or(f.cost_col),
            })
        }
        Command::Net(a) => {
            let f = file.net;
            // schemes and configs together form one list; either source replaces the other
            let (scheme, cfg) = if a.scheme.is_empty() && a.cfg.is_empty() { (f.scheme, f.cfg) } else { (a.scheme, a.cfg) };
            Command::Net(NetArgs { network: a.network.or(f.network), scheme, cfg, energy_table: a.energy_table.or(f.energy_table) })
        }
    };
    Ok((globals, command))
}
