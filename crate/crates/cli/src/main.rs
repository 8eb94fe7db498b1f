//! `graphcon`: command-line front end for graph generation, matrix export,
//! consensus and accretion runs, root-finding comparisons and sampling.
//!
//! Every command reads its settings from flags and/or a JSON file given
//! with `--config` (flags win), writes its files under `--out`, and draws
//! randomness only from explicit seeds.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

mod central;
mod consensus;
mod dist;
mod graph;
mod root;
mod svg;

#[derive(Parser, Debug)]
#[command(name = "graphcon", version, about = "Graphs, consensus, accretion and root finding")]
struct Cli {
    /// Seed for commands that draw random numbers; fills in seeds missing
    /// from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// JSON settings file for the command.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build graphs and export their matrices.
    Graph {
        #[command(subcommand)]
        command: graph::GraphCommand,
    },
    /// Distributed averaging on a random graph.
    Consensus {
        #[command(subcommand)]
        command: consensus::ConsensusCommand,
    },
    /// Centralized accretion of a 2-D point cloud.
    Central {
        #[command(subcommand)]
        command: central::CentralCommand,
    },
    /// Scalar root finding.
    Root {
        #[command(subcommand)]
        command: root::RootCommand,
    },
    /// Distribution sampling.
    Dist {
        #[command(subcommand)]
        command: dist::DistCommand,
    },
}

/// Settings shared by every command.
pub struct Globals {
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub config: Option<PathBuf>,
}

impl Globals {
    /// Parses the `--config` file as `T`, or `T::default()` without one.
    pub fn config_or_default<T: DeserializeOwned + Default>(&self) -> Result<T> {
        match &self.config {
            Some(path) => read_json(path),
            None => Ok(T::default()),
        }
    }

    /// The `--config` file as raw JSON; an error when it was not given.
    pub fn config_value(&self, command: &str) -> Result<serde_json::Value> {
        let path = self
            .config
            .as_ref()
            .with_context(|| format!("{command} needs --config FILE"))?;
        read_json(path)
    }

    pub fn out_dir(&self) -> Result<&Path> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        Ok(&self.out)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Builds a file in memory, then writes it in one go.
pub fn write_output<F>(dir: &Path, name: &str, build: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let path = dir.join(name);
    let mut buf = Vec::new();
    build(&mut buf).with_context(|| format!("building {}", path.display()))?;
    std::fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    write_output(dir, name, |buf| {
        buf.extend_from_slice(text.as_bytes());
        Ok(())
    })
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

/// Outcome of a command that ran to the end: `Ok(false)` means some
/// requested artifact could not be produced (already reported on stderr).
type Outcome = Result<bool>;

fn run(cli: Cli) -> Outcome {
    let globals = Globals {
        seed: cli.seed,
        out: cli.out,
        config: cli.config,
    };
    match cli.command {
        Command::Graph { command } => graph::run(command, &globals),
        Command::Consensus { command } => consensus::run(command, &globals),
        Command::Central { command } => central::run(command, &globals),
        Command::Root { command } => root::run(command, &globals),
        Command::Dist { command } => dist::run(command, &globals),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
