use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use graphcon::distributions::{analytic_moments, sample, DistributionSpec};
use serde::Deserialize;

use crate::{write_output, Globals, Outcome};

#[derive(Subcommand, Debug)]
pub enum DistCommand {
    /// Draw seeded samples; writes samples.csv with a `value` column.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Distribution as JSON, e.g. '{"kind":"normal","mu":0,"sigma":1}'.
    #[arg(long)]
    spec: Option<String>,
    /// Number of draws (default 1000).
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleConfig {
    spec: Option<DistributionSpec>,
    count: Option<usize>,
    seed: Option<u64>,
}

fn sample_cmd(args: SampleArgs, globals: &Globals) -> Outcome {
    let config: SampleConfig = globals.config_or_default()?;
    let spec = match args.spec {
        Some(text) => serde_json::from_str(&text).context("parsing --spec")?,
        None => config.spec.context("dist sample needs --spec JSON or \"spec\" in the config")?,
    };
    let count = args.count.or(config.count).unwrap_or(1000);
    let seed = config
        .seed
        .or(globals.seed)
        .context("dist sample needs --seed or \"seed\" in the config")?;
    let draws = sample(&spec, count, seed)?;
    let out = globals.out_dir()?;
    write_output(out, "samples.csv", |buf| write_values(&draws, buf))?;

    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = if draws.len() > 1 {
        draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let m = analytic_moments(&spec)?;
    println!(
        "{}: {count} draws, mean {mean:.6} (expected {:.6}), variance {var:.6} (expected {:.6})",
        spec.name(),
        m.mean,
        m.variance
    );
    Ok(true)
}

fn write_values(values: &[f64], buf: &mut Vec<u8>) -> Result<()> {
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(["value"])?;
    for v in values {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(command: DistCommand, globals: &Globals) -> Outcome {
    match command {
        DistCommand::Sample(args) => sample_cmd(args, globals),
    }
}
