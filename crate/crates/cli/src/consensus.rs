use anyhow::{Context, Result};
use clap::Subcommand;
use graphcon::consensus::{degree_weighted_average, run_experiment, ConsensusConfig, RejectedGraph};
use graphcon::io::write_edge_list;
use serde::Serialize;

use crate::svg::{color, extent, Chart};
use crate::{write_json, write_output, write_text, Globals, Outcome};

#[derive(Subcommand, Debug)]
pub enum ConsensusCommand {
    /// Run one experiment from `--config`. Writes trace.csv,
    /// degree_stats.csv, edges.csv, run.json and SVG charts.
    Run,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    config: &'a ConsensusConfig,
    graph_seed_used: u64,
    rejected: &'a [RejectedGraph],
    edges: usize,
    converged: bool,
    iterations_run: usize,
    consensus_value: Option<f64>,
    degree_weighted_average: f64,
}

/// Parses the config, letting `--seed` fill in missing seeds.
fn load_config(globals: &Globals) -> Result<ConsensusConfig> {
    let mut value = globals.config_value("consensus run")?;
    if let (Some(seed), Some(obj)) = (globals.seed, value.as_object_mut()) {
        for key in ["graph_seed", "value_seed"] {
            obj.entry(key).or_insert(seed.into());
        }
    }
    serde_json::from_value(value).context("invalid consensus config")
}

fn run_once(globals: &Globals) -> Outcome {
    let config = load_config(globals)?;
    let exp = run_experiment(&config)?;
    for r in &exp.rejected {
        eprintln!("skipped graph seed {}: {}", r.seed, r.reason);
    }
    let trace = &exp.trace;
    let out = globals.out_dir()?;

    write_output(out, "trace.csv", |buf| Ok(trace.write_csv(buf)?))?;
    write_output(out, "degree_stats.csv", |buf| Ok(exp.degree_statistics.write_csv(buf)?))?;
    write_output(out, "edges.csv", |buf| Ok(write_edge_list(&exp.graph, buf)?))?;

    let record = RunRecord {
        config: &config,
        graph_seed_used: exp.graph_seed,
        rejected: &exp.rejected,
        edges: exp.graph.edge_count(),
        converged: trace.converged,
        iterations_run: trace.iterations_run,
        consensus_value: trace.consensus_value,
        degree_weighted_average: degree_weighted_average(&exp.graph, &trace.values[0]),
    };
    write_json(out, "run.json", &record)?;

    let last = trace.values.len().saturating_sub(1) as f64;
    let mut chart = Chart::new(
        "Node values",
        "iteration",
        "value",
        (0.0, last),
        extent(trace.values.iter().flatten()),
    );
    for node in 0..config.n {
        let line: Vec<(f64, f64)> = trace
            .values
            .iter()
            .enumerate()
            .map(|(t, x)| (t as f64, x[node]))
            .collect();
        chart.polyline(&line, color(node));
    }
    write_text(out, "trace.svg", &chart.render())?;

    let stats = &exp.degree_statistics;
    let degrees: Vec<f64> = stats.histogram.iter().map(|&(d, _)| d as f64).collect();
    let (lo, hi) = extent(&degrees);
    let top = stats.histogram.iter().map(|&(_, c)| c).max().unwrap_or(1) as f64;
    let mut hist = Chart::new("Degree histogram", "degree", "nodes", (lo - 0.5, hi + 0.5), (0.0, top));
    for &(d, c) in &stats.histogram {
        let d = d as f64;
        hist.rect((d - 0.4, 0.0), (d + 0.4, c as f64), color(0), 0.8);
    }
    write_text(out, "degree_histogram.svg", &hist.render())?;

    let mut cum = Chart::new(
        "Cumulative degree frequency",
        "degree",
        "nodes with at most this degree",
        (lo - 0.5, hi + 0.5),
        (0.0, config.n as f64),
    );
    let points: Vec<(f64, f64)> = stats.cumulative.iter().map(|&(d, c)| (d as f64, c as f64)).collect();
    cum.points(&points, color(1), 3.0);
    write_text(out, "degree_cumulative.svg", &cum.render())?;

    match trace.consensus_value {
        Some(v) => println!("converged to {v} after {} iterations", trace.iterations_run),
        None => println!("no consensus after {} iterations", trace.iterations_run),
    }
    Ok(true)
}

pub fn run(command: ConsensusCommand, globals: &Globals) -> Outcome {
    match command {
        ConsensusCommand::Run => run_once(globals),
    }
}
