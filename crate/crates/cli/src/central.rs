use anyhow::{Context, Result};
use clap::Subcommand;
use graphcon::centralized::{center_stability, run_accretion, AccretionConfig, Snapshot};
use serde::Serialize;

use crate::svg::{color, Chart};
use crate::{write_json, write_output, write_text, Globals, Outcome};

#[derive(Subcommand, Debug)]
pub enum CentralCommand {
    /// Run one accretion from `--config`. Writes per-snapshot points,
    /// density grids and SVG panels, plus snapshots.csv and run.json.
    Run,
}

#[derive(Serialize)]
struct SnapshotRecord {
    iteration: usize,
    points: usize,
    center: (f64, f64),
    drift: Option<f64>,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    config: &'a AccretionConfig,
    snapshots: Vec<SnapshotRecord>,
}

fn load_config(globals: &Globals) -> Result<AccretionConfig> {
    let mut value = globals.config_value("central run")?;
    if let (Some(seed), Some(obj)) = (globals.seed, value.as_object_mut()) {
        obj.entry("seed").or_insert(seed.into());
    }
    serde_json::from_value(value).context("invalid accretion config")
}

fn panel(s: &Snapshot) -> String {
    let g = &s.grid;
    let x = (g.x_edges[0], *g.x_edges.last().expect("edges"));
    let y = (g.y_edges[0], *g.y_edges.last().expect("edges"));
    let title = format!("After {} iterations ({} points)", s.iteration, s.state.points.len());
    let mut chart = Chart::new(&title, "x", "y", x, y);
    let top = g.counts.iter().flatten().copied().max().unwrap_or(0).max(1) as f64;
    for (i, row) in g.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let corner = (g.x_edges[i], g.y_edges[j]);
                let opposite = (g.x_edges[i + 1], g.y_edges[j + 1]);
                chart.rect(corner, opposite, color(0), 0.1 + 0.9 * c as f64 / top);
            }
        }
    }
    chart.points(&[s.state.center], color(3), 4.0);
    chart.render()
}

fn run_once(globals: &Globals) -> Outcome {
    let config = load_config(globals)?;
    let snaps = run_accretion(&config)?;
    let drift = if snaps.len() >= 2 {
        center_stability(&snaps)?.into_iter().map(Some).collect()
    } else {
        vec![None; snaps.len()]
    };
    let out = globals.out_dir()?;

    for s in &snaps {
        let t = s.iteration;
        write_output(out, &format!("snapshot_{t}.csv"), |buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["x", "y"])?;
            for &(x, y) in &s.state.points {
                w.write_record([x.to_string(), y.to_string()])?;
            }
            w.flush()?;
            Ok(())
        })?;
        write_output(out, &format!("density_{t}.csv"), |buf| Ok(s.grid.write_csv(buf)?))?;
        write_json(out, &format!("density_{t}.json"), &s.grid)?;
        write_text(out, &format!("snapshot_{t}.svg"), &panel(s))?;
    }

    write_output(out, "snapshots.csv", |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["iteration", "points", "center_x", "center_y", "drift"])?;
        for (s, d) in snaps.iter().zip(&drift) {
            w.write_record([
                s.iteration.to_string(),
                s.state.points.len().to_string(),
                s.state.center.0.to_string(),
                s.state.center.1.to_string(),
                d.map_or(String::new(), |d| d.to_string()),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;

    let record = RunRecord {
        config: &config,
        snapshots: snaps
            .iter()
            .zip(&drift)
            .map(|(s, &drift)| SnapshotRecord {
                iteration: s.iteration,
                points: s.state.points.len(),
                center: s.state.center,
                drift,
            })
            .collect(),
    };
    write_json(out, "run.json", &record)?;

    if let Some(s) = snaps.last() {
        println!(
            "{} points after {} iterations, center ({}, {})",
            s.state.points.len(),
            s.iteration,
            s.state.center.0,
            s.state.center.1
        );
    }
    Ok(true)
}

pub fn run(command: CentralCommand, globals: &Globals) -> Outcome {
    match command {
        CentralCommand::Run => run_once(globals),
    }
}
