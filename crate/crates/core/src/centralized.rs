//! Centralized accretion: a point cloud grows by fixed-size batches while a
//! central estimate tracks the mean of everything received so far.
//!
//! Points never move once added. Each point takes its `x` coordinate from
//! `spec_x` and then its `y` coordinate from `spec_y`, both drawn from one
//! [`crate::rng::SimRng`] stream seeded once per run, so a seed reproduces
//! every snapshot exactly.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{invalid, Result};
use crate::rng::seeded;

pub type Point = (f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct AccretionState {
    pub points: Vec<Point>,
    pub iteration: usize,
    pub center: Point,
    pub spec_x: DistributionSpec,
    pub spec_y: DistributionSpec,
}

/// Per-cell point counts over a rectangular grid.
///
/// `counts[i][j]` covers `x_edges[i]..x_edges[i+1]` and
/// `y_edges[j]..y_edges[j+1]`; cells are half-open except the last in each
/// direction, which includes its upper edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    pub counts: Vec<Vec<u64>>,
}

impl DensityGrid {
    /// Counts `points` on an equal-width grid over `[x_lo, x_hi] x [y_lo, y_hi]`;
    /// points outside are skipped.
    pub fn with_bounds(points: &[Point], x: (f64, f64), y: (f64, f64), bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(invalid("bins must be at least 1"));
        }
        for (lo, hi) in [x, y] {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(invalid(format!("grid bounds [{lo}, {hi}] are not increasing")));
            }
        }
        let x_edges = edges(x, bins);
        let y_edges = edges(y, bins);
        let mut counts = vec![vec![0u64; bins]; bins];
        for &(px, py) in points {
            if let (Some(i), Some(j)) = (cell(px, x, bins), cell(py, y, bins)) {
                counts[i][j] += 1;
            }
        }
        Ok(DensityGrid { x_edges, y_edges, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// The count grid as CSV, one grid row per `x` bin.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for row in &self.counts {
            w.write_record(row.iter().map(u64::to_string))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn edges((lo, hi): (f64, f64), bins: usize) -> Vec<f64> {
    let width = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect()
}

fn cell(v: f64, (lo, hi): (f64, f64), bins: usize) -> Option<usize> {
    if !(lo..=hi).contains(&v) {
        return None;
    }
    let i = ((v - lo) / (hi - lo) * bins as f64).floor() as usize;
    Some(i.min(bins - 1))
}

/// Equal-width grid spanning the data range on each axis. An axis where all
/// points coincide gets the unit interval centred on that value.
pub fn density_grid(points: &[Point], bins: usize) -> Result<DensityGrid> {
    if points.is_empty() {
        return Err(invalid("density grid needs at least one point"));
    }
    let range = |coord: fn(&Point) -> f64| {
        let lo = points.iter().map(coord).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(coord).fold(f64::NEG_INFINITY, f64::max);
        if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    DensityGrid::with_bounds(points, range(|p| p.0), range(|p| p.1), bins)
}

fn mean_point(points: &[Point]) -> Point {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x, sy + y));
    (sx / n, sy / n)
}

/// A captured iteration of [`run_accretion`].
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub iteration: usize,
    pub state: AccretionState,
    pub grid: DensityGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccretionConfig {
    pub spec_x: DistributionSpec,
    pub spec_y: DistributionSpec,
    #[serde(default = "default_initial")]
    pub initial_count: usize,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_snapshots")]
    pub snapshots: Vec<usize>,
    pub seed: u64,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

fn default_initial() -> usize {
    100
}

fn default_batch() -> usize {
    1000
}

fn default_iterations() -> usize {
    20
}

fn default_snapshots() -> Vec<usize> {
    vec![1, 5, 10, 20]
}

fn default_bins() -> usize {
    50
}

impl AccretionConfig {
    /// 100 initial points, 20 batches of 1000, snapshots after 1, 5, 10 and
    /// 20 batches, 50x50 grids.
    pub fn new(spec_x: DistributionSpec, spec_y: DistributionSpec, seed: u64) -> Self {
        AccretionConfig {
            spec_x,
            spec_y,
            initial_count: default_initial(),
            batch_size: default_batch(),
            iterations: default_iterations(),
            snapshots: default_snapshots(),
            seed,
            bins: default_bins(),
        }
    }
}

/// Runs the accretion and returns the requested snapshots in increasing
/// iteration order. Every snapshot's grid spans that snapshot's data range.
pub fn run_accretion(config: &AccretionConfig) -> Result<Vec<Snapshot>> {
    config.spec_x.validate()?;
    config.spec_y.validate()?;
    if config.initial_count == 0 || config.batch_size == 0 || config.iterations == 0 {
        return Err(invalid("initial_count, batch_size and iterations must be positive"));
    }
    if let Some(&bad) = config
        .snapshots
        .iter()
        .find(|&&s| s == 0 || s > config.iterations)
    {
        return Err(invalid(format!(
            "snapshot {bad} outside 1..={}",
            config.iterations
        )));
    }
    let mut wanted = config.snapshots.clone();
    wanted.sort_unstable();
    wanted.dedup();

    let mut rng = seeded(config.seed);
    let mut draw = |points: &mut Vec<Point>, count: usize| {
        for _ in 0..count {
            let x = config.spec_x.draw(&mut rng);
            let y = config.spec_y.draw(&mut rng);
            points.push((x, y));
        }
    };

    let total = config.initial_count + config.iterations * config.batch_size;
    let mut points = Vec::with_capacity(total);
    draw(&mut points, config.initial_count);

    let mut snapshots = Vec::with_capacity(wanted.len());
    let mut next = wanted.iter().peekable();
    for iteration in 1..=config.iterations {
        draw(&mut points, config.batch_size);
        if next.peek() == Some(&&iteration) {
            next.next();
            let state = AccretionState {
                points: points.clone(),
                iteration,
                center: mean_point(&points),
                spec_x: config.spec_x,
                spec_y: config.spec_y,
            };
            let grid = density_grid(&points, config.bins)?;
            snapshots.push(Snapshot { iteration, state, grid });
        }
    }
    Ok(snapshots)
}

/// Euclidean distance of each snapshot's center from the last snapshot's.
pub fn center_stability(snapshots: &[Snapshot]) -> Result<Vec<f64>> {
    if snapshots.len() < 2 {
        return Err(invalid("center stability needs at least two snapshots"));
    }
    let (fx, fy) = snapshots.last().expect("len >= 2").state.center;
    Ok(snapshots
        .iter()
        .map(|s| {
            let (x, y) = s.state.center;
            (x - fx).hypot(y - fy)
        })
        .collect())
}
