//! Distributed averaging on an undirected graph.
//!
//! Each node repeatedly replaces its value with the average of its
//! neighbours' values, `x(t+1) = W x(t)` with `W = D⁻¹A` built from the 0/1
//! adjacency matrix. `W` is row-stochastic, so values contract towards a
//! common limit; `dᵀW = dᵀ` for the degree vector `d`, so the conserved
//! quantity is `Σ dᵢ xᵢ(t)` and the limit on a connected non-bipartite graph
//! is the degree-weighted average `Σ dᵢ xᵢ(0) / Σ dᵢ`. That equals the plain
//! mean only on regular graphs.
//!
//! On bipartite graphs the plain iteration oscillates forever. Those inputs
//! are refused unless [`ConsensusOptions::lazy`] is set, which switches to
//! `x(t+1) = ½ (x(t) + W x(t))`; the lazy step has the same fixed points and
//! conserved quantity and converges on every connected graph.

use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algo::is_connected;
use crate::distributions::{sample, DistributionSpec};
use crate::error::{invalid, Error, Result};
use crate::generators::make_erdos_renyi;
use crate::graph::Graph;
use crate::matrices::DenseMatrix;

/// How many graph seeds [`run_experiment`] tries before giving up.
pub const MAX_GRAPH_ATTEMPTS: u64 = 50;

/// `W = D⁻¹A`: `w[i][j] = 1/deg(i)` when `i` and `j` are adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragingMatrix {
    w: DenseMatrix,
    degrees: Vec<usize>,
}

impl AveragingMatrix {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.w
    }

    /// Neighbour counts (L1 row sums of the 0/1 adjacency matrix).
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.w.mul_vec(x)
    }
}

/// Builds the averaging matrix of a connected undirected graph with no
/// isolated vertex.
pub fn build_averaging_matrix(g: &Graph) -> Result<AveragingMatrix> {
    if g.is_directed() {
        return Err(invalid("averaging needs an undirected graph"));
    }
    if g.n() == 0 {
        return Err(invalid("averaging needs at least one vertex"));
    }
    let degrees: Vec<usize> = (0..g.n()).map(|v| g.neighbors(v).len()).collect();
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    if !is_connected(g)? {
        return Err(Error::Disconnected);
    }
    let mut w = DenseMatrix::zeros(g.n(), g.n());
    for (i, &deg) in degrees.iter().enumerate() {
        for &j in g.neighbors(i) {
            w.set(i, j, 1.0 / deg as f64);
        }
    }
    Ok(AveragingMatrix { w, degrees })
}

/// Two-colours the graph by breadth-first layering. True iff no edge joins
/// two vertices of the same layer parity (a self-loop makes a graph
/// non-bipartite).
pub fn bipartite_guard(g: &Graph) -> bool {
    let mut colour: Vec<Option<bool>> = vec![None; g.n()];
    for start in 0..g.n() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("queued vertices are coloured");
            for &v in g.neighbors(u) {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// `max x - min x`; 0 for an empty slice.
pub fn spread(x: &[f64]) -> f64 {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if x.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// `Σ deg(i) x(i) / Σ deg(i)` with neighbour-count degrees.
pub fn degree_weighted_average(g: &Graph, x: &[f64]) -> f64 {
    let (num, den) = (0..g.n()).fold((0.0, 0.0), |(num, den), i| {
        let d = g.neighbors(i).len() as f64;
        (num + d * x[i], den + d)
    });
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsensusOptions {
    pub max_iters: usize,
    /// Stop once the spread is at most this.
    pub tolerance: f64,
    pub lazy: bool,
}

impl Default for ConsensusOptions {
    fn default() -> Self {
        ConsensusOptions {
            max_iters: 1000,
            tolerance: 1e-8,
            lazy: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub seed: Option<u64>,
}

/// Per-iteration node values of one run. `values[0]` is the initial draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusTrace {
    pub graph: GraphSummary,
    pub spec: Option<DistributionSpec>,
    pub value_seed: Option<u64>,
    pub values: Vec<Vec<f64>>,
    pub converged: bool,
    pub consensus_value: Option<f64>,
    pub iterations_run: usize,
    pub tolerance: f64,
    pub lazy: bool,
}

impl ConsensusTrace {
    pub fn final_values(&self) -> &[f64] {
        self.values.last().expect("a trace holds the initial values")
    }

    pub fn spreads(&self) -> Vec<f64> {
        self.values.iter().map(|x| spread(x)).collect()
    }

    /// CSV with header `iteration,node_0,...,node_{n-1}`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.graph.n;
        let mut header = vec!["iteration".to_string()];
        header.extend((0..n).map(|i| format!("node_{i}")));
        w.write_record(&header)?;
        for (t, row) in self.values.iter().enumerate() {
            let mut record = vec![t.to_string()];
            record.extend(row.iter().map(|x| x.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Iterates from explicit initial values. Refuses bipartite graphs unless
/// `options.lazy` is set.
pub fn run_consensus_from(
    g: &Graph,
    initial: Vec<f64>,
    options: &ConsensusOptions,
) -> Result<ConsensusTrace> {
    if initial.len() != g.n() {
        return Err(invalid(format!(
            "{} initial values for {} nodes",
            initial.len(),
            g.n()
        )));
    }
    if !(options.tolerance > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let w = build_averaging_matrix(g)?;
    if !options.lazy && bipartite_guard(g) {
        return Err(Error::Bipartite);
    }

    let mut values = vec![initial];
    let mut converged = spread(&values[0]) <= options.tolerance;
    while !converged && values.len() <= options.max_iters {
        let x = values.last().expect("non-empty");
        let mut next = w.apply(x);
        if options.lazy {
            for (n, old) in next.iter_mut().zip(x) {
                *n = 0.5 * (*n + old);
            }
        }
        converged = spread(&next) <= options.tolerance;
        values.push(next);
    }
    let consensus_value = converged.then(|| values.last().expect("non-empty")[0]);
    Ok(ConsensusTrace {
        graph: GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            seed: None,
        },
        spec: None,
        value_seed: None,
        iterations_run: values.len() - 1,
        values,
        converged,
        consensus_value,
        tolerance: options.tolerance,
        lazy: options.lazy,
    })
}

/// Draws initial node values from `spec` with `seed` (node `i` gets draw
/// `i`), then iterates as [`run_consensus_from`].
pub fn run_consensus(
    g: &Graph,
    spec: &DistributionSpec,
    seed: u64,
    options: &ConsensusOptions,
) -> Result<ConsensusTrace> {
    if g.n() == 0 {
        return Err(invalid("averaging needs at least one vertex"));
    }
    let initial = sample(spec, g.n(), seed)?;
    let mut trace = run_consensus_from(g, initial, options)?;
    trace.spec = Some(*spec);
    trace.value_seed = Some(seed);
    Ok(trace)
}

/// Degree histogram with unit bins and its running total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStatistics {
    /// `(degree, count)` for every degree from the minimum to the maximum
    /// observed, including empty bins.
    pub histogram: Vec<(usize, usize)>,
    /// `(degree, vertices with degree <= that)`; ends at `n`.
    pub cumulative: Vec<(usize, usize)>,
}

impl DegreeStatistics {
    /// CSV with header `degree,count,cumulative`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["degree", "count", "cumulative"])?;
        for (&(d, c), &(_, cum)) in self.histogram.iter().zip(&self.cumulative) {
            w.write_record([d.to_string(), c.to_string(), cum.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn degree_statistics(g: &Graph) -> DegreeStatistics {
    let degrees = g.degree_sequence();
    let (Some(lo), Some(hi)) = (degrees.min(), degrees.max()) else {
        return DegreeStatistics {
            histogram: Vec::new(),
            cumulative: Vec::new(),
        };
    };
    let mut counts = vec![0usize; hi - lo + 1];
    for &d in degrees.as_slice() {
        counts[d - lo] += 1;
    }
    let histogram: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (lo + i, c))
        .collect();
    let cumulative = histogram
        .iter()
        .scan(0, |acc, &(d, c)| {
            *acc += c;
            Some((d, *acc))
        })
        .collect();
    DegreeStatistics { histogram, cumulative }
}

/// Settings of one consensus experiment on a random `G(n, p)` graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsensusConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_p")]
    pub p: f64,
    pub graph_seed: u64,
    pub value_seed: u64,
    pub distribution: DistributionSpec,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub lazy: bool,
}

fn default_n() -> usize {
    20
}

fn default_p() -> f64 {
    0.5
}

fn default_tolerance() -> f64 {
    1e-8
}

fn default_max_iters() -> usize {
    1000
}

impl ConsensusConfig {
    /// `G(20, 0.5)`, tolerance `1e-8`, at most 1000 iterations.
    pub fn new(distribution: DistributionSpec, graph_seed: u64, value_seed: u64) -> Self {
        ConsensusConfig {
            n: default_n(),
            p: default_p(),
            graph_seed,
            value_seed,
            distribution,
            tolerance: default_tolerance(),
            max_iters: default_max_iters(),
            lazy: false,
        }
    }

    pub fn options(&self) -> ConsensusOptions {
        ConsensusOptions {
            max_iters: self.max_iters,
            tolerance: self.tolerance,
            lazy: self.lazy,
        }
    }
}

/// A graph seed that was skipped, and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedGraph {
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ConsensusExperiment {
    pub graph: Graph,
    pub graph_seed: u64,
    pub rejected: Vec<RejectedGraph>,
    pub trace: ConsensusTrace,
    pub degree_statistics: DegreeStatistics,
}

/// Samples `G(n, p)` starting at `graph_seed`, moving to the next seed while
/// the graph is disconnected, has an isolated vertex, or is bipartite
/// without the lazy option (at most [`MAX_GRAPH_ATTEMPTS`] seeds), then runs
/// the averaging with `value_seed`.
pub fn run_experiment(config: &ConsensusConfig) -> Result<ConsensusExperiment> {
    config.distribution.validate()?;
    let options = config.options();
    let mut rejected = Vec::new();
    for offset in 0..MAX_GRAPH_ATTEMPTS {
        let seed = config.graph_seed.wrapping_add(offset);
        let g = make_erdos_renyi(config.n, config.p, seed)?;
        let reason = match build_averaging_matrix(&g) {
            Err(e @ (Error::Disconnected | Error::IsolatedVertex(_))) => Some(e.to_string()),
            Err(e) => return Err(e),
            Ok(_) if !options.lazy && bipartite_guard(&g) => Some(Error::Bipartite.to_string()),
            Ok(_) => None,
        };
        if let Some(reason) = reason {
            rejected.push(RejectedGraph { seed, reason });
            continue;
        }
        let mut trace = run_consensus(&g, &config.distribution, config.value_seed, &options)?;
        trace.graph.seed = Some(seed);
        let degree_statistics = degree_statistics(&g);
        return Ok(ConsensusExperiment {
            graph: g,
            graph_seed: seed,
            rejected,
            trace,
            degree_statistics,
        });
    }
    Err(Error::ConstructionFailed(format!(
        "no usable G({}, {}) graph in {MAX_GRAPH_ATTEMPTS} seeds from {}",
        config.n, config.p, config.graph_seed
    )))
}
