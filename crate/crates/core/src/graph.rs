//! The [`Graph`] value type.
//!
//! Graphs are built once and never mutated. Vertices are `0..n`; an optional
//! label list maps indices to names for I/O. Undirected edges are stored once
//! with `source <= target`, and every query treats them symmetrically.
//! Self-loops are allowed, duplicate pairs are not.

use std::collections::HashSet;

use crate::error::{invalid, Result};

/// One stored edge. For undirected graphs `source <= target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    // Out-neighbours; undirected edges appear in both lists, a loop once.
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// A graph with `n` vertices and no edges.
    pub fn empty(n: usize, directed: bool) -> Graph {
        Graph {
            n,
            directed,
            edges: Vec::new(),
            labels: None,
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from `(source, target, weight)` triples.
    ///
    /// Fails on an out-of-range endpoint, a non-finite weight, or a repeated
    /// pair (for undirected graphs `(u, v)` and `(v, u)` are the same pair).
    pub fn from_edges<I>(n: usize, directed: bool, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        for (u, v, weight) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if !weight.is_finite() {
                return Err(invalid(format!("edge ({u}, {v}) has weight {weight}")));
            }
            let (source, target) = if directed { (u, v) } else { (u.min(v), u.max(v)) };
            if !seen.insert((source, target)) {
                return Err(invalid(format!("duplicate edge ({u}, {v})")));
            }
            stored.push(Edge { source, target, weight });
        }
        stored.sort_by_key(|e| (e.source, e.target));

        let mut adjacency = vec![Vec::new(); n];
        for e in &stored {
            adjacency[e.source].push(e.target);
            if !directed && !e.is_loop() {
                adjacency[e.target].push(e.source);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            directed,
            edges: stored,
            labels: None,
            adjacency,
        })
    }

    /// Same as [`Graph::from_edges`] with every weight set to 1.
    pub fn from_pairs<I>(n: usize, directed: bool, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(n, directed, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Attaches vertex names. The list must have exactly `n` entries.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(invalid(format!(
                "{} labels given for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges sorted by `(source, target)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The vertex name, falling back to the decimal index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    /// Sorted out-neighbours of `v` (all neighbours for undirected graphs).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let key = if self.directed { (u, v) } else { (u.min(v), u.max(v)) };
        self.edges
            .binary_search_by_key(&key, |e| (e.source, e.target))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// True if some edge weight differs from 1.
    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|e| e.weight != 1.0)
    }

    /// Per-vertex degrees.
    ///
    /// Undirected: number of incident edge ends, so a loop adds 2.
    /// Directed: out-degrees (a loop adds 1); use [`Graph::transpose`] for
    /// in-degrees.
    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut degrees = vec![0usize; self.n];
        for e in &self.edges {
            degrees[e.source] += 1;
            if !self.directed {
                degrees[e.target] += 1;
            }
        }
        DegreeSequence(degrees)
    }

    /// Reverses every edge. Undirected graphs come back unchanged.
    pub fn transpose(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let reversed = self.edges.iter().map(|e| (e.target, e.source, e.weight));
        let g = Graph::from_edges(self.n, true, reversed).expect("reversal keeps edges valid");
        Graph { labels: self.labels.clone(), ..g }
    }
}

/// Degrees in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|d| *d % 2 == 1).count()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.iter().copied().min()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    /// Degrees in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<usize> {
        let mut d = self.0.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }
}
