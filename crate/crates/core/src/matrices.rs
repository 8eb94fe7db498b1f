//! Matrix representations of graphs.
//!
//! [`DenseMatrix`] is a plain row-major `f64` grid. The functions here build
//! the adjacency, incidence (unsigned and signed), degree and Laplacian
//! matrices of a [`Graph`], convert back from adjacency and bipartite
//! incidence grids, count walks, and run the spectral check for regular
//! graphs.
//!
//! Conventions worth knowing:
//!
//! * Incidence columns follow the stored edge order, which for undirected
//!   graphs is lexicographic in `(min endpoint, max endpoint)`.
//! * A self-loop puts its weight once on the adjacency diagonal, while
//!   [`Graph::degree_sequence`] counts it twice. Row sums of the adjacency
//!   matrix therefore match degrees only for loop-free unweighted graphs
//!   (directed graphs always match, since out-degree counts a loop once).
//! * Laplacians ignore self-loops, as `D - A` cancels them.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::algo::is_connected;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Tolerance used when checking that an adjacency grid is symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Tolerance for the spectral assertions of [`regular_spectral_check`].
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<DenseMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(invalid(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let n_rows = rows.len();
        Ok(DenseMatrix {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<DenseMatrix> {
        if labels.len() != self.rows {
            return Err(invalid("row label count does not match row count"));
        }
        self.row_labels = Some(labels);
        Ok(self)
    }

    pub fn with_col_labels(mut self, labels: Vec<String>) -> Result<DenseMatrix> {
        if labels.len() != self.cols {
            return Err(invalid("column label count does not match column count"));
        }
        self.col_labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t.row_labels = self.col_labels.clone();
        t.col_labels = self.row_labels.clone();
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Entrywise sum; dimensions must agree.
    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(invalid("matrix dimensions differ"));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Largest absolute entrywise difference, `None` on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Option<f64> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// First `(i, j)` with `|m[i][j] - m[j][i]| > tol`.
    pub fn asymmetry(&self, tol: f64) -> Option<(usize, usize)> {
        if !self.is_square() {
            return None;
        }
        (0..self.rows)
            .flat_map(|i| (i + 1..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| (self.get(i, j) - self.get(j, i)).abs() > tol)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.asymmetry(tol).is_none()
    }

    /// Eigenvalues of a symmetric matrix, ascending.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_symmetric(SYMMETRY_TOLERANCE) {
            return Err(invalid("eigenvalues requested for a non-symmetric matrix"));
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let mut values: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    fn labelled_like(mut self, g: &Graph) -> DenseMatrix {
        if let Some(labels) = g.labels() {
            self.row_labels = Some(labels.to_vec());
            if self.rows == self.cols {
                self.col_labels = Some(labels.to_vec());
            }
        }
        self
    }
}

/// `n x n` adjacency matrix; entry `(i, j)` is the weight of edge `i -> j`
/// (both directions for undirected graphs), 0 when absent.
pub fn adjacency_matrix(g: &Graph) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(g.n(), g.n());
    for e in g.edges() {
        m.set(e.source, e.target, e.weight);
        if !g.is_directed() {
            m.set(e.target, e.source, e.weight);
        }
    }
    m.labelled_like(g)
}

/// Rebuilds a graph from a square grid: every nonzero entry is an edge with
/// that weight. Undirected reconstruction reads the upper triangle and
/// requires symmetry within [`SYMMETRY_TOLERANCE`]. Row labels, if present,
/// become vertex labels.
pub fn graph_from_adjacency(m: &DenseMatrix, directed: bool) -> Result<Graph> {
    if !m.is_square() {
        return Err(invalid(format!(
            "adjacency matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut edges = Vec::new();
    if directed {
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j) != 0.0 {
                    edges.push((i, j, m.get(i, j)));
                }
            }
        }
    } else {
        if let Some((row, col)) = m.asymmetry(SYMMETRY_TOLERANCE) {
            return Err(Error::Asymmetric {
                row,
                col,
                a: m.get(row, col),
                b: m.get(col, row),
            });
        }
        for i in 0..n {
            for j in i..n {
                if m.get(i, j) != 0.0 {
                    edges.push((i, j, m.get(i, j)));
                }
            }
        }
    }
    let g = Graph::from_edges(n, directed, edges)?;
    match m.row_labels() {
        Some(labels) => g.with_labels(labels.to_vec()),
        None => Ok(g),
    }
}

/// Unsigned `n x |E|` incidence matrix: column `j` has a 1 at each endpoint
/// of edge `j` (a single 1 for a loop). Undirected graphs only.
pub fn incidence_matrix(g: &Graph) -> Result<DenseMatrix> {
    if g.is_directed() {
        return Err(Error::Unsupported(
            "incidence matrices of directed graphs".into(),
        ));
    }
    let mut q = DenseMatrix::zeros(g.n(), g.edge_count());
    for (j, e) in g.edges().iter().enumerate() {
        q.set(e.source, j, 1.0);
        q.set(e.target, j, 1.0);
    }
    Ok(q.labelled_like(g))
}

/// Signed incidence: edge `{u, v}` with `u < v` gets `+sqrt(w)` at `u` and
/// `-sqrt(w)` at `v`, so that `Q Qᵀ = D - A`. Needs an undirected graph
/// without loops and with non-negative weights.
pub fn signed_incidence_matrix(g: &Graph) -> Result<DenseMatrix> {
    if g.is_directed() {
        return Err(invalid("signed incidence needs an undirected graph"));
    }
    if g.has_self_loops() {
        return Err(invalid("signed incidence is undefined for self-loops"));
    }
    let mut q = DenseMatrix::zeros(g.n(), g.edge_count());
    for (j, e) in g.edges().iter().enumerate() {
        if e.weight < 0.0 {
            return Err(invalid(format!(
                "edge ({}, {}) has negative weight {}",
                e.source, e.target, e.weight
            )));
        }
        let s = e.weight.sqrt();
        q.set(e.source, j, s);
        q.set(e.target, j, -s);
    }
    Ok(q.labelled_like(g))
}

/// Reads a 0/1 grid as a bipartite graph: rows are the first vertex class
/// (indices `0..rows`), columns the second (`rows..rows + cols`), and a
/// nonzero entry joins row `i` to column `j`. Row and column labels, when
/// both present, name the vertices.
pub fn graph_from_incidence(m: &DenseMatrix) -> Result<Graph> {
    let r = m.rows();
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..m.cols() {
            if m.get(i, j) != 0.0 {
                edges.push((i, r + j, m.get(i, j)));
            }
        }
    }
    let g = Graph::from_edges(r + m.cols(), false, edges)?;
    match (m.row_labels(), m.col_labels()) {
        (Some(rl), Some(cl)) => g.with_labels(rl.iter().chain(cl).cloned().collect()),
        _ => Ok(g),
    }
}

/// Diagonal matrix of [`Graph::degree_sequence`].
pub fn degree_matrix(g: &Graph) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(g.n(), g.n());
    for (i, &deg) in g.degree_sequence().as_slice().iter().enumerate() {
        d.set(i, i, deg as f64);
    }
    d.labelled_like(g)
}

fn weighted_degrees_without_loops(g: &Graph) -> Vec<f64> {
    let mut d = vec![0.0; g.n()];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        d[e.source] += e.weight;
        d[e.target] += e.weight;
    }
    d
}

/// Graph Laplacian of an undirected graph.
///
/// Combinatorial (`normalized == false`): `L = D - A` with `D` the weighted
/// degrees, i.e. diagonal `d_i`, `-w_ij` for adjacent pairs, 0 elsewhere.
/// Normalized: diagonal 1 where `d_i != 0`, `-w_ij / sqrt(d_i d_j)` for
/// adjacent pairs; loops and negative weights are rejected.
pub fn laplacian(g: &Graph, normalized: bool) -> Result<DenseMatrix> {
    if g.is_directed() {
        return Err(invalid("the Laplacian is defined here for undirected graphs"));
    }
    let d = weighted_degrees_without_loops(g);
    let mut l = DenseMatrix::zeros(g.n(), g.n());
    if normalized {
        if g.has_self_loops() {
            return Err(invalid("normalized Laplacian requires a graph without self-loops"));
        }
        if g.edges().iter().any(|e| e.weight < 0.0) {
            return Err(invalid("normalized Laplacian requires non-negative weights"));
        }
        for (i, &di) in d.iter().enumerate() {
            if di != 0.0 {
                l.set(i, i, 1.0);
            }
        }
        for e in g.edges() {
            let v = -e.weight / (d[e.source] * d[e.target]).sqrt();
            l.set(e.source, e.target, v);
            l.set(e.target, e.source, v);
        }
    } else {
        for (i, &di) in d.iter().enumerate() {
            l.set(i, i, di);
        }
        for e in g.edges().iter().filter(|e| !e.is_loop()) {
            l.set(e.source, e.target, -e.weight);
            l.set(e.target, e.source, -e.weight);
        }
    }
    Ok(l.labelled_like(g))
}

/// `Q Qᵀ` for the signed incidence matrix `Q`, computed by explicit
/// multiplication. Equals `laplacian(g, false)` for loop-free graphs with
/// non-negative weights.
pub fn laplacian_via_incidence(g: &Graph) -> Result<DenseMatrix> {
    let q = signed_incidence_matrix(g)?;
    let mut l = q.matmul(&q.transpose())?;
    // -0.0 from products of signed zeros prints badly in CSV.
    for x in &mut l.data {
        *x += 0.0;
    }
    Ok(l.labelled_like(g))
}

/// `A + A² + ... + Aᵏ`. Entry `(i, j)` counts walks of length `1..=k` from
/// `i` to `j` (weighted walks for weighted graphs).
pub fn walk_count_sum(g: &Graph, k: usize) -> Result<DenseMatrix> {
    if k == 0 {
        return Err(invalid("walk length bound k must be at least 1"));
    }
    let a = adjacency_matrix(g);
    let mut power = a.clone();
    let mut sum = a.clone();
    for _ in 1..k {
        power = power.matmul(&a)?;
        sum = sum.add(&power)?;
    }
    Ok(sum.labelled_like(g))
}

/// Outcome of [`regular_spectral_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub is_regular: bool,
    /// Common degree when the graph is regular.
    pub degree: Option<usize>,
    /// Largest adjacency eigenvalue; equals the degree for regular graphs.
    pub degree_eigenvalue: f64,
    /// `‖A·1 − λ·1‖∞` with `λ` the degree (regular) or largest eigenvalue.
    pub residual: f64,
    /// How many eigenvalues lie within [`SPECTRAL_TOLERANCE`] of the largest.
    pub multiplicity: usize,
    pub multiplicity_one: bool,
    pub connected: bool,
}

/// Spectral facts about the adjacency matrix of an undirected graph.
///
/// For a `k`-regular graph the all-ones vector is an eigenvector with
/// eigenvalue `k`, `k` is the largest eigenvalue, and it is simple exactly
/// when the graph is connected.
pub fn regular_spectral_check(g: &Graph) -> Result<SpectralReport> {
    if g.is_directed() {
        return Err(invalid("spectral check needs an undirected graph"));
    }
    let degrees = g.degree_sequence();
    let connected = is_connected(g)?;
    if g.n() == 0 {
        return Ok(SpectralReport {
            is_regular: true,
            degree: None,
            degree_eigenvalue: 0.0,
            residual: 0.0,
            multiplicity: 0,
            multiplicity_one: false,
            connected,
        });
    }
    let degree = match (degrees.min(), degrees.max()) {
        (Some(lo), Some(hi)) if lo == hi => Some(lo),
        _ => None,
    };
    let a = adjacency_matrix(g);
    let eigenvalues = a.symmetric_eigenvalues()?;
    let largest = *eigenvalues.last().expect("n > 0");
    let multiplicity = eigenvalues
        .iter()
        .filter(|&&v| (v - largest).abs() < SPECTRAL_TOLERANCE * largest.abs().max(1.0))
        .count();
    let lambda = degree.map_or(largest, |k| k as f64);
    let residual = a
        .row_sums()
        .iter()
        .map(|s| (s - lambda).abs())
        .fold(0.0, f64::max);
    Ok(SpectralReport {
        is_regular: degree.is_some(),
        degree,
        degree_eigenvalue: largest,
        residual,
        multiplicity,
        multiplicity_one: multiplicity == 1,
        connected,
    })
}
