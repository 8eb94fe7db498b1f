//! Constructors for the standard graph families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rng::{seeded, SimRng};

/// Restart budget for [`make_regular`].
pub const REGULAR_MAX_RESTARTS: usize = 100;

/// Cycle `0 - 1 - ... - (n-1) - 0`. Needs `n >= 3`.
pub fn make_ring(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid(format!("a ring needs at least 3 vertices, got {n}")));
    }
    Graph::from_pairs(n, false, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    Graph::from_pairs(n, false, (1..n).map(|i| (i - 1, i)))
}

/// Star with `center` joined to every other vertex.
pub fn make_star(n: usize, center: usize) -> Result<Graph> {
    if center >= n {
        return Err(invalid(format!("center {center} outside 0..{n}")));
    }
    Graph::from_pairs(n, false, (0..n).filter(|&v| v != center).map(|v| (center, v)))
}

/// Complete simple graph `K_n` with `n(n-1)/2` edges.
pub fn make_complete(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(invalid("a complete graph needs at least one vertex"));
    }
    Graph::from_pairs(n, false, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

/// A random simple `k`-regular graph on `n` vertices.
///
/// Stubs (k per vertex) are shuffled and matched one at a time, each stub
/// taking a random partner that would create neither a loop nor a repeated
/// edge; a dead end restarts the matching, up to [`REGULAR_MAX_RESTARTS`]
/// times. When `k > (n - 1) / 2` the sparser complement is built instead.
pub fn make_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("a regular graph needs at least one vertex"));
    }
    if k >= n {
        return Err(invalid(format!("degree {k} must be below vertex count {n}")));
    }
    if (n * k) % 2 == 1 {
        return Err(invalid(format!("n*k = {} is odd", n * k)));
    }
    if k == 0 {
        return Ok(Graph::empty(n, false));
    }
    let complement = 2 * k > n - 1;
    let degree = if complement { n - 1 - k } else { k };

    let mut rng = seeded(seed);
    let pairs = if degree == 0 {
        Vec::new()
    } else {
        let mut found = None;
        for _ in 0..REGULAR_MAX_RESTARTS {
            if let Some(pairs) = match_stubs(n, degree, &mut rng) {
                found = Some(pairs);
                break;
            }
        }
        found.ok_or_else(|| {
            Error::ConstructionFailed(format!(
                "no {degree}-regular matching on {n} vertices after {REGULAR_MAX_RESTARTS} restarts"
            ))
        })?
    };

    if complement {
        let mut present = vec![vec![false; n]; n];
        for &(u, v) in &pairs {
            present[u][v] = true;
            present[v][u] = true;
        }
        let missing = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !present[i][j]);
        Graph::from_pairs(n, false, missing)
    } else {
        Graph::from_pairs(n, false, pairs)
    }
}

fn match_stubs(n: usize, k: usize, rng: &mut SimRng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    stubs.shuffle(rng);
    let mut adjacent = vec![vec![false; n]; n];
    let mut pairs = Vec::with_capacity(n * k / 2);
    while let Some(u) = stubs.pop() {
        let candidates: Vec<usize> = (0..stubs.len())
            .filter(|&i| stubs[i] != u && !adjacent[u][stubs[i]])
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let pick = candidates[rng.random_range(0..candidates.len())];
        let v = stubs.swap_remove(pick);
        adjacent[u][v] = true;
        adjacent[v][u] = true;
        pairs.push((u, v));
    }
    Some(pairs)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Erdős–Rényi `G(n, p)`.
///
/// Pairs `(i, j)`, `i < j`, are visited in lexicographic order and each
/// consumes exactly one uniform draw; the edge is kept when the draw is
/// below `p`.
pub fn make_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seeded(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_pairs(n, false, pairs)
}

/// Directed `G(n, p)`: every ordered pair `i != j`, row by row.
pub fn make_erdos_renyi_directed(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seeded(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_pairs(n, true, pairs)
}
