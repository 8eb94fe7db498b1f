//! Structural queries: induced subgraphs, connectivity, strongly connected
//! components and brute-force isomorphism for small graphs.

use std::collections::VecDeque;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Largest vertex count accepted by [`is_isomorphic`].
pub const ISOMORPHISM_LIMIT: usize = 10;

/// Induced subgraph on `vertices`.
///
/// Retained vertices are renumbered in increasing index order; labels, if
/// any, follow their vertices. Repeated indices are ignored.
pub fn subgraph(g: &Graph, vertices: &[usize]) -> Result<Graph> {
    let mut keep: Vec<usize> = vertices.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&v| v >= g.n()) {
        return Err(invalid(format!("vertex {bad} outside 0..{}", g.n())));
    }
    let mut index = vec![usize::MAX; g.n()];
    for (new, &old) in keep.iter().enumerate() {
        index[old] = new;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| index[e.source] != usize::MAX && index[e.target] != usize::MAX)
        .map(|e| (index[e.source], index[e.target], e.weight));
    let sub = Graph::from_edges(keep.len(), g.is_directed(), edges)?;
    match g.labels() {
        Some(labels) => sub.with_labels(keep.iter().map(|&v| labels[v].clone()).collect()),
        None => Ok(sub),
    }
}

/// Vertices reachable from `start` by breadth-first search, in visit order.
pub fn reachable_from(g: &Graph, start: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    order
}

/// True iff every vertex is reachable from vertex 0. Graphs with at most one
/// vertex are connected. Directed graphs are rejected; use
/// [`strongly_connected_components`].
pub fn is_connected(g: &Graph) -> Result<bool> {
    if g.is_directed() {
        return Err(invalid(
            "connectivity is defined for undirected graphs; use strongly_connected_components",
        ));
    }
    if g.n() <= 1 {
        return Ok(true);
    }
    Ok(reachable_from(g, 0).len() == g.n())
}

/// Connected components of an undirected graph, each sorted, ordered by
/// smallest vertex.
pub fn connected_components(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if g.is_directed() {
        return Err(invalid(
            "connected components need an undirected graph; use strongly_connected_components",
        ));
    }
    let mut seen = vec![false; g.n()];
    let mut components = Vec::new();
    for v in 0..g.n() {
        if seen[v] {
            continue;
        }
        let mut comp = reachable_from(g, v);
        comp.sort_unstable();
        for &u in &comp {
            seen[u] = true;
        }
        components.push(comp);
    }
    Ok(components)
}

/// Strongly connected components of a directed graph (Tarjan, iterative).
///
/// Components come out in reverse topological order of the condensation;
/// vertices inside a component are sorted.
pub fn strongly_connected_components(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if !g.is_directed() {
        return Err(invalid("strongly connected components need a directed graph"));
    }
    let n = g.n();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (vertex, position in its neighbour list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let nbrs = g.neighbors(v);
            if *pos < nbrs.len() {
                let w = nbrs[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack holds v");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    Ok(components)
}

/// Result of [`is_isomorphic`]: `mapping[v]` is the image in `g2` of vertex
/// `v` of `g1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub mapping: Vec<usize>,
}

/// Brute-force isomorphism test for graphs of at most
/// [`ISOMORPHISM_LIMIT`] vertices.
///
/// Only adjacency is compared; weights are ignored. Mismatched sizes,
/// directedness or sorted degree sequences return `None` immediately.
/// Otherwise vertices of `g1` are assigned in order to unused vertices of
/// `g2` with equal degree, backtracking as soon as an assigned pair
/// disagrees on adjacency.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Isomorphism>> {
    for g in [g1, g2] {
        if g.n() > ISOMORPHISM_LIMIT {
            return Err(Error::UnsupportedSize {
                n: g.n(),
                limit: ISOMORPHISM_LIMIT,
            });
        }
    }
    if g1.n() != g2.n()
        || g1.is_directed() != g2.is_directed()
        || g1.edge_count() != g2.edge_count()
    {
        return Ok(None);
    }
    let d1 = g1.degree_sequence();
    let d2 = g2.degree_sequence();
    if d1.sorted_desc() != d2.sorted_desc() {
        return Ok(None);
    }
    let (in1, in2) = (g1.transpose().degree_sequence(), g2.transpose().degree_sequence());

    let n = g1.n();
    let adj1 = dense_adjacency(g1);
    let adj2 = dense_adjacency(g2);
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        v: usize,
        n: usize,
        adj1: &[Vec<bool>],
        adj2: &[Vec<bool>],
        degrees: (&[usize], &[usize], &[usize], &[usize]),
        mapping: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == n {
            return true;
        }
        let (d1, d2, in1, in2) = degrees;
        for w in 0..n {
            if used[w] || d1[v] != d2[w] || in1[v] != in2[w] {
                continue;
            }
            let consistent = (0..v).all(|u| {
                let mu = mapping[u];
                adj1[u][v] == adj2[mu][w] && adj1[v][u] == adj2[w][mu]
            }) && adj1[v][v] == adj2[w][w];
            if !consistent {
                continue;
            }
            mapping[v] = w;
            used[w] = true;
            if extend(v + 1, n, adj1, adj2, degrees, mapping, used) {
                return true;
            }
            used[w] = false;
        }
        mapping[v] = usize::MAX;
        false
    }

    let degrees = (d1.as_slice(), d2.as_slice(), in1.as_slice(), in2.as_slice());
    if extend(0, n, &adj1, &adj2, degrees, &mut mapping, &mut used) {
        Ok(Some(Isomorphism { mapping }))
    } else {
        Ok(None)
    }
}

fn dense_adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; g.n()]; g.n()];
    for e in g.edges() {
        adj[e.source][e.target] = true;
        if !g.is_directed() {
            adj[e.target][e.source] = true;
        }
    }
    adj
}
