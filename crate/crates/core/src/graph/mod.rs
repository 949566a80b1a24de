//! Immutable undirected graphs in compressed adjacency form, plus the two
//! queries a sublinear walk sampler is allowed to make: a uniformly random
//! vertex and a uniformly random neighbor of a given vertex.

mod generate;
mod io;

use std::sync::atomic::{AtomicU64, Ordering};

pub use generate::{generate, GraphKind};
pub use io::{load_edge_list, read_edge_list_file, write_edge_list, write_edge_list_file};

use crate::rng::RngStream;

/// Simple undirected graph. Neighbor lists are sorted and symmetric; there
/// are no self-loops and no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an arbitrary edge iterator.
    /// Self-loops are dropped and duplicate edges collapse to one.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let neighbors: Vec<usize> = pairs.iter().map(|&(_, v)| v).collect();
        let max_degree = (0..n).map(|v| offsets[v + 1] - offsets[v]).max().unwrap_or(0);
        Self {
            edge_count: neighbors.len() / 2,
            offsets,
            neighbors,
            max_degree,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges, each counted once.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.vertex_count()).filter(|&v| self.degree(v) == 0).count()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// Full scan of the structural invariants.
    pub fn check_invariants(&self) -> bool {
        let n = self.vertex_count();
        let mut degree_max = 0;
        for v in 0..n {
            let adj = self.neighbors(v);
            degree_max = degree_max.max(adj.len());
            if adj.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if adj.iter().any(|&u| u == v || u >= n || !self.has_edge(u, v)) {
                return false;
            }
        }
        degree_max == self.max_degree && self.neighbors.len() == 2 * self.edge_count
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let index: std::collections::HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let index = &index;
            self.neighbors(v)
                .iter()
                .filter_map(move |u| index.get(u).map(|&j| (i, j)))
        });
        Graph::from_edges(vertices.len(), edges.collect::<Vec<_>>())
    }

    /// Disjoint union: vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(shift + other.vertex_count(), edges.collect::<Vec<_>>())
    }
}

/// Uniformly random vertex id.
pub fn random_vertex(g: &Graph, rng: &mut RngStream) -> usize {
    rng.below(g.vertex_count())
}

/// Uniformly random neighbor of `v`. An isolated vertex returns itself, so
/// a walk there stays put.
pub fn random_neighbor(g: &Graph, v: usize, rng: &mut RngStream) -> usize {
    let adj = g.neighbors(v);
    if adj.is_empty() {
        v
    } else {
        adj[rng.below(adj.len())]
    }
}

/// Query-counting access to a graph. Only the two sampling primitives are
/// exposed, so the counters record everything a walk sampler touches.
#[derive(Debug)]
pub struct WalkOracle<'g> {
    graph: &'g Graph,
    vertex_queries: AtomicU64,
    neighbor_queries: AtomicU64,
}

impl<'g> WalkOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            vertex_queries: AtomicU64::new(0),
            neighbor_queries: AtomicU64::new(0),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn random_vertex(&self, rng: &mut RngStream) -> usize {
        self.vertex_queries.fetch_add(1, Ordering::Relaxed);
        random_vertex(self.graph, rng)
    }

    pub fn random_neighbor(&self, v: usize, rng: &mut RngStream) -> usize {
        self.neighbor_queries.fetch_add(1, Ordering::Relaxed);
        random_neighbor(self.graph, v, rng)
    }

    pub fn vertex_queries(&self) -> u64 {
        self.vertex_queries.load(Ordering::Relaxed)
    }

    pub fn neighbor_queries(&self) -> u64 {
        self.neighbor_queries.load(Ordering::Relaxed)
    }
}
