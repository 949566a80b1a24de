use super::Graph;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Synthetic graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// Cycle on `n >= 3` vertices.
    Cycle(usize),
    /// Complete graph on `n >= 1` vertices.
    Complete(usize),
    /// Path on `n >= 1` vertices.
    Path(usize),
    /// `rows x cols` 4-neighbor grid.
    Grid2d(usize, usize),
    /// Star with one center (vertex 0) and the given number of leaves.
    Star(usize),
    /// Preferential attachment: start from a clique on `attach + 1` vertices
    /// and connect every new vertex to `attach` distinct existing vertices
    /// picked with probability proportional to degree.
    PreferentialAttachment { n: usize, attach: usize, seed: u64 },
}

pub fn generate(kind: GraphKind) -> Result<Graph> {
    let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
    match kind {
        GraphKind::Cycle(n) => {
            if n < 3 {
                return bad("cycle needs at least 3 vertices");
            }
            Ok(Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))))
        }
        GraphKind::Complete(n) => {
            if n < 1 {
                return bad("complete graph needs at least 1 vertex");
            }
            let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            Ok(Graph::from_edges(n, edges.collect::<Vec<_>>()))
        }
        GraphKind::Path(n) => {
            if n < 1 {
                return bad("path needs at least 1 vertex");
            }
            Ok(Graph::from_edges(n, (1..n).map(|i| (i - 1, i))))
        }
        GraphKind::Grid2d(rows, cols) => {
            if rows < 1 || cols < 1 {
                return bad("grid dimensions must be at least 1");
            }
            let at = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::with_capacity(2 * rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((at(r, c), at(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((at(r, c), at(r + 1, c)));
                    }
                }
            }
            Ok(Graph::from_edges(rows * cols, edges))
        }
        GraphKind::Star(leaves) => {
            if leaves < 1 {
                return bad("star needs at least 1 leaf");
            }
            Ok(Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))))
        }
        GraphKind::PreferentialAttachment { n, attach, seed } => {
            if attach < 1 || n < attach + 1 {
                return bad("preferential attachment needs attach >= 1 and n >= attach + 1");
            }
            Ok(preferential_attachment(n, attach, seed))
        }
    }
}

fn preferential_attachment(n: usize, attach: usize, seed: u64) -> Graph {
    let mut rng = RngStream::new(seed, 0);
    let core = attach + 1;
    let mut edges = Vec::with_capacity(n * attach);
    // every edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * n * attach);
    for i in 0..core {
        for j in i + 1..core {
            edges.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    let mut targets = Vec::with_capacity(attach);
    for v in core..n {
        targets.clear();
        while targets.len() < attach {
            let t = endpoints[rng.below(endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_edges(n, edges)
}
