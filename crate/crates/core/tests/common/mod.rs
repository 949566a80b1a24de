#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_sketch::{generate, Graph, GraphKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Small named graphs plus a few random ones, some with isolated vertices.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("k2".to_string(), generate(GraphKind::Complete(2)).unwrap()),
        ("k4".to_string(), generate(GraphKind::Complete(4)).unwrap()),
        ("cycle6".to_string(), generate(GraphKind::Cycle(6)).unwrap()),
        ("cycle7".to_string(), generate(GraphKind::Cycle(7)).unwrap()),
        ("path9".to_string(), generate(GraphKind::Path(9)).unwrap()),
        ("star8".to_string(), generate(GraphKind::Star(8)).unwrap()),
        ("grid4x5".to_string(), generate(GraphKind::Grid2d(4, 5)).unwrap()),
        ("isolated3".to_string(), Graph::from_edges(3, Vec::<(usize, usize)>::new())),
        ("edge_plus_isolated".to_string(), Graph::from_edges(4, vec![(0, 1)])),
    ];
    let mut r = rng(17);
    for (i, &(n, p)) in [(12, 0.3), (25, 0.15), (40, 0.1), (50, 0.05)].iter().enumerate() {
        out.push((format!("gnp{i}"), gnp(n, p, &mut r)));
    }
    out
}

/// Average ℓ-step return probability by pushing the full distribution of a
/// walk from every start vertex; a dense dynamic program with no spectral
/// machinery.
pub fn return_probabilities(g: &Graph, max_order: usize) -> Vec<f64> {
    let n = g.vertex_count();
    let mut totals = vec![0.0; max_order + 1];
    for start in 0..n {
        let mut p = vec![0.0; n];
        p[start] = 1.0;
        totals[0] += 1.0;
        for total in totals.iter_mut().skip(1) {
            let mut next = vec![0.0; n];
            for (v, &mass) in p.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                let nbrs = g.neighbors(v);
                if nbrs.is_empty() {
                    next[v] += mass;
                } else {
                    let share = mass / nbrs.len() as f64;
                    for &u in nbrs {
                        next[u] += share;
                    }
                }
            }
            p = next;
            *total += p[start];
        }
    }
    totals.iter().map(|t| t / n as f64).collect()
}

/// Toggle `k` distinct vertex pairs of `g`; returns the edited graph and the
/// number of pairs actually toggled.
pub fn toggle_pairs(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> (Graph, usize) {
    let n = g.vertex_count();
    let mut edges: std::collections::BTreeSet<(usize, usize)> = g.edges().collect();
    let mut touched = std::collections::BTreeSet::new();
    let k = k.min(n * (n - 1) / 2);
    while touched.len() < k {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if touched.insert(pair) && !edges.remove(&pair) {
            edges.insert(pair);
        }
    }
    (Graph::from_edges(n, edges), touched.len())
}
