use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Parses a whitespace-separated edge list (SNAP "ungraph" layout).
///
/// Ids are compacted to `0..n` in order of first appearance. Lines starting
/// with `#` and blank lines are skipped. A self-loop line still introduces
/// its vertex, even though the loop itself is dropped.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let mut endpoint = |tokens: &mut std::str::SplitWhitespace<'_>| -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected two vertex ids".into(),
            })?;
            let raw_id: u64 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid vertex id {tok:?}"),
            })?;
            let next = ids.len();
            Ok(*ids.entry(raw_id).or_insert(next))
        };
        let u = endpoint(&mut tokens)?;
        let v = endpoint(&mut tokens)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected token {extra:?}"),
            });
        }
        edges.push((u, v));
    }
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Graph::from_edges(ids.len(), edges))
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Graph> {
    load_edge_list(&std::fs::read_to_string(path)?)
}

/// Serializes `g` so that [`load_edge_list`] rebuilds the identical graph.
///
/// Lines are ordered so vertex ids first appear in increasing order. A vertex
/// that cannot be introduced by one of its edges (it has no lower-numbered
/// neighbor and `v + 1` is not its smallest neighbor) is introduced by a
/// `v v` line, which the loader drops as a self-loop.
pub fn write_edge_list(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    let mut seen = 0usize;
    let mut pre_emitted: Option<(usize, usize)> = None;
    for v in 0..n {
        if seen <= v {
            let adj = g.neighbors(v);
            let has_lower = adj.first().is_some_and(|&u| u < v);
            if !has_lower {
                if adj.first() == Some(&(v + 1)) {
                    writeln!(out, "{} {}", v, v + 1).unwrap();
                    pre_emitted = Some((v, v + 1));
                    seen = v + 2;
                } else {
                    writeln!(out, "{v} {v}").unwrap();
                    seen = v + 1;
                }
            } else {
                seen = v + 1;
            }
        }
        for &u in g.neighbors(v).iter().take_while(|&&u| u < v) {
            if pre_emitted == Some((u, v)) {
                continue;
            }
            writeln!(out, "{u} {v}").unwrap();
        }
    }
    out
}

pub fn write_edge_list_file(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_edge_list(g))?;
    Ok(())
}
