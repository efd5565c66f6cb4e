//! Undirected graph loading and normalization.
//!
//! Input is the plain edge-list format used by the SNAP repository dumps:
//! `#`-prefixed comment lines, then one whitespace-separated integer pair
//! per line. Both directions of an undirected edge, duplicate pairs, and
//! self-loops all collapse into a single canonical edge. Vertex ids are
//! remapped to a dense `0..vertex_count` range by ascending original id,
//! and the original ids are kept for reporting.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A simple undirected graph with dense vertex ids.
///
/// Edges are canonicalized to `(u, v)` with `u < v` and held sorted and
/// deduplicated, so `edges().len()` is the undirected edge count.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    /// Dense id -> id in the source file. `None` when they coincide.
    original_ids: Option<Vec<u64>>,
}

/// Bookkeeping from one edge-list load.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines_total: usize,
    /// Comment and blank lines.
    pub comment_lines: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

impl Graph {
    /// Builds a graph over `vertex_count` vertices from raw id pairs.
    ///
    /// Ids must already be dense (`< vertex_count`); no remapping happens.
    /// Self-loops and duplicates are dropped silently.
    pub fn from_edges(
        vertex_count: usize,
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Graph> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= vertex_count as u64 || b >= vertex_count as u64 {
                return Err(Error::Config(format!(
                    "edge ({a}, {b}) out of range for {vertex_count} vertices"
                )));
            }
            if a == b {
                continue;
            }
            let (u, v) = (a.min(b) as u32, a.max(b) as u32);
            edges.push((u, v));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Graph {
            vertex_count,
            edges,
            original_ids: None,
        })
    }

    /// Samples G(n, p): each of the C(n, 2) unordered pairs becomes an edge
    /// independently with probability `p`. Deterministic in `seed`.
    pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Ok(Graph {
            vertex_count: n,
            edges,
            original_ids: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges, sorted, each `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// The source-file id for a dense vertex id.
    pub fn original_id(&self, dense: u32) -> u64 {
        match &self.original_ids {
            Some(ids) => ids[dense as usize],
            None => u64::from(dense),
        }
    }

    /// Full undirected adjacency lists, each sorted ascending.
    pub fn neighbor_lists(&self) -> Vec<Vec<u32>> {
        let mut lists = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        lists
    }

    /// Fraction of the |V|x|V| matrix cells that are zero when each edge
    /// occupies a single cell: `1 - |E| / |V|^2`.
    pub fn sparsity(&self) -> Result<f64> {
        sparsity_from_counts(self.vertex_count, self.edges.len())
    }
}

/// See [`Graph::sparsity`]. Errors on an empty vertex set.
pub fn sparsity_from_counts(vertex_count: usize, edge_count: usize) -> Result<f64> {
    if vertex_count == 0 {
        return Err(Error::Config(
            "sparsity is undefined for a graph with no vertices".into(),
        ));
    }
    let v = vertex_count as f64;
    Ok(1.0 - edge_count as f64 / (v * v))
}

/// Loads a SNAP-style edge list from `path`.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, LoadStats)> {
    let file = File::open(path)?;
    read_edge_list(BufReader::new(file))
}

/// Loads a SNAP-style edge list from any buffered reader.
pub fn read_edge_list(reader: impl BufRead) -> Result<(Graph, LoadStats)> {
    let mut stats = LoadStats::default();
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        stats.lines_total += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            stats.comment_lines += 1;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected two vertex ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid vertex id {tok:?}"),
            })
        };
        let a = parse(tokens.next())?;
        let b = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected exactly two vertex ids".into(),
            });
        }
        if a == b {
            stats.self_loops_dropped += 1;
            continue;
        }
        raw.push((a, b));
    }

    // Dense ids are assigned by ascending original id, so graphs whose
    // files already use 0..n-1 keep their numbering.
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |orig: u64| ids.binary_search(&orig).expect("id present") as u32;

    let mut edges: Vec<(u32, u32)> = raw
        .iter()
        .map(|&(a, b)| {
            let (da, db) = (dense(a), dense(b));
            (da.min(db), da.max(db))
        })
        .collect();
    edges.sort_unstable();
    let before = edges.len();
    edges.dedup();
    stats.duplicates_collapsed = before - edges.len();

    let graph = Graph {
        vertex_count: ids.len(),
        edges,
        original_ids: Some(ids),
    };
    Ok((graph, stats))
}
