//! Undirected simple graphs and per-vertex activation thresholds.
//!
//! Graphs are read from SNAP-style edge lists. Vertex ids in the input do not
//! have to be contiguous; they are renumbered densely in ascending order of the
//! original id and the mapping is kept so results can be reported in the
//! original numbering.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};

/// Dense vertex index in `0..vertex_count`.
pub type Vertex = usize;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted ascending and free of duplicates and self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<Vertex>,
    labels: Vec<u64>,
}

/// Bookkeeping from [`Graph::parse_edge_list`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub lines: usize,
    pub edges_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl Graph {
    /// Builds a graph on `vertex_count` vertices labelled `0..vertex_count`.
    ///
    /// Self-loops and repeated edges are dropped.
    pub fn from_edges(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        index: w,
                        vertex_count,
                    });
                }
            }
        }
        let labels = (0..vertex_count as u64).collect();
        Ok(Self::build(labels, edges.iter().copied()).0)
    }

    /// Parses whitespace-separated `u v` pairs, one edge per line. Lines whose
    /// first non-blank character is `#` or `%` are comments.
    pub fn parse_edge_list(text: &str) -> Result<(Self, ParseStats)> {
        Self::read_edge_list(text.as_bytes())
    }

    /// Same as [`Graph::parse_edge_list`] over any buffered reader.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<(Self, ParseStats)> {
        let mut raw = Vec::new();
        let mut stats = ParseStats::default();
        for (index, line) in reader.lines().enumerate() {
            let line_no = index + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            stats.lines = line_no;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 2 vertex ids, found {} tokens", tokens.len()),
                });
            }
            let parse = |tok: &str| {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("`{tok}` is not a non-negative integer vertex id"),
                })
            };
            raw.push((parse(tokens[0])?, parse(tokens[1])?));
        }
        stats.edges_read = raw.len();

        let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index: HashMap<u64, Vertex> =
            labels.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let edges = raw.iter().map(|(u, v)| (index[u], index[v]));
        let (graph, self_loops, duplicates) = Self::build(labels, edges);
        stats.self_loops_dropped = self_loops;
        stats.duplicates_dropped = duplicates;
        Ok((graph, stats))
    }

    /// Loads an edge list from disk, transparently decompressing gzip input
    /// (detected by its magic bytes).
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, ParseStats)> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        if bytes.starts_with(&[0x1f, 0x8b]) {
            let mut text = Vec::new();
            MultiGzDecoder::new(bytes.as_slice())
                .read_to_end(&mut text)
                .map_err(|e| Error::io(path, e))?;
            Self::read_edge_list(BufReader::new(text.as_slice()))
        } else {
            Self::read_edge_list(BufReader::new(bytes.as_slice()))
        }
    }

    fn build(
        labels: Vec<u64>,
        edges: impl Iterator<Item = (Vertex, Vertex)>,
    ) -> (Self, usize, usize) {
        let n = labels.len();
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        let mut self_loops = 0;
        let mut total = 0;
        for (u, v) in edges {
            if u == v {
                self_loops += 1;
                continue;
            }
            total += 1;
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adjacency = Vec::with_capacity(2 * total);
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            adjacency.extend_from_slice(list);
            offsets.push(adjacency.len());
        }
        let graph = Graph {
            offsets,
            adjacency,
            labels,
        };
        let duplicates = total - graph.edge_count();
        (graph, self_loops, duplicates)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Sorted open neighborhood of `v`.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Original id of dense vertex `v`.
    pub fn label(&self, v: Vertex) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense index of an original vertex id.
    pub fn index_of(&self, label: u64) -> Option<Vertex> {
        self.labels.binary_search(&label).ok()
    }

    /// Vertices sorted by ascending degree, ties by ascending index.
    pub fn ascending_degree_order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = self.vertices().collect();
        order.sort_by_key(|&v| (self.degree(v), v));
        order
    }

    /// Vertices sorted by descending degree, ties by ascending index.
    pub fn descending_degree_order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = self.vertices().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    /// Edge list in original ids, `u < v`, one edge per line. Isolated
    /// vertices are written as self-loops so that re-parsing keeps them.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in self.vertices() {
            if self.degree(u) == 0 {
                let _ = writeln!(out, "{} {}", self.label(u), self.label(u));
            }
            for &v in self.neighbors(u).iter().filter(|&&v| v > u) {
                let _ = writeln!(out, "{} {}", self.label(u), self.label(v));
            }
        }
        out
    }
}

/// Activation threshold per vertex, `0 <= theta(v) <= deg(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    theta: Vec<u32>,
}

impl Thresholds {
    /// Validates explicit thresholds against `g`.
    pub fn new(g: &Graph, theta: Vec<u32>) -> Result<Self> {
        if theta.len() != g.vertex_count() {
            return Err(Error::invalid(format!(
                "expected {} thresholds, got {}",
                g.vertex_count(),
                theta.len()
            )));
        }
        for (v, &t) in theta.iter().enumerate() {
            if t as usize > g.degree(v) {
                return Err(Error::ThresholdTooLarge {
                    vertex: g.label(v),
                    threshold: t,
                    degree: g.degree(v),
                });
            }
        }
        Ok(Thresholds { theta })
    }

    /// `theta(v) = ceil(deg(v) / 2)`; isolated vertices get 0.
    pub fn majority(g: &Graph) -> Self {
        let theta = g
            .vertices()
            .map(|v| g.degree(v).div_ceil(2) as u32)
            .collect();
        Thresholds { theta }
    }

    /// Reads `vertex_id threshold` lines keyed by original ids. Vertices not
    /// listed fall back to the majority rule.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let mut theta = Self::majority(g).theta;
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let [id, value] = tokens[..] else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `vertex threshold`, found {} tokens", tokens.len()),
                });
            };
            let bad = |tok: &str| Error::Parse {
                line: line_no,
                message: format!("`{tok}` is not a non-negative integer"),
            };
            let id: u64 = id.parse().map_err(|_| bad(id))?;
            let value: u32 = value.parse().map_err(|_| bad(value))?;
            let v = g.index_of(id).ok_or(Error::UnknownVertex(id))?;
            theta[v] = value;
        }
        Self::new(g, theta)
    }

    pub fn load(g: &Graph, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(g, &text)
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> u32 {
        self.theta[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}
