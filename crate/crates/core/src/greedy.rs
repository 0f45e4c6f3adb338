//! Greedy construction and reduction of target sets.
//!
//! * [`mdg`] repeatedly activates an inactive vertex of maximum degree.
//! * [`decode`] does the same with the score `key(v) * deg(v)`, which is how a
//!   random-key vector is turned into a target set.
//! * [`reverse_mdg`] makes one pass over the vertices in ascending degree order
//!   and drops every member whose removal keeps the set valid.
//!
//! Ties are always broken towards the lowest vertex index.

use std::cmp::Ordering;

use crate::diffusion::{DiffusionState, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds, Vertex};

/// Reusable scratch space for the greedy routines over one instance.
///
/// The degree orders are computed once; each call reuses the diffusion
/// buffers instead of reallocating them.
#[derive(Clone, Debug)]
pub struct Greedy<'g> {
    graph: &'g Graph,
    state: DiffusionState<'g>,
    descending: Vec<Vertex>,
    ascending: Vec<Vertex>,
    order: Vec<Vertex>,
    scores: Vec<f64>,
}

impl<'g> Greedy<'g> {
    pub fn new(graph: &'g Graph, thresholds: &'g Thresholds) -> Self {
        Greedy {
            graph,
            state: DiffusionState::new(graph, thresholds),
            descending: graph.descending_degree_order(),
            ascending: graph.ascending_degree_order(),
            order: Vec::with_capacity(graph.vertex_count()),
            scores: vec![0.0; graph.vertex_count()],
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Maximum-degree greedy construction.
    pub fn mdg(&mut self) -> VertexSet {
        let order = std::mem::take(&mut self.descending);
        let set = self.construct(&order);
        self.descending = order;
        set
    }

    /// Greedy construction guided by `keys`: the next vertex is the inactive
    /// one maximizing `keys[v] * deg(v)`.
    pub fn decode(&mut self, keys: &[f64]) -> Result<VertexSet> {
        let n = self.graph.vertex_count();
        if keys.len() != n {
            return Err(Error::invalid(format!(
                "expected {n} keys, got {}",
                keys.len()
            )));
        }
        if let Some((v, k)) = keys
            .iter()
            .enumerate()
            .find(|(_, k)| !(0.0..=1.0).contains(*k))
        {
            return Err(Error::invalid(format!(
                "key {k} of vertex {v} is outside [0, 1]"
            )));
        }
        for (v, score) in self.scores.iter_mut().enumerate() {
            *score = keys[v] * self.graph.degree(v) as f64;
        }
        let mut order = std::mem::take(&mut self.order);
        order.clear();
        order.extend(self.graph.vertices());
        let scores = &self.scores;
        order.sort_unstable_by(|&a, &b| match scores[b].total_cmp(&scores[a]) {
            Ordering::Equal => a.cmp(&b),
            other => other,
        });
        let set = self.construct(&order);
        self.order = order;
        Ok(set)
    }

    /// Walks `order`, activating every vertex not yet covered, until the whole
    /// graph is active. Scores are static, so the first uncovered vertex in the
    /// pre-sorted order is the argmax over the uncovered ones.
    fn construct(&mut self, order: &[Vertex]) -> VertexSet {
        let n = self.graph.vertex_count();
        self.state.reset();
        let mut chosen = VertexSet::empty(n);
        for &v in order {
            if self.state.is_complete() {
                break;
            }
            if self.state.is_active(v) {
                continue;
            }
            self.state
                .add_and_spread(v)
                .expect("order only contains vertices of the graph");
            chosen.insert(v);
        }
        debug_assert!(self.state.is_complete());
        chosen
    }

    /// `true` iff `seeds` activates the whole graph.
    pub fn is_valid(&mut self, seeds: &VertexSet) -> bool {
        self.state.reset_to(seeds.iter());
        self.state.is_complete()
    }

    /// Single ascending-degree pass dropping every vertex of `seeds` whose
    /// removal keeps the set valid. `seeds` must be valid.
    pub fn reverse_mdg(&mut self, seeds: &VertexSet) -> Result<VertexSet> {
        if seeds.capacity() != self.graph.vertex_count() || !self.is_valid(seeds) {
            return Err(Error::InvalidTargetSet);
        }
        let mut current = seeds.clone();
        for i in 0..self.ascending.len() {
            let v = self.ascending[i];
            if !current.contains(v) {
                continue;
            }
            current.remove(v);
            if !self.is_valid(&current) {
                current.insert(v);
            }
        }
        Ok(current)
    }
}

/// Maximum-degree greedy target set.
pub fn mdg(graph: &Graph, thresholds: &Thresholds) -> VertexSet {
    Greedy::new(graph, thresholds).mdg()
}

/// Key-weighted greedy target set.
pub fn decode(graph: &Graph, thresholds: &Thresholds, keys: &[f64]) -> Result<VertexSet> {
    Greedy::new(graph, thresholds).decode(keys)
}

/// Ascending-degree reduction of a valid target set.
pub fn reverse_mdg(graph: &Graph, thresholds: &Thresholds, seeds: &VertexSet) -> Result<VertexSet> {
    Greedy::new(graph, thresholds).reverse_mdg(seeds)
}
