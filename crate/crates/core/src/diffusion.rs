//! Deterministic threshold diffusion.
//!
//! A vertex becomes active once the number of its active neighbors reaches its
//! threshold. The finally active set is computed with a breadth-first cascade
//! that increments neighbor counters as vertices activate, so a full spread
//! costs `O(|V| + |E|)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds, Vertex};

/// Dense membership set over the vertices of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(vertex_count: usize) -> Self {
        VertexSet {
            members: vec![false; vertex_count],
            len: 0,
        }
    }

    pub fn full(vertex_count: usize) -> Self {
        VertexSet {
            members: vec![true; vertex_count],
            len: vertex_count,
        }
    }

    pub fn from_vertices(vertex_count: usize, vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut set = Self::empty(vertex_count);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Returns `true` if `v` was not yet a member.
    #[inline]
    pub fn insert(&mut self, v: Vertex) -> bool {
        let fresh = !self.members[v];
        if fresh {
            self.members[v] = true;
            self.len += 1;
        }
        fresh
    }

    /// Returns `true` if `v` was a member.
    #[inline]
    pub fn remove(&mut self, v: Vertex) -> bool {
        let present = self.members[v];
        if present {
            self.members[v] = false;
            self.len -= 1;
        }
        present
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.members[v]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the universe this set lives in.
    pub fn capacity(&self) -> usize {
        self.members.len()
    }

    pub fn is_full(&self) -> bool {
        self.len == self.members.len()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn clear(&mut self) {
        self.members.fill(false);
        self.len = 0;
    }
}

/// Incremental activation state: the active set, per-vertex active-neighbor
/// counters, and the cascade queue.
///
/// Outside of [`DiffusionState::add_and_spread`] the queue is empty and the
/// active set is closed under the activation rule.
#[derive(Clone, Debug)]
pub struct DiffusionState<'g> {
    graph: &'g Graph,
    thresholds: &'g Thresholds,
    active: VertexSet,
    active_neighbors: Vec<u32>,
    queue: VecDeque<Vertex>,
}

impl<'g> DiffusionState<'g> {
    /// State whose active set is the spread of the empty set, i.e. every
    /// zero-threshold vertex and whatever those activate.
    pub fn new(graph: &'g Graph, thresholds: &'g Thresholds) -> Self {
        let n = graph.vertex_count();
        let mut state = DiffusionState {
            graph,
            thresholds,
            active: VertexSet::empty(n),
            active_neighbors: vec![0; n],
            queue: VecDeque::new(),
        };
        state.seed_zero_thresholds();
        state.cascade();
        state
    }

    /// State with active set equal to the spread of `seeds`.
    pub fn from_set(graph: &'g Graph, thresholds: &'g Thresholds, seeds: &VertexSet) -> Self {
        let mut state = DiffusionState {
            graph,
            thresholds,
            active: VertexSet::empty(graph.vertex_count()),
            active_neighbors: vec![0; graph.vertex_count()],
            queue: VecDeque::new(),
        };
        state.reset_to(seeds.iter());
        state
    }

    /// Discards the current activation and restarts from the spread of
    /// `seeds`, reusing the allocated buffers.
    pub fn reset_to(&mut self, seeds: impl IntoIterator<Item = Vertex>) {
        self.active.clear();
        self.active_neighbors.fill(0);
        self.queue.clear();
        for v in seeds {
            if self.active.insert(v) {
                self.queue.push_back(v);
            }
        }
        self.seed_zero_thresholds();
        self.cascade();
    }

    /// Restarts from the spread of the empty set.
    pub fn reset(&mut self) {
        self.reset_to(std::iter::empty());
    }

    fn seed_zero_thresholds(&mut self) {
        for v in self.graph.vertices() {
            if self.thresholds.get(v) == 0 && self.active.insert(v) {
                self.queue.push_back(v);
            }
        }
    }

    /// Processes queued activations in FIFO order until the active set is
    /// closed. Returns the number of vertices activated by the cascade.
    fn cascade(&mut self) -> usize {
        let mut activated = 0;
        while let Some(u) = self.queue.pop_front() {
            for &w in self.graph.neighbors(u) {
                self.active_neighbors[w] += 1;
                if !self.active.contains(w) && self.active_neighbors[w] >= self.thresholds.get(w) {
                    self.active.insert(w);
                    self.queue.push_back(w);
                    activated += 1;
                }
            }
        }
        activated
    }

    /// Activates `v` and propagates. Returns how many vertices became active,
    /// including `v` itself; zero if `v` was already active.
    pub fn add_and_spread(&mut self, v: Vertex) -> Result<usize> {
        let n = self.graph.vertex_count();
        if v >= n {
            return Err(Error::VertexOutOfRange {
                index: v,
                vertex_count: n,
            });
        }
        if !self.active.insert(v) {
            return Ok(0);
        }
        self.queue.push_back(v);
        Ok(1 + self.cascade())
    }

    pub fn active(&self) -> &VertexSet {
        &self.active
    }

    pub fn into_active(self) -> VertexSet {
        self.active
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn is_complete(&self) -> bool {
        self.active.is_full()
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active.contains(v)
    }

    /// Number of active neighbors of `v`.
    pub fn active_neighbors(&self, v: Vertex) -> u32 {
        self.active_neighbors[v]
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn thresholds(&self) -> &'g Thresholds {
        self.thresholds
    }
}

/// Finally active set of `seeds`.
pub fn spread(graph: &Graph, thresholds: &Thresholds, seeds: &VertexSet) -> VertexSet {
    DiffusionState::from_set(graph, thresholds, seeds).into_active()
}

/// `true` iff `seeds` eventually activates every vertex.
pub fn is_valid(graph: &Graph, thresholds: &Thresholds, seeds: &VertexSet) -> bool {
    DiffusionState::from_set(graph, thresholds, seeds).is_complete()
}

/// `|seeds|` for a valid set, `|V| + 1` otherwise. Smaller is better.
pub fn fitness(graph: &Graph, thresholds: &Thresholds, seeds: &VertexSet) -> usize {
    if is_valid(graph, thresholds, seeds) {
        seeds.len()
    } else {
        graph.vertex_count() + 1
    }
}
