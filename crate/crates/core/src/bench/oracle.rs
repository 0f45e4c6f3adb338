//! Exhaustive minimum target set for test-sized graphs.

use itertools::Itertools;

use crate::diffusion::{DiffusionState, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Thresholds};

/// Largest graph the exhaustive search accepts.
pub const EXACT_VERTEX_LIMIT: usize = 20;

/// A minimum-cardinality valid set: subsets are tried by increasing size and
/// in lexicographic order within a size, so the first valid one is returned.
pub fn exact_min_target_set(graph: &Graph, thresholds: &Thresholds) -> Result<VertexSet> {
    let n = graph.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            vertex_count: n,
            limit: EXACT_VERTEX_LIMIT,
        });
    }
    let mut state = DiffusionState::new(graph, thresholds);
    for size in 0..=n {
        for subset in graph.vertices().combinations(size) {
            state.reset_to(subset.iter().copied());
            if state.is_complete() {
                return Ok(VertexSet::from_vertices(n, subset));
            }
        }
    }
    unreachable!("the full vertex set is always valid")
}
