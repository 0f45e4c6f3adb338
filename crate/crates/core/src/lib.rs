//! Target set selection under the deterministic threshold model.
//!
//! Given an undirected graph and a threshold per vertex, find a small set of
//! initially active vertices whose diffusion activates the whole graph. The
//! crate provides the diffusion engine, the maximum-degree greedy heuristic
//! and its ascending-degree reduction, a biased random-key genetic algorithm
//! with static or power-law parameter control, and an experiment harness with
//! summary statistics.

pub mod bench;
pub mod brkga;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod powerlaw;
pub mod solver;

pub use brkga::{Brkga, BrkgaConfig, Budget, ParameterMode, Params, RunResult};
pub use diffusion::{fitness, is_valid, spread, DiffusionState, VertexSet};
pub use error::{Error, Result};
pub use graph::{Graph, Thresholds, Vertex};
pub use greedy::{decode, mdg, reverse_mdg, Greedy};
pub use powerlaw::{ParameterSampler, PowerLaw};
pub use solver::{solve, Algorithm, SolveOptions};
