//! Graph kernels shared by the recommendation-table builders.

mod bottleneck;
mod cycles;
mod karp;
mod parity;
mod paths;
mod scc;

pub use bottleneck::{bottleneck_propagation, max_min_cycle_value, Bottlenecks};
pub use cycles::{enumerate_cyclic_trails, enumerate_simple_cycles, Anchor};
pub use karp::{critical_edges_with, edge_weights, max_mean_cycle, max_mean_cycle_with};
pub use parity::{accepting_parts, cycle_through, find_accepting_cycle};
pub use paths::{shortest_path_over, shortest_path_to_targets, PathInfo};
pub use scc::{bfs_path, compute_msccs, reachable, sccs_where, Condensation, Mscc};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{what} exceed the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
}
