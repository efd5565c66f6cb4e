//! Exact triangle counting on bit-sliced adjacency matrices, plus a
//! data-flow simulator for running the count inside a bounded in-memory
//! compute array.
//!
//! The pipeline has three stages:
//!
//! 1. **Load & orient** ([`graph`], [`adjacency`]): an undirected graph is
//!    deduplicated and oriented so every edge points from its smaller to
//!    its larger endpoint. Each triangle then survives as exactly one
//!    wedge that the kernel can close.
//! 2. **Count** ([`kernel`]): for every oriented edge `(i, j)`, the number
//!    of triangles hinged on it is the population count of
//!    `row(i) AND column(j)`. Three independent engines (bitwise,
//!    sorted-intersection, adjacency-cube trace) return identical counts.
//! 3. **Compress & simulate** ([`slicing`], [`sim`]): rows and columns are
//!    cut into fixed-width slices, all-zero slices are dropped, and the
//!    simulator replays the edge-by-edge computation against a bounded
//!    slice buffer, reporting hits, misses, write traffic, and modeled
//!    latency/energy under LRU or farthest-next-use replacement.
//!
//! # Quick start
//!
//! ```
//! use tricount_core::{
//!     count_triangles_bitwise, orient, simulate, ArrayCapacity, CompressedGraph,
//!     CostConfig, Graph, SimOptions, SliceConfig,
//! };
//!
//! // A 4-vertex graph with two triangles sharing the edge (1, 2).
//! let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])?;
//! assert_eq!(count_triangles_bitwise(&orient(&g)), 2);
//!
//! // Compress into 64-bit slices and replay through a bounded buffer.
//! let cg = CompressedGraph::from_graph(&g, SliceConfig::default())?;
//! let report = simulate(
//!     &cg,
//!     SimOptions {
//!         capacity: ArrayCapacity::Bounded(2),
//!         ..SimOptions::default()
//!     },
//!     &CostConfig::unit(),
//! )?;
//! assert_eq!(report.triangles, 2);
//! assert!(report.hits + report.misses == report.column_loads_requested);
//! # Ok::<(), tricount_core::Error>(())
//! ```

pub mod adjacency;
pub mod bits;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod sim;
pub mod slicing;

#[cfg(test)]
pub(crate) mod testutil;

pub use adjacency::{orient, OrientedAdjacency};
pub use error::{Error, Result};
pub use graph::{load_edge_list, read_edge_list, sparsity_from_counts, Graph, LoadStats};
pub use kernel::{count_triangles_bitwise, count_triangles_oracle, count_triangles_trace};
pub use sim::{
    build_access_trace, capacity_for_megabytes, simulate, ArrayCapacity, CostConfig,
    ReplacementPolicy, RowOrder, SimOptions, SimReport, SliceTask,
};
pub use slicing::{CompressedGraph, CompressionMetrics, SliceConfig};
