//! Abstract Graph Machine (AGM) kernel for single-source shortest paths.
//!
//! One processing function, many orderings. The same relaxation kernel runs
//! as chaotic relaxation, Dijkstra, Δ-stepping or k-level-asynchronous (KLA)
//! SSSP depending only on the strict weak ordering used to split work items
//! into equivalence classes. The extended model ([`eagm`]) adds per-level
//! orderings below the root (thread, NUMA group, process) to get the
//! `buffer`/`threadq`/`numaq`/`nodeq` variants.
//!
//! Layout:
//! - [`graph`]: CSR storage, RMAT generation, loaders, 1D partitioning.
//! - [`model`]: work items, orderings, the distance state and processing functions.
//! - [`engine`]: epoch-by-epoch execution over simulated partitions.
//! - [`eagm`]: spatial hierarchy and the level queues.
//! - [`verify`]: reference solvers and trace/fixed-point validators.

pub mod eagm;
pub mod engine;
pub mod graph;
pub mod model;
pub mod verify;

/// Dense 0-based vertex identifier.
pub type VertexId = u32;
/// Edge weight. Unsigned, so non-negativity holds by construction.
pub type Weight = u32;
/// Path length. Exact integer arithmetic throughout.
pub type Distance = u64;

/// Distance of a vertex that was never reached.
pub const INFINITY: Distance = Distance::MAX;

pub use eagm::{Level, LevelQueue, Preset, SpatialHierarchy};
pub use engine::{run, EngineConfig, RunOutput, RunStats, WorkerTopology};
pub use graph::{build_csr, Graph, PartitionMap, RmatParams};
pub use model::{DistanceMap, OrderingSpec, WorkItem};
