//! Extended AGM: a GLOBAL → PROCESS → NUMA → THREAD tree where every level
//! may order the work items it can see. The root always carries the AGM
//! ordering, so every EAGM produces the same equivalence classes as its AGM
//! and only the schedule inside a class changes.

mod hierarchy;
mod queue;

pub use hierarchy::{make_hierarchy, preset, HierarchyError, Level, Preset, SpatialHierarchy};
pub use queue::{LevelQueue, QueueEntry, QueueError, DEFAULT_BATCH_LIMIT};
