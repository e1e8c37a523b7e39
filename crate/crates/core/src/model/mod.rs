//! Work items, orderings, vertex state and processing functions.

mod distance;
mod ordering;
mod pf;
mod swo;

pub use distance::DistanceMap;
pub use ordering::{class_key, compare, induced_class_compare, ClassKey, Comparison, OrderingSpec};
pub use pf::{pf_kla, pf_sssp, KlaRelax, SsspRelax, Statement};
pub use swo::{validate_swo, validate_swo_with, SwoReport, SwoViolation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Distance, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("k-level ordering needs work items carrying a level, got {0:?}")]
    MissingLevel(WorkItem),
    #[error("class key from {key} compared under {order}")]
    MixedKeys { order: OrderingSpec, key: OrderingSpec },
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: VertexId, vertex_count: usize },
}

/// `⟨vertex, distance⟩`, or `⟨vertex, distance, level⟩` for KLA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WorkItem {
    pub vertex: VertexId,
    pub distance: Distance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

impl WorkItem {
    pub const fn new(vertex: VertexId, distance: Distance) -> Self {
        WorkItem {
            vertex,
            distance,
            level: None,
        }
    }

    pub const fn with_level(vertex: VertexId, distance: Distance, level: u32) -> Self {
        WorkItem {
            vertex,
            distance,
            level: Some(level),
        }
    }

    /// Tuple-style access: 0 is the vertex, 1 the distance, 2 the level.
    pub fn element(&self, index: usize) -> Option<u64> {
        match index {
            0 => Some(self.vertex as u64),
            1 => Some(self.distance),
            2 => self.level.map(u64::from),
            _ => None,
        }
    }
}
