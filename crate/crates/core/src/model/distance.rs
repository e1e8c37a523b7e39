use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Distance, VertexId, INFINITY};

/// Per-vertex tentative distance with a linearizable conditional-minimum
/// update. Values only ever decrease.
#[derive(Debug)]
pub struct DistanceMap {
    cells: Box<[AtomicU64]>,
}

impl DistanceMap {
    pub fn new(vertex_count: usize) -> Self {
        DistanceMap {
            cells: (0..vertex_count).map(|_| AtomicU64::new(INFINITY)).collect(),
        }
    }

    pub fn from_values(values: &[Distance]) -> Self {
        DistanceMap {
            cells: values.iter().map(|&d| AtomicU64::new(d)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> Distance {
        self.cells[v as usize].load(Ordering::Relaxed)
    }

    /// Sets `dist[v] = d` iff `d < dist[v]`; returns whether it did.
    ///
    /// A single read-modify-write on one cell, so all offers to the same
    /// vertex are totally ordered and the final value is the minimum offered.
    #[inline]
    pub fn atomic_min_update(&self, v: VertexId, d: Distance) -> bool {
        self.cells[v as usize].fetch_min(d, Ordering::AcqRel) > d
    }

    pub fn snapshot(&self) -> Vec<Distance> {
        self.cells.iter().map(|c| c.load(Ordering::Acquire)).collect()
    }
}
