use super::{Graph, GraphError};
use crate::VertexId;

/// Block 1D distribution: partition `i` owns a contiguous vertex range and
/// range sizes differ by at most one (larger blocks first).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionMap {
    vertex_count: usize,
    num_partitions: usize,
}

pub fn partition_1d(graph: &Graph, num_partitions: usize) -> Result<PartitionMap, GraphError> {
    PartitionMap::new(graph.vertex_count(), num_partitions)
}

impl PartitionMap {
    pub fn new(vertex_count: usize, num_partitions: usize) -> Result<Self, GraphError> {
        if num_partitions == 0 {
            return Err(GraphError::ZeroPartitions);
        }
        Ok(PartitionMap {
            vertex_count,
            num_partitions,
        })
    }

    pub fn num_partitions(&self) -> usize {
        self.num_partitions
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn base(&self) -> (usize, usize) {
        (
            self.vertex_count / self.num_partitions,
            self.vertex_count % self.num_partitions,
        )
    }

    /// Owning partition of `v`. Requires `v < vertex_count`.
    #[inline]
    pub fn owner(&self, v: VertexId) -> usize {
        let v = v as usize;
        debug_assert!(v < self.vertex_count);
        let (q, r) = self.base();
        let big = r * (q + 1);
        if v < big {
            v / (q + 1)
        } else {
            r + (v - big) / q
        }
    }

    /// Half-open vertex range owned by partition `p`.
    pub fn range(&self, p: usize) -> std::ops::Range<usize> {
        let (q, r) = self.base();
        let start = p * q + p.min(r);
        let len = q + usize::from(p < r);
        start..start + len
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.num_partitions).map(|p| self.range(p).len()).collect()
    }
}
