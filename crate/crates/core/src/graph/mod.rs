//! Compressed-sparse-row graph storage and construction.

mod io;
mod partition;
mod rmat;

pub use io::{load_dimacs_gr, load_edge_list, EdgeListOptions, LoadedGraph, WeightPolicy};
pub use partition::{partition_1d, PartitionMap};
pub use rmat::{generate_rmat, RmatParams};

use crate::{VertexId, Weight};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} has negative weight {weight}")]
    NegativeWeight { index: usize, weight: i64 },
    #[error("edge {index} endpoint {vertex} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        index: usize,
        vertex: u64,
        vertex_count: usize,
    },
    #[error("edge {index} weight {weight} does not fit in 32 bits")]
    WeightTooLarge { index: usize, weight: i64 },
    #[error("{0} vertices exceed the 32-bit vertex id space")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: u64, vertex_count: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {expected} arcs, found {found}")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("invalid RMAT parameters: {0}")]
    InvalidRmat(String),
    #[error("number of partitions must be positive")]
    ZeroPartitions,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}

/// Unvalidated input edge: `(source, target, weight)`.
pub type RawEdge = (u64, u64, i64);

/// Directed weighted graph in CSR layout. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    row_offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<Weight>,
}

/// Builds a CSR graph. Edges are grouped by source and keep their input
/// order within a row; parallel edges and self-loops are kept.
pub fn build_csr(edges: &[RawEdge], vertex_count: usize) -> Result<Graph, GraphError> {
    if vertex_count > VertexId::MAX as usize {
        return Err(GraphError::TooManyVertices(vertex_count));
    }
    let mut degree = vec![0usize; vertex_count + 1];
    for (index, &(src, dst, weight)) in edges.iter().enumerate() {
        for vertex in [src, dst] {
            if vertex >= vertex_count as u64 {
                return Err(GraphError::EndpointOutOfRange {
                    index,
                    vertex,
                    vertex_count,
                });
            }
        }
        if weight < 0 {
            return Err(GraphError::NegativeWeight { index, weight });
        }
        if weight > Weight::MAX as i64 {
            return Err(GraphError::WeightTooLarge { index, weight });
        }
        degree[src as usize + 1] += 1;
    }
    for v in 0..vertex_count {
        degree[v + 1] += degree[v];
    }
    let row_offsets = degree;
    let mut cursor = row_offsets.clone();
    let mut targets = vec![0; edges.len()];
    let mut weights = vec![0; edges.len()];
    for &(src, dst, weight) in edges {
        let slot = &mut cursor[src as usize];
        targets[*slot] = dst as VertexId;
        weights[*slot] = weight as Weight;
        *slot += 1;
    }
    Ok(Graph {
        row_offsets,
        targets,
        weights,
    })
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn column_targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Out-edges of `v` as `(target, weight)` in storage order.
    pub fn neighbors(
        &self,
        v: VertexId,
    ) -> Result<impl ExactSizeIterator<Item = (VertexId, Weight)> + '_, GraphError> {
        if (v as usize) >= self.vertex_count() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v as u64,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(self.out_edges(v))
    }

    /// Unchecked variant of [`Graph::neighbors`] for hot loops; panics on a bad id.
    #[inline]
    pub fn out_edges(&self, v: VertexId) -> impl ExactSizeIterator<Item = (VertexId, Weight)> + '_ {
        let range = self.row_offsets[v as usize]..self.row_offsets[v as usize + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.row_offsets[v as usize + 1] - self.row_offsets[v as usize]
    }

    /// Iterates all edges as `(source, target, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Weight)> + '_ {
        (0..self.vertex_count() as VertexId)
            .flat_map(move |u| self.out_edges(u).map(move |(v, w)| (u, v, w)))
    }

    /// Reverses every edge. Row order of the result follows source order.
    pub fn transpose(&self) -> Graph {
        let n = self.vertex_count();
        let mut row_offsets = vec![0usize; n + 1];
        for &t in &self.targets {
            row_offsets[t as usize + 1] += 1;
        }
        for v in 0..n {
            row_offsets[v + 1] += row_offsets[v];
        }
        let mut cursor = row_offsets.clone();
        let mut targets = vec![0; self.edge_count()];
        let mut weights = vec![0; self.edge_count()];
        for (u, v, w) in self.edges() {
            let slot = &mut cursor[v as usize];
            targets[*slot] = u;
            weights[*slot] = w;
            *slot += 1;
        }
        Graph {
            row_offsets,
            targets,
            weights,
        }
    }

    /// Adds the reverse of every edge (self-loops are not doubled).
    pub fn symmetrized(&self) -> Graph {
        let mut edges: Vec<RawEdge> = Vec::with_capacity(self.edge_count() * 2);
        for (u, v, w) in self.edges() {
            edges.push((u as u64, v as u64, w as i64));
            if u != v {
                edges.push((v as u64, u as u64, w as i64));
            }
        }
        build_csr(&edges, self.vertex_count()).expect("symmetrizing a valid graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        build_csr(&[(0, 1, 2), (0, 2, 5), (1, 2, 1)], 3).unwrap()
    }

    #[test]
    fn empty_graph() {
        let g = build_csr(&[], 3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.row_offsets(), &[0, 0, 0, 0]);
    }

    #[test]
    fn triangle_offsets_and_neighbors() {
        let g = triangle();
        assert_eq!(g.row_offsets(), &[0, 2, 3, 3]);
        assert_eq!(g.neighbors(0).unwrap().collect::<Vec<_>>(), vec![(1, 2), (2, 5)]);
        assert_eq!(g.neighbors(2).unwrap().count(), 0);
    }

    #[test]
    fn self_loop_is_kept() {
        let g = build_csr(&[(0, 0, 4)], 1).unwrap();
        assert_eq!(g.neighbors(0).unwrap().collect::<Vec<_>>(), vec![(0, 4)]);
    }

    #[test]
    fn edges_grouped_by_source_in_input_order() {
        let g = build_csr(&[(1, 0, 9), (0, 1, 1), (1, 1, 3), (0, 1, 2)], 2).unwrap();
        assert_eq!(g.neighbors(0).unwrap().collect::<Vec<_>>(), vec![(1, 1), (1, 2)]);
        assert_eq!(g.neighbors(1).unwrap().collect::<Vec<_>>(), vec![(0, 9), (1, 3)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            build_csr(&[(0, 1, -1)], 2),
            Err(GraphError::NegativeWeight { index: 0, weight: -1 })
        );
        assert!(matches!(
            build_csr(&[(0, 2, 1)], 2),
            Err(GraphError::EndpointOutOfRange { vertex: 2, .. })
        ));
        assert!(matches!(
            triangle().neighbors(3),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn zero_weight_allowed() {
        let g = build_csr(&[(0, 1, 0)], 2).unwrap();
        assert_eq!(g.weights(), &[0]);
    }

    #[test]
    fn transpose_reverses_edges() {
        let t = triangle().transpose();
        assert_eq!(t.neighbors(2).unwrap().collect::<Vec<_>>(), vec![(0, 5), (1, 1)]);
        assert_eq!(t.neighbors(0).unwrap().count(), 0);
        assert_eq!(t.transpose(), triangle());
    }
}
