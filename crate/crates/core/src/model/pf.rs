//! Processing functions. Each is a single statement: a condition on the
//! input item, a state update that reports success, and a constructor for
//! the output items. The constructor only runs when both of the others
//! return true.

use super::{DistanceMap, ModelError, WorkItem};
use crate::graph::Graph;

pub trait Statement: Sync {
    /// Cheap pre-filter; may read stale state.
    fn condition(&self, dist: &DistanceMap, w: &WorkItem) -> bool;

    /// Authoritative update. Must be a single atomic step on `w.vertex`'s state.
    fn state_update(&self, dist: &DistanceMap, w: &WorkItem) -> bool;

    /// Appends the generated items to `out`.
    fn construct(&self, graph: &Graph, w: &WorkItem, out: &mut Vec<WorkItem>);

    /// Runs the statement; returns whether the state changed.
    #[inline]
    fn apply(&self, graph: &Graph, dist: &DistanceMap, w: &WorkItem, out: &mut Vec<WorkItem>) -> bool {
        if self.condition(dist, w) && self.state_update(dist, w) {
            self.construct(graph, w, out);
            true
        } else {
            false
        }
    }
}

/// Relaxation over `⟨vertex, distance⟩` items.
#[derive(Debug, Clone, Copy, Default)]
pub struct SsspRelax;

/// Relaxation over `⟨vertex, distance, level⟩` items; children are one level deeper.
#[derive(Debug, Clone, Copy, Default)]
pub struct KlaRelax;

impl Statement for SsspRelax {
    #[inline]
    fn condition(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
        w.distance < dist.get(w.vertex)
    }

    #[inline]
    fn state_update(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
        dist.atomic_min_update(w.vertex, w.distance)
    }

    #[inline]
    fn construct(&self, graph: &Graph, w: &WorkItem, out: &mut Vec<WorkItem>) {
        out.extend(
            graph
                .out_edges(w.vertex)
                .map(|(u, weight)| WorkItem::new(u, w.distance.saturating_add(weight.into()))),
        );
    }
}

impl Statement for KlaRelax {
    #[inline]
    fn condition(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
        w.distance < dist.get(w.vertex)
    }

    #[inline]
    fn state_update(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
        dist.atomic_min_update(w.vertex, w.distance)
    }

    #[inline]
    fn construct(&self, graph: &Graph, w: &WorkItem, out: &mut Vec<WorkItem>) {
        let level = w.level.unwrap_or(0) + 1;
        out.extend(graph.out_edges(w.vertex).map(|(u, weight)| {
            WorkItem::with_level(u, w.distance.saturating_add(weight.into()), level)
        }));
    }
}

fn check_vertex(graph: &Graph, w: &WorkItem) -> Result<(), ModelError> {
    if (w.vertex as usize) < graph.vertex_count() {
        Ok(())
    } else {
        Err(ModelError::VertexOutOfRange {
            vertex: w.vertex,
            vertex_count: graph.vertex_count(),
        })
    }
}

/// Applies the SSSP relaxation to `w` and returns the generated items.
pub fn pf_sssp(graph: &Graph, dist: &DistanceMap, w: &WorkItem) -> Result<Vec<WorkItem>, ModelError> {
    check_vertex(graph, w)?;
    let mut out = Vec::new();
    SsspRelax.apply(graph, dist, w, &mut out);
    Ok(out)
}

/// Applies the KLA relaxation to `w` (which must carry a level).
pub fn pf_kla(graph: &Graph, dist: &DistanceMap, w: &WorkItem) -> Result<Vec<WorkItem>, ModelError> {
    check_vertex(graph, w)?;
    if w.level.is_none() {
        return Err(ModelError::MissingLevel(*w));
    }
    let mut out = Vec::new();
    KlaRelax.apply(graph, dist, w, &mut out);
    Ok(out)
}
