//! AGM execution: classes are drained one at a time in increasing key order,
//! in parallel inside a class, with a global barrier between classes and
//! owner-computes routing across simulated partitions.

mod counter;
mod machine;
mod trace;

pub use counter::{detect_quiescence, ActiveWorkCounter};
pub use trace::{Trace, TraceRecord};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eagm::{Preset, QueueError, SpatialHierarchy, DEFAULT_BATCH_LIMIT};
use crate::graph::{Graph, PartitionMap};
use crate::model::{DistanceMap, KlaRelax, ModelError, OrderingSpec, SsspRelax, Statement, WorkItem};
use crate::{Distance, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("source {vertex} out of range for {vertex_count} vertices")]
    InvalidSource { vertex: VertexId, vertex_count: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("item {item:?} generated for class {generated_key} while draining class {current_key}")]
    OrderingViolation {
        current_key: u64,
        generated_key: u64,
        item: WorkItem,
    },
    #[error("queue protocol violation: {0}")]
    Queue(#[from] QueueError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("epoch ended without quiescence")]
    NotQuiescent,
}

/// Simulated machine shape: partitions (processes) of groups (NUMA domains)
/// of workers (threads).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorkerTopology {
    pub partitions: usize,
    pub groups_per_partition: usize,
    pub workers_per_group: usize,
}

impl WorkerTopology {
    pub fn new(partitions: usize, groups: usize, workers: usize) -> Result<Self, EngineError> {
        if partitions == 0 || groups == 0 || workers == 0 {
            return Err(EngineError::Config(format!(
                "topology {partitions}x{groups}x{workers} has an empty level"
            )));
        }
        Ok(WorkerTopology {
            partitions,
            groups_per_partition: groups,
            workers_per_group: workers,
        })
    }

    /// One worker: fully serialized, deterministic execution.
    pub const fn serial() -> Self {
        WorkerTopology {
            partitions: 1,
            groups_per_partition: 1,
            workers_per_group: 1,
        }
    }

    pub fn workers_per_partition(&self) -> usize {
        self.groups_per_partition * self.workers_per_group
    }

    pub fn total_workers(&self) -> usize {
        self.partitions * self.workers_per_partition()
    }
}

impl fmt::Display for WorkerTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{}",
            self.partitions, self.groups_per_partition, self.workers_per_group
        )
    }
}

/// Parses `PxGxW`, e.g. `2x2x2`.
impl FromStr for WorkerTopology {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(['x', 'X', '×'])
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| EngineError::Config(format!("cannot parse topology {s:?}")))?;
        match parts[..] {
            [p, g, w] => WorkerTopology::new(p, g, w),
            _ => Err(EngineError::Config(format!("topology {s:?} needs three counts"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub ordering: OrderingSpec,
    pub topology: WorkerTopology,
    /// Root must equal `ordering`.
    pub hierarchy: SpatialHierarchy,
    /// Upper bound on items handed out per drain call.
    pub batch_limit: usize,
    /// Drop items that are already stale when their class opens; classes
    /// left empty are skipped and not counted as epochs.
    pub prune_stale_classes: bool,
    pub record_trace: bool,
}

impl EngineConfig {
    /// Plain AGM (`buffer` hierarchy) on one worker.
    pub fn new(ordering: OrderingSpec) -> Self {
        EngineConfig {
            ordering,
            topology: WorkerTopology::serial(),
            hierarchy: SpatialHierarchy::flat(ordering),
            batch_limit: DEFAULT_BATCH_LIMIT,
            prune_stale_classes: true,
            record_trace: false,
        }
    }

    pub fn with_topology(mut self, topology: WorkerTopology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.hierarchy = preset.hierarchy(self.ordering);
        self
    }

    pub fn with_hierarchy(mut self, hierarchy: SpatialHierarchy) -> Self {
        self.hierarchy = hierarchy;
        self
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    pub fn with_batch_limit(mut self, limit: usize) -> Self {
        self.batch_limit = limit;
        self
    }

    pub fn with_pruning(mut self, on: bool) -> Self {
        self.prune_stale_classes = on;
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        self.ordering.validated()?;
        WorkerTopology::new(
            self.topology.partitions,
            self.topology.groups_per_partition,
            self.topology.workers_per_group,
        )?;
        if self.hierarchy.root() != self.ordering {
            return Err(EngineError::Config(format!(
                "hierarchy root {} differs from ordering {}",
                self.hierarchy.root(),
                self.ordering
            )));
        }
        if self.batch_limit == 0 {
            return Err(EngineError::Config("batch limit must be positive".into()));
        }
        Ok(())
    }
}

/// Work counts and timing of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Root classes that held at least one item when opened.
    pub epochs: u64,
    /// Key of each drained class, in drain order.
    pub epoch_keys: Vec<u64>,
    /// Items processed in each drained class.
    pub class_sizes: Vec<u64>,
    pub items_processed: u64,
    pub relaxations_useful: u64,
    pub relaxations_stale: u64,
    /// Items dropped as stale when their class opened.
    pub items_pruned: u64,
    /// Items delivered to a partition other than the one that generated them.
    pub messages_routed: u64,
    pub wall_time_s: f64,
}

impl RunStats {
    pub fn total_relaxations(&self) -> u64 {
        self.relaxations_useful + self.relaxations_stale
    }

    /// Equality on everything except wall time.
    pub fn same_work(&self, other: &RunStats) -> bool {
        RunStats {
            wall_time_s: 0.0,
            ..self.clone()
        } == RunStats {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Final distances; unreachable vertices hold [`crate::INFINITY`].
    pub distances: Vec<Distance>,
    pub stats: RunStats,
    pub trace: Option<Trace>,
}

/// Owner partition of a work item.
#[inline]
pub fn route(pmap: &PartitionMap, w: &WorkItem) -> usize {
    pmap.owner(w.vertex)
}

/// Conditional minimum on one vertex; see [`DistanceMap::atomic_min_update`].
pub fn atomic_min_update(dist: &DistanceMap, v: VertexId, d: Distance) -> bool {
    dist.atomic_min_update(v, d)
}

/// Runs the machine defined by `config` from `source`, using the relaxation
/// that matches the ordering (levelled items for KLA).
pub fn run(graph: &Graph, config: &EngineConfig, source: VertexId) -> Result<RunOutput, EngineError> {
    match config.ordering {
        OrderingSpec::Kla { .. } => run_with(graph, config, WorkItem::with_level(source, 0, 0), &KlaRelax),
        _ => run_with(graph, config, WorkItem::new(source, 0), &SsspRelax),
    }
}

/// Runs an arbitrary processing function from a single initial item.
pub fn run_with<S: Statement>(
    graph: &Graph,
    config: &EngineConfig,
    seed: WorkItem,
    statement: &S,
) -> Result<RunOutput, EngineError> {
    config.validate()?;
    if seed.vertex as usize >= graph.vertex_count() {
        return Err(EngineError::InvalidSource {
            vertex: seed.vertex,
            vertex_count: graph.vertex_count(),
        });
    }
    machine::execute(graph, config, seed, statement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_csr;
    use crate::INFINITY;

    fn sab() -> Graph {
        build_csr(&[(0, 1, 2), (0, 2, 5), (1, 2, 1)], 3).unwrap()
    }

    fn all_orderings() -> Vec<OrderingSpec> {
        vec![
            OrderingSpec::Chaotic,
            OrderingSpec::Dijkstra,
            OrderingSpec::Delta { delta: 1 },
            OrderingSpec::Delta { delta: 3 },
            OrderingSpec::Kla { k: 1 },
            OrderingSpec::Kla { k: 2 },
        ]
    }

    #[test]
    fn triangle_under_every_configuration() {
        let topologies = ["1x1x1", "2x2x2", "4x1x4", "3x1x1"];
        for order in all_orderings() {
            for preset in Preset::ALL {
                for topo in topologies {
                    let cfg = EngineConfig::new(order)
                        .with_preset(preset)
                        .with_topology(topo.parse().unwrap());
                    let out = run(&sab(), &cfg, 0).unwrap();
                    assert_eq!(out.distances, vec![0, 2, 3], "{order} {preset} {topo}");
                }
            }
        }
    }

    #[test]
    fn single_vertex() {
        let g = build_csr(&[], 1).unwrap();
        let out = run(&g, &EngineConfig::new(OrderingSpec::Dijkstra), 0).unwrap();
        assert_eq!(out.distances, vec![0]);
        assert_eq!(out.stats.epochs, 1);
        assert_eq!(out.stats.items_processed, 1);
    }

    #[test]
    fn chaotic_is_one_epoch() {
        let out = run(&sab(), &EngineConfig::new(OrderingSpec::Chaotic), 0).unwrap();
        assert_eq!(out.stats.epochs, 1);
        assert_eq!(out.stats.epoch_keys, vec![0]);
    }

    #[test]
    fn dijkstra_triangle_epochs_without_pruning() {
        // (s,0) -> (a,2),(b,5); (a,2) -> (b,3); (b,3); then (b,5) is stale.
        let cfg = EngineConfig::new(OrderingSpec::Dijkstra).with_pruning(false);
        let out = run(&sab(), &cfg, 0).unwrap();
        assert_eq!(out.stats.epochs, 4);
        assert_eq!(out.stats.epoch_keys, vec![0, 2, 3, 5]);
        assert_eq!(out.stats.items_processed, 4);
        assert_eq!(out.stats.relaxations_stale, 1);
        assert_eq!(out.stats.items_pruned, 0);
    }

    #[test]
    fn dijkstra_triangle_epochs_with_pruning() {
        let out = run(&sab(), &EngineConfig::new(OrderingSpec::Dijkstra), 0).unwrap();
        assert_eq!(out.stats.epoch_keys, vec![0, 2, 3]);
        assert_eq!(out.stats.items_pruned, 1);
        assert_eq!(out.stats.relaxations_stale, 0);
    }

    #[test]
    fn unreachable_keeps_sentinel() {
        let g = build_csr(&[(1, 0, 1)], 3).unwrap();
        let out = run(&g, &EngineConfig::new(OrderingSpec::Delta { delta: 2 }), 0).unwrap();
        assert_eq!(out.distances, vec![0, INFINITY, INFINITY]);
    }

    #[test]
    fn zero_weight_cycle_terminates() {
        let g = build_csr(&[(0, 1, 0), (1, 2, 0), (2, 0, 0), (2, 3, 4)], 4).unwrap();
        for order in all_orderings() {
            for topo in ["1x1x1", "2x1x2"] {
                let cfg = EngineConfig::new(order).with_topology(topo.parse().unwrap());
                let out = run(&g, &cfg, 1).unwrap();
                assert_eq!(out.distances, vec![0, 0, 0, 4], "{order}");
            }
        }
    }

    #[test]
    fn messages_stay_zero_on_one_partition() {
        let g = crate::graph::generate_rmat(&crate::RmatParams::rmat1(6, 8, 1)).unwrap();
        let cfg = EngineConfig::new(OrderingSpec::Chaotic).with_topology("1x2x2".parse().unwrap());
        assert_eq!(run(&g, &cfg, 0).unwrap().stats.messages_routed, 0);
    }

    #[test]
    fn route_to_owner() {
        let pm = PartitionMap::new(10, 2).unwrap();
        assert_eq!(route(&pm, &WorkItem::new(7, 0)), 1);
        let pm = PartitionMap::new(10, 1).unwrap();
        assert!((0..10).all(|v| route(&pm, &WorkItem::new(v, 3)) == 0));
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = EngineConfig::new(OrderingSpec::Dijkstra);
        assert!(matches!(run(&sab(), &cfg, 3), Err(EngineError::InvalidSource { .. })));
        let mismatched = cfg.with_hierarchy(SpatialHierarchy::flat(OrderingSpec::Chaotic));
        assert!(matches!(run(&sab(), &mismatched, 0), Err(EngineError::Config(_))));
        assert!(run(&sab(), &cfg.with_batch_limit(0), 0).is_err());
        assert!("2x0x1".parse::<WorkerTopology>().is_err());
        assert!("2x2".parse::<WorkerTopology>().is_err());
        assert_eq!("4x1x4".parse::<WorkerTopology>().unwrap().total_workers(), 16);
    }

    /// Generates children with a smaller distance than the parent.
    struct Shrinking;

    impl Statement for Shrinking {
        fn condition(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
            w.distance < dist.get(w.vertex)
        }
        fn state_update(&self, dist: &DistanceMap, w: &WorkItem) -> bool {
            dist.atomic_min_update(w.vertex, w.distance)
        }
        fn construct(&self, graph: &Graph, w: &WorkItem, out: &mut Vec<WorkItem>) {
            out.extend(graph.out_edges(w.vertex).map(|(u, _)| WorkItem::new(u, w.distance.saturating_sub(10))));
        }
    }

    #[test]
    fn smaller_generated_class_is_fatal() {
        for topo in ["1x1x1", "2x1x2"] {
            let cfg = EngineConfig::new(OrderingSpec::Dijkstra).with_topology(topo.parse().unwrap());
            let err = run_with(&sab(), &cfg, WorkItem::new(0, 20), &Shrinking).unwrap_err();
            assert!(
                matches!(err, EngineError::OrderingViolation { current_key: 20, generated_key: 10, .. }),
                "{err}"
            );
        }
    }
}
