//! Independent reference solvers and post-hoc validators.
//!
//! Nothing here shares code with the engine beyond the graph and trace
//! types, so agreement between the two is meaningful.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Trace, TraceRecord};
use crate::graph::{Graph, PartitionMap};
use crate::model::OrderingSpec;
use crate::{Distance, VertexId, INFINITY};

/// How many mismatches a distance report keeps.
pub const REPORTED_MISMATCHES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("source {vertex} out of range for {vertex_count} vertices")]
    SourceOutOfRange { vertex: VertexId, vertex_count: usize },
    #[error("distance maps differ in size: {result} vs {oracle}")]
    SizeMismatch { result: usize, oracle: usize },
}

fn check_source(graph: &Graph, source: VertexId) -> Result<(), VerifyError> {
    if source as usize >= graph.vertex_count() {
        return Err(VerifyError::SourceOutOfRange {
            vertex: source,
            vertex_count: graph.vertex_count(),
        });
    }
    Ok(())
}

/// Sequential binary-heap Dijkstra.
pub fn dijkstra_reference(graph: &Graph, source: VertexId) -> Result<Vec<Distance>, VerifyError> {
    check_source(graph, source)?;
    let mut dist = vec![INFINITY; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0;
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for (v, w) in graph.out_edges(u) {
            let nd = d + Distance::from(w);
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Ok(dist)
}

/// Round-based full edge relaxation, at most `V - 1` rounds.
pub fn bellman_ford_reference(graph: &Graph, source: VertexId) -> Result<Vec<Distance>, VerifyError> {
    check_source(graph, source)?;
    let n = graph.vertex_count();
    let mut dist = vec![INFINITY; n];
    dist[source as usize] = 0;
    for _ in 1..n.max(2) {
        let mut changed = false;
        for (u, v, w) in graph.edges() {
            let du = dist[u as usize];
            if du == INFINITY {
                continue;
            }
            let nd = du + Distance::from(w);
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub vertex: VertexId,
    pub expected: Distance,
    pub actual: Distance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub vertex_count: usize,
    pub mismatch_count: usize,
    /// The first [`REPORTED_MISMATCHES`] mismatches by vertex id.
    pub mismatches: Vec<Mismatch>,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

fn fmt_distance(d: Distance) -> String {
    if d == INFINITY {
        "inf".to_string()
    } else {
        d.to_string()
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "distances: pass ({} vertices)", self.vertex_count);
        }
        write!(f, "distances: FAIL, {} of {} vertices differ", self.mismatch_count, self.vertex_count)?;
        for m in &self.mismatches {
            write!(
                f,
                "\n  vertex {}: expected {}, got {}",
                m.vertex,
                fmt_distance(m.expected),
                fmt_distance(m.actual)
            )?;
        }
        Ok(())
    }
}

/// Exact per-vertex comparison.
pub fn verify_distances(result: &[Distance], oracle: &[Distance]) -> Result<DistanceReport, VerifyError> {
    if result.len() != oracle.len() {
        return Err(VerifyError::SizeMismatch {
            result: result.len(),
            oracle: oracle.len(),
        });
    }
    let mut report = DistanceReport {
        vertex_count: result.len(),
        mismatch_count: 0,
        mismatches: Vec::new(),
    };
    for (v, (&actual, &expected)) in result.iter().zip(oracle).enumerate() {
        if actual != expected {
            report.mismatch_count += 1;
            if report.mismatches.len() < REPORTED_MISMATCHES {
                report.mismatches.push(Mismatch {
                    vertex: v as VertexId,
                    expected,
                    actual,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointViolation {
    pub vertex: VertexId,
    pub actual: Distance,
    /// Minimum over in-edges, or 0 for the source.
    pub expected: Distance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub vertex_count: usize,
    pub violations: Vec<FixedPointViolation>,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FixedPointReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "fixed point: pass ({} vertices)", self.vertex_count);
        }
        write!(f, "fixed point: FAIL, {} vertices not legitimate", self.violations.len())?;
        for v in self.violations.iter().take(REPORTED_MISMATCHES) {
            write!(
                f,
                "\n  vertex {}: holds {}, in-edge minimum {}",
                v.vertex,
                fmt_distance(v.actual),
                fmt_distance(v.expected)
            )?;
        }
        Ok(())
    }
}

/// Checks the legitimate state directly: `d(source) = 0` and every other
/// vertex holds the minimum of `d(u) + w(u, v)` over its in-edges
/// (infinity when there is none).
pub fn verify_fixed_point(
    graph: &Graph,
    dist: &[Distance],
    source: VertexId,
) -> Result<FixedPointReport, VerifyError> {
    check_source(graph, source)?;
    if dist.len() != graph.vertex_count() {
        return Err(VerifyError::SizeMismatch {
            result: dist.len(),
            oracle: graph.vertex_count(),
        });
    }
    let reverse = graph.transpose();
    let mut violations = Vec::new();
    for v in 0..graph.vertex_count() as VertexId {
        let expected = if v == source {
            0
        } else {
            reverse
                .out_edges(v)
                .filter(|&(u, _)| dist[u as usize] != INFINITY)
                .map(|(u, w)| dist[u as usize] + Distance::from(w))
                .min()
                .unwrap_or(INFINITY)
        };
        if dist[v as usize] != expected {
            violations.push(FixedPointViolation {
                vertex: v,
                actual: dist[v as usize],
                expected,
            });
        }
    }
    Ok(FixedPointReport {
        vertex_count: graph.vertex_count(),
        violations,
    })
}

/// Longest hop count over all shortest paths from the source, i.e. the
/// longest path in the shortest-path DAG. `None` when a zero-weight edge is
/// tight, since the shortest-path subgraph may then contain cycles.
pub fn max_shortest_path_hops(graph: &Graph, dist: &[Distance]) -> Option<u32> {
    let mut order: Vec<VertexId> = (0..graph.vertex_count() as VertexId)
        .filter(|&v| dist[v as usize] != INFINITY)
        .collect();
    order.sort_by_key(|&v| dist[v as usize]);
    let mut hops = vec![0u32; graph.vertex_count()];
    let mut longest = 0;
    for &u in &order {
        let du = dist[u as usize];
        for (v, w) in graph.out_edges(u) {
            if du + Distance::from(w) == dist[v as usize] {
                if w == 0 {
                    return None;
                }
                let h = hops[u as usize] + 1;
                if h > hops[v as usize] {
                    hops[v as usize] = h;
                    longest = longest.max(h);
                }
            }
        }
    }
    Some(longest)
}

/// Largest finite entry (0 when only the source is reached).
pub fn max_finite_distance(dist: &[Distance]) -> Distance {
    dist.iter().copied().filter(|&d| d != INFINITY).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceViolation {
    /// A record's class key is not the key of its item under the ordering.
    WrongClassKey { record: usize, expected: u64, recorded: u64 },
    /// Records of one epoch carry different class keys.
    MixedEpoch { epoch: u64, first_key: u64, other_key: u64 },
    /// A later epoch drained a class that does not come after the previous one.
    ClassRegression { epoch: u64, key: u64, previous_key: u64 },
    /// A record started before every record of the previous epoch had finished.
    BarrierOverlap { record: usize, epoch: u64, t_start: u64, previous_end: u64 },
    /// An item was processed away from its owner partition.
    NotOwner { record: usize, partition: u32, owner: u32 },
    /// An item was generated while draining a later class than its own.
    GeneratedIntoEarlierClass { record: usize, parent_key: u64, class_key: u64 },
    /// A worker started a record before finishing its previous one.
    WorkerClock { record: usize, worker: u32 },
    /// Items handed out by one ordered drain were processed out of key order.
    LocalOrder { record: usize, worker: u32, drain: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub records: usize,
    pub epochs: usize,
    pub violations: Vec<TraceViolation>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for TraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(
            f,
            "trace: {verdict} ({} records, {} epochs, {} violations)",
            self.records,
            self.epochs,
            self.violations.len()
        )?;
        for v in self.violations.iter().take(REPORTED_MISMATCHES) {
            write!(f, "\n  {v:?}")?;
        }
        Ok(())
    }
}

fn by_epoch(trace: &Trace) -> BTreeMap<u64, Vec<(usize, &TraceRecord)>> {
    let mut epochs: BTreeMap<u64, Vec<(usize, &TraceRecord)>> = BTreeMap::new();
    for (i, r) in trace.records.iter().enumerate() {
        epochs.entry(r.epoch).or_default().push((i, r));
    }
    epochs
}

/// Post-hoc check of a completed run: barrier ordering between classes,
/// owner-computes placement, legality of every generated item's class and
/// per-worker clock monotonicity.
pub fn verify_trace(trace: &Trace, order: OrderingSpec, pmap: &PartitionMap) -> TraceReport {
    let mut violations = Vec::new();

    for (i, r) in trace.records.iter().enumerate() {
        match order.key(&r.item) {
            Ok(k) if k == r.class_key => {}
            Ok(k) => violations.push(TraceViolation::WrongClassKey {
                record: i,
                expected: k,
                recorded: r.class_key,
            }),
            Err(_) => violations.push(TraceViolation::WrongClassKey {
                record: i,
                expected: u64::MAX,
                recorded: r.class_key,
            }),
        }
        let owner = pmap.owner(r.item.vertex) as u32;
        if r.partition != owner {
            violations.push(TraceViolation::NotOwner {
                record: i,
                partition: r.partition,
                owner,
            });
        }
        if let Some(p) = r.parent_key {
            if p > r.class_key {
                violations.push(TraceViolation::GeneratedIntoEarlierClass {
                    record: i,
                    parent_key: p,
                    class_key: r.class_key,
                });
            }
        }
    }

    let epochs = by_epoch(trace);
    let mut previous: Option<(u64, u64)> = None;
    for (&epoch, recs) in &epochs {
        let key = recs[0].1.class_key;
        if let Some(&(_, other)) = recs.iter().find(|(_, r)| r.class_key != key) {
            violations.push(TraceViolation::MixedEpoch {
                epoch,
                first_key: key,
                other_key: other.class_key,
            });
        }
        if let Some((previous_key, previous_end)) = previous {
            if key <= previous_key {
                violations.push(TraceViolation::ClassRegression { epoch, key, previous_key });
            }
            for &(i, r) in recs {
                if r.t_start < previous_end {
                    violations.push(TraceViolation::BarrierOverlap {
                        record: i,
                        epoch,
                        t_start: r.t_start,
                        previous_end,
                    });
                }
            }
        }
        let end = recs.iter().map(|(_, r)| r.t_end).max().unwrap_or(0);
        previous = Some((key, end));
    }

    let mut last_end: BTreeMap<u32, u64> = BTreeMap::new();
    let mut by_worker: Vec<(usize, &TraceRecord)> = trace.records.iter().enumerate().collect();
    by_worker.sort_by_key(|(i, r)| (r.worker, r.t_start, *i));
    for (i, r) in by_worker {
        if r.t_end < r.t_start || last_end.get(&r.worker).is_some_and(|&e| r.t_start < e) {
            violations.push(TraceViolation::WorkerClock { record: i, worker: r.worker });
        }
        last_end.insert(r.worker, r.t_end);
    }

    TraceReport {
        records: trace.len(),
        epochs: epochs.len(),
        violations,
    }
}

/// Checks that every batch drained from an ordered level queue was processed
/// in non-decreasing key order under that level's annotation.
pub fn verify_local_order(trace: &Trace) -> TraceReport {
    let mut groups: BTreeMap<(u32, u64), Vec<(usize, &TraceRecord)>> = BTreeMap::new();
    for (i, r) in trace.records.iter().enumerate() {
        if r.local_key.is_some() {
            groups.entry((r.worker, r.drain)).or_default().push((i, r));
        }
    }
    let mut violations = Vec::new();
    for ((worker, drain), mut recs) in groups {
        recs.sort_by_key(|(i, r)| (r.t_start, *i));
        for pair in recs.windows(2) {
            if pair[1].1.local_key < pair[0].1.local_key {
                violations.push(TraceViolation::LocalOrder {
                    record: pair[1].0,
                    worker,
                    drain,
                });
            }
        }
    }
    TraceReport {
        records: trace.len(),
        epochs: by_epoch(trace).len(),
        violations,
    }
}
