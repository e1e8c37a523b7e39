use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Barrier, Mutex};
use std::time::{Duration, Instant};

use crossbeam::utils::Backoff;

use super::counter::{detect_quiescence, ActiveWorkCounter};
use super::trace::{Trace, TraceRecord};
use super::{EngineConfig, EngineError, RunOutput, RunStats};
use crate::eagm::{Level, LevelQueue, QueueEntry};
use crate::graph::{Graph, PartitionMap};
use crate::model::{DistanceMap, OrderingSpec, Statement, WorkItem};

const NONE: u64 = u64::MAX;
const IDLE_SLEEP: Duration = Duration::from_micros(20);

/// A work item in flight with the bookkeeping the trace needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Task {
    item: WorkItem,
    origin: Option<u32>,
    parent_key: Option<u64>,
}

impl QueueEntry for Task {
    fn work_item(&self) -> &WorkItem {
        &self.item
    }
}

/// Queue layout for one hierarchy: one set of queues per pipeline level.
struct Layout {
    groups: usize,
    workers: usize,
    pipeline: Vec<Level>,
    queues: Vec<Vec<LevelQueue<Task>>>,
}

impl Layout {
    fn new(config: &EngineConfig) -> Self {
        let t = config.topology;
        let pipeline = config.hierarchy.pipeline();
        let queues = pipeline
            .iter()
            .map(|&level| {
                let n = match level {
                    Level::Global | Level::Process => t.partitions,
                    Level::Numa => t.partitions * t.groups_per_partition,
                    Level::Thread => t.total_workers(),
                };
                let order = config.hierarchy.annotation(level);
                (0..n).map(|_| LevelQueue::new(order)).collect()
            })
            .collect();
        Layout {
            groups: t.groups_per_partition,
            workers: t.workers_per_group,
            pipeline,
            queues,
        }
    }

    fn per_partition(&self) -> usize {
        self.groups * self.workers
    }

    /// Queue index at `level` serving worker `id`.
    fn worker_slot(&self, level: Level, id: usize) -> usize {
        match level {
            Level::Global | Level::Process => id / self.per_partition(),
            Level::Numa => id / self.workers,
            Level::Thread => id,
        }
    }

    /// Entry queue index for an item owned by partition `owner`.
    fn entry_slot(&self, owner: usize, v: u32) -> usize {
        let slot = v as usize % self.per_partition();
        match self.pipeline[0] {
            Level::Global | Level::Process => owner,
            Level::Numa => owner * self.groups + slot / self.workers,
            Level::Thread => owner * self.per_partition() + slot,
        }
    }

    fn entry_queues(&self) -> &[LevelQueue<Task>] {
        &self.queues[0]
    }

    fn all_queues(&self) -> impl Iterator<Item = &LevelQueue<Task>> {
        self.queues.iter().flatten()
    }
}

struct Shared<'a, S> {
    graph: &'a Graph,
    config: &'a EngineConfig,
    statement: &'a S,
    pmap: PartitionMap,
    dist: DistanceMap,
    layout: Layout,
    counter: ActiveWorkCounter,
    barrier: Barrier,
    min_slots: Vec<AtomicU64>,
    class_size: AtomicU64,
    class_processed: AtomicU64,
    failed: AtomicBool,
    error: Mutex<Option<EngineError>>,
    epochs: Mutex<(Vec<u64>, Vec<u64>)>,
    start: Instant,
}

impl<S> Shared<'_, S> {
    fn fail(&self, e: EngineError) {
        let mut slot = self.error.lock().expect("error slot poisoned");
        slot.get_or_insert(e);
        self.failed.store(true, Ordering::Release);
    }

    fn failed(&self) -> bool {
        self.failed.load(Ordering::Acquire)
    }

    fn now(&self) -> u64 {
        self.start.elapsed().as_nanos() as u64
    }
}

#[derive(Default)]
struct WorkerResult {
    stats: RunStats,
    trace: Vec<TraceRecord>,
}

struct Worker<'s, 'a, S> {
    id: usize,
    partition: u32,
    shared: &'s Shared<'a, S>,
    pending: BTreeMap<u64, Vec<Task>>,
    outbox: Vec<Vec<Task>>,
    children: Vec<WorkItem>,
    batch: Vec<Task>,
    drains: u64,
    out: WorkerResult,
}

impl<'s, 'a, S: Statement> Worker<'s, 'a, S> {
    fn new(id: usize, shared: &'s Shared<'a, S>) -> Self {
        Worker {
            id,
            partition: (id / shared.layout.per_partition()) as u32,
            shared,
            pending: BTreeMap::new(),
            outbox: (0..shared.layout.entry_queues().len()).map(|_| Vec::new()).collect(),
            children: Vec::new(),
            batch: Vec::new(),
            drains: 0,
            out: WorkerResult::default(),
        }
    }

    fn ordering(&self) -> OrderingSpec {
        self.shared.config.ordering
    }

    fn run(mut self) -> WorkerResult {
        let sh = self.shared;
        let leader = self.id == 0;
        let mut epoch = 0u64;
        loop {
            let local_min = self.pending.keys().next().copied().unwrap_or(NONE);
            sh.min_slots[self.id].store(local_min, Ordering::Release);
            sh.barrier.wait();

            let key = sh.min_slots.iter().map(|s| s.load(Ordering::Acquire)).min().unwrap_or(NONE);
            if key == NONE || sh.failed() {
                break;
            }
            self.open_class(key);
            sh.barrier.wait();

            if sh.class_size.load(Ordering::Acquire) > 0 {
                let processed = self.drain_class(key, epoch);
                sh.class_processed.fetch_add(processed, Ordering::AcqRel);
                epoch += 1;
            }
            sh.barrier.wait();

            if leader {
                let opened = sh.class_size.swap(0, Ordering::AcqRel);
                let processed = sh.class_processed.swap(0, Ordering::AcqRel);
                if opened > 0 {
                    let mut e = sh.epochs.lock().expect("epoch log poisoned");
                    e.0.push(key);
                    e.1.push(processed);
                }
                for q in sh.layout.all_queues() {
                    q.seal();
                }
                if !sh.failed() && !detect_quiescence(&sh.counter, sh.layout.all_queues()) {
                    sh.fail(EngineError::NotQuiescent);
                }
                for q in sh.layout.all_queues() {
                    q.reopen();
                }
            }
        }
        self.out
    }

    /// Moves this worker's share of class `key` into the owners' entry queues.
    fn open_class(&mut self, key: u64) {
        let Some(bucket) = self.pending.remove(&key) else {
            return;
        };
        let sh = self.shared;
        let mut routed = 0u64;
        for task in bucket {
            if sh.config.prune_stale_classes && !sh.statement.condition(&sh.dist, &task.item) {
                self.out.stats.items_pruned += 1;
                continue;
            }
            self.post(task);
            routed += 1;
        }
        self.flush();
        sh.class_size.fetch_add(routed, Ordering::AcqRel);
    }

    fn post(&mut self, task: Task) {
        let owner = super::route(&self.shared.pmap, &task.item);
        if task.origin.is_some_and(|o| o as usize != owner) {
            self.out.stats.messages_routed += 1;
        }
        let slot = self.shared.layout.entry_slot(owner, task.item.vertex);
        self.outbox[slot].push(task);
    }

    fn flush(&mut self) {
        let sh = self.shared;
        for (slot, buf) in self.outbox.iter_mut().enumerate() {
            if buf.is_empty() {
                continue;
            }
            sh.counter.add(buf.len());
            if let Err(e) = sh.layout.entry_queues()[slot].enqueue_batch(buf.drain(..)) {
                sh.fail(e.into());
            }
        }
    }

    /// Pulls the next batch into `self.batch`, refilling lower pipeline levels
    /// from the ones above when they run dry.
    fn next_batch(&mut self) -> bool {
        let layout = &self.shared.layout;
        let limit = self.shared.config.batch_limit;
        let bottom = layout.pipeline.len() - 1;
        let queue = |i: usize| &layout.queues[i][layout.worker_slot(layout.pipeline[i], self.id)];

        let mut level = bottom;
        while queue(level).is_empty() && level > 0 {
            level -= 1;
        }
        while level < bottom {
            let mut moved = Vec::new();
            queue(level).drain_into(Some(limit), &mut moved);
            if moved.is_empty() {
                break;
            }
            if let Err(e) = queue(level + 1).enqueue_batch(moved) {
                self.shared.fail(e.into());
            }
            level += 1;
        }

        self.batch.clear();
        let q = queue(bottom);
        if q.drain_into(Some(limit), &mut self.batch) == 0 {
            return false;
        }
        self.drains += 1;
        true
    }

    /// Processes class `key` until no current-class work is left anywhere.
    fn drain_class(&mut self, key: u64, epoch: u64) -> u64 {
        let sh = self.shared;
        let tracing = sh.config.record_trace;
        let bottom_order = *sh.layout.pipeline.last().expect("pipeline is never empty");
        let bottom_order = sh.config.hierarchy.annotation(bottom_order);
        let backoff = Backoff::new();
        let mut processed = 0u64;

        loop {
            if !self.next_batch() {
                if sh.counter.is_zero() {
                    break;
                }
                if backoff.is_completed() {
                    std::thread::sleep(IDLE_SLEEP);
                } else {
                    backoff.snooze();
                }
                continue;
            }
            backoff.reset();
            let batch = std::mem::take(&mut self.batch);
            for task in &batch {
                if sh.failed() {
                    break;
                }
                self.process(task, key, epoch, bottom_order, tracing);
                processed += 1;
            }
            self.flush();
            sh.counter.sub(batch.len());
            self.batch = batch;
        }
        processed
    }

    fn process(&mut self, task: &Task, key: u64, epoch: u64, local: OrderingSpec, tracing: bool) {
        let sh = self.shared;
        let t_start = if tracing { sh.now() } else { 0 };
        self.children.clear();
        let useful = sh.statement.apply(sh.graph, &sh.dist, &task.item, &mut self.children);
        let stats = &mut self.out.stats;
        stats.items_processed += 1;
        if useful {
            stats.relaxations_useful += 1;
        } else {
            stats.relaxations_stale += 1;
        }

        let children = std::mem::take(&mut self.children);
        for &child in &children {
            let child_key = match self.ordering().key(&child) {
                Ok(k) => k,
                Err(e) => {
                    sh.fail(e.into());
                    break;
                }
            };
            let next = Task {
                item: child,
                origin: Some(self.partition),
                parent_key: Some(key),
            };
            if child_key < key {
                sh.fail(EngineError::OrderingViolation {
                    current_key: key,
                    generated_key: child_key,
                    item: child,
                });
                break;
            } else if child_key == key {
                self.post(next);
            } else {
                self.pending.entry(child_key).or_default().push(next);
            }
        }
        self.children = children;

        if tracing {
            let local_key = match local {
                OrderingSpec::Chaotic => None,
                _ => local.key(&task.item).ok(),
            };
            self.out.trace.push(TraceRecord {
                item: task.item,
                class_key: key,
                parent_key: task.parent_key,
                epoch,
                worker: self.id as u32,
                partition: self.partition,
                origin_partition: task.origin,
                t_start,
                t_end: sh.now(),
                useful,
                drain: self.drains,
                local_key,
            });
        }
    }
}

pub(super) fn execute<S: Statement>(
    graph: &Graph,
    config: &EngineConfig,
    seed: WorkItem,
    statement: &S,
) -> Result<RunOutput, EngineError> {
    let start = Instant::now();
    let seed_key = config.ordering.key(&seed)?;
    let n_workers = config.topology.total_workers();
    let pmap = PartitionMap::new(graph.vertex_count(), config.topology.partitions)
        .map_err(|e| EngineError::Config(e.to_string()))?;
    let shared = Shared {
        graph,
        config,
        statement,
        pmap,
        dist: DistanceMap::new(graph.vertex_count()),
        layout: Layout::new(config),
        counter: ActiveWorkCounter::new(),
        barrier: Barrier::new(n_workers),
        min_slots: (0..n_workers).map(|_| AtomicU64::new(NONE)).collect(),
        class_size: AtomicU64::new(0),
        class_processed: AtomicU64::new(0),
        failed: AtomicBool::new(false),
        error: Mutex::new(None),
        epochs: Mutex::new((Vec::new(), Vec::new())),
        start,
    };

    let mut workers: Vec<Worker<'_, '_, S>> = (0..n_workers).map(|id| Worker::new(id, &shared)).collect();
    workers[0].pending.insert(
        seed_key,
        vec![Task {
            item: seed,
            origin: None,
            parent_key: None,
        }],
    );

    let results: Vec<WorkerResult> = if n_workers == 1 {
        workers.into_iter().map(Worker::run).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = workers.into_iter().map(|w| s.spawn(move || w.run())).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("engine worker panicked"))
                .collect()
        })
    };

    if let Some(e) = shared.error.lock().expect("error slot poisoned").take() {
        return Err(e);
    }

    let (epoch_keys, class_sizes) = std::mem::take(&mut *shared.epochs.lock().expect("epoch log poisoned"));
    let mut stats = RunStats {
        epochs: epoch_keys.len() as u64,
        epoch_keys,
        class_sizes,
        ..RunStats::default()
    };
    let mut records = Vec::new();
    for r in results {
        stats.items_processed += r.stats.items_processed;
        stats.relaxations_useful += r.stats.relaxations_useful;
        stats.relaxations_stale += r.stats.relaxations_stale;
        stats.items_pruned += r.stats.items_pruned;
        stats.messages_routed += r.stats.messages_routed;
        records.extend(r.trace);
    }
    stats.wall_time_s = start.elapsed().as_secs_f64();

    let trace = config.record_trace.then(|| {
        records.sort_by_key(|r| (r.t_start, r.worker));
        Trace { records }
    });
    Ok(RunOutput {
        distances: shared.dist.snapshot(),
        stats,
        trace,
    })
}
