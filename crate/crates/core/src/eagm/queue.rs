use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::sync::{Mutex, MutexGuard};

use thiserror::Error;

use crate::model::{ModelError, OrderingSpec, WorkItem};

/// Items handed out per drain call unless configured otherwise.
pub const DEFAULT_BATCH_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueueError {
    #[error("enqueue of {0:?} into a sealed queue")]
    Sealed(WorkItem),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Anything that can sit in a level queue: a work item, possibly with
/// bookkeeping attached.
pub trait QueueEntry: Copy + Ord + std::fmt::Debug {
    fn work_item(&self) -> &WorkItem;
}

impl QueueEntry for WorkItem {
    fn work_item(&self) -> &WorkItem {
        self
    }
}

#[derive(Debug)]
enum Store<T> {
    Fifo(VecDeque<T>),
    Heap(BinaryHeap<Reverse<(u64, T)>>),
}

#[derive(Debug)]
struct Inner<T> {
    store: Store<T>,
    sealed: bool,
}

/// Shared buffer of one hierarchy node.
///
/// A chaotic annotation gives a FIFO batch buffer; any other annotation
/// gives a priority buffer keyed by that ordering's class key (the distance,
/// for a Dijkstra annotation). Enqueue and drain are linearizable and
/// concurrent drainers receive disjoint items.
#[derive(Debug)]
pub struct LevelQueue<T = WorkItem> {
    ordering: OrderingSpec,
    inner: Mutex<Inner<T>>,
}

impl<T: QueueEntry> LevelQueue<T> {
    pub fn new(ordering: OrderingSpec) -> Self {
        let store = match ordering {
            OrderingSpec::Chaotic => Store::Fifo(VecDeque::new()),
            _ => Store::Heap(BinaryHeap::new()),
        };
        LevelQueue {
            ordering,
            inner: Mutex::new(Inner { store, sealed: false }),
        }
    }

    pub fn ordering(&self) -> OrderingSpec {
        self.ordering
    }

    pub fn is_ordered(&self) -> bool {
        self.ordering != OrderingSpec::Chaotic
    }

    fn lock(&self) -> MutexGuard<'_, Inner<T>> {
        self.inner.lock().expect("level queue lock poisoned")
    }

    pub fn enqueue(&self, w: T) -> Result<(), QueueError> {
        self.enqueue_batch(std::iter::once(w))
    }

    /// Enqueues every item under one lock acquisition.
    pub fn enqueue_batch<I>(&self, items: I) -> Result<(), QueueError>
    where
        I: IntoIterator<Item = T>,
    {
        let mut inner = self.lock();
        let sealed = inner.sealed;
        match &mut inner.store {
            Store::Fifo(q) => {
                for w in items {
                    if sealed {
                        return Err(QueueError::Sealed(*w.work_item()));
                    }
                    q.push_back(w);
                }
            }
            Store::Heap(h) => {
                for w in items {
                    if sealed {
                        return Err(QueueError::Sealed(*w.work_item()));
                    }
                    h.push(Reverse((self.ordering.key(w.work_item())?, w)));
                }
            }
        }
        Ok(())
    }

    /// Removes up to `limit` items (all of them for `None`). For an ordered
    /// queue these are the minimal items present, in non-decreasing key order.
    pub fn drain_ordered(&self, limit: Option<usize>) -> Vec<T> {
        let mut out = Vec::new();
        self.drain_into(limit, &mut out);
        out
    }

    /// Like [`LevelQueue::drain_ordered`] but appends to `out`; returns the count.
    pub fn drain_into(&self, limit: Option<usize>, out: &mut Vec<T>) -> usize {
        let mut inner = self.lock();
        let before = out.len();
        match &mut inner.store {
            Store::Fifo(q) => {
                let n = limit.unwrap_or(usize::MAX).min(q.len());
                out.extend(q.drain(..n));
            }
            Store::Heap(h) => {
                let n = limit.unwrap_or(usize::MAX).min(h.len());
                out.extend((0..n).map(|_| h.pop().expect("len checked").0 .1));
            }
        }
        out.len() - before
    }

    pub fn len(&self) -> usize {
        match &self.lock().store {
            Store::Fifo(q) => q.len(),
            Store::Heap(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Closes the queue after the last drain of an epoch; later enqueues fail.
    pub fn seal(&self) {
        self.lock().sealed = true;
    }

    pub fn reopen(&self) {
        self.lock().sealed = false;
    }

    pub fn is_sealed(&self) -> bool {
        self.lock().sealed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn item(v: u32, d: u64) -> WorkItem {
        WorkItem::new(v, d)
    }

    #[test]
    fn singleton_round_trip() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Chaotic);
        q.enqueue(item(3, 1)).unwrap();
        assert_eq!(q.drain_ordered(None), vec![item(3, 1)]);
        assert!(q.is_empty());
    }

    #[test]
    fn priority_order() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Dijkstra);
        for d in [5, 2, 9] {
            q.enqueue(item(d as u32, d)).unwrap();
        }
        let ds: Vec<u64> = q.drain_ordered(None).iter().map(|w| w.distance).collect();
        assert_eq!(ds, vec![2, 5, 9]);
    }

    #[test]
    fn limited_drain_takes_minimum() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Dijkstra);
        q.enqueue_batch([item(0, 4), item(1, 1), item(2, 7)]).unwrap();
        assert_eq!(q.drain_ordered(Some(2)), vec![item(1, 1), item(0, 4)]);
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn chaotic_limited_drain_gives_distinct_items() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Chaotic);
        q.enqueue_batch([item(0, 1), item(1, 1), item(2, 1)]).unwrap();
        let got = q.drain_ordered(Some(2));
        assert_eq!(got.len(), 2);
        assert_ne!(got[0], got[1]);
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn sealed_queue_rejects_enqueue() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Dijkstra);
        q.seal();
        assert_eq!(q.enqueue(item(0, 0)), Err(QueueError::Sealed(item(0, 0))));
        q.reopen();
        assert!(q.enqueue(item(0, 0)).is_ok());
    }

    #[test]
    fn kla_annotation_needs_levels() {
        let q: LevelQueue = LevelQueue::new(OrderingSpec::Kla { k: 1 });
        assert!(matches!(q.enqueue(item(0, 0)), Err(QueueError::Model(_))));
    }

    #[test]
    fn concurrent_drainers_split_items() {
        for ordering in [OrderingSpec::Chaotic, OrderingSpec::Dijkstra] {
            let q: LevelQueue = LevelQueue::new(ordering);
            q.enqueue_batch((0..10).map(|v| item(v, (v * 7 % 5) as u64))).unwrap();
            let (a, b) = std::thread::scope(|s| {
                let drain = || {
                    let mut mine = Vec::new();
                    while q.drain_into(Some(1), &mut mine) > 0 {}
                    mine
                };
                let h1 = s.spawn(drain);
                let h2 = s.spawn(drain);
                (h1.join().unwrap(), h2.join().unwrap())
            });
            let sa: HashSet<_> = a.iter().collect();
            let sb: HashSet<_> = b.iter().collect();
            assert!(sa.is_disjoint(&sb));
            assert_eq!(a.len() + b.len(), 10);
        }
    }
}
