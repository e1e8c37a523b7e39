use std::sync::atomic::{AtomicUsize, Ordering};

use crate::eagm::{LevelQueue, QueueEntry};

/// Work items produced but not yet fully processed.
///
/// Producers add before an item becomes visible in any queue; the consumer
/// subtracts only after the processing function returned and its children
/// were counted. Zero therefore means nothing is left anywhere.
#[derive(Debug, Default)]
pub struct ActiveWorkCounter(AtomicUsize);

impl ActiveWorkCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&self, n: usize) {
        if n > 0 {
            self.0.fetch_add(n, Ordering::AcqRel);
        }
    }

    #[inline]
    pub fn sub(&self, n: usize) {
        if n > 0 {
            let prev = self.0.fetch_sub(n, Ordering::AcqRel);
            assert!(prev >= n, "active work counter underflow ({prev} - {n})");
        }
    }

    #[inline]
    pub fn get(&self) -> usize {
        self.0.load(Ordering::Acquire)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.get() == 0
    }
}

/// Quiescence: no active work and every queue at every level empty.
pub fn detect_quiescence<'a, T, I>(counter: &ActiveWorkCounter, queues: I) -> bool
where
    T: QueueEntry + 'a,
    I: IntoIterator<Item = &'a LevelQueue<T>>,
{
    counter.is_zero() && queues.into_iter().all(|q| q.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OrderingSpec, WorkItem};

    #[test]
    fn quiescence_needs_zero_and_empty_queues() {
        let c = ActiveWorkCounter::new();
        let qs: Vec<LevelQueue> = vec![
            LevelQueue::new(OrderingSpec::Chaotic),
            LevelQueue::new(OrderingSpec::Dijkstra),
        ];
        assert!(detect_quiescence(&c, &qs));
        qs[1].enqueue(WorkItem::new(0, 1)).unwrap();
        assert!(!detect_quiescence(&c, &qs));
        qs[1].drain_ordered(None);
        c.add(2);
        assert!(!detect_quiescence(&c, &qs));
        c.sub(2);
        assert!(detect_quiescence(&c, &qs));
    }

    #[test]
    #[should_panic(expected = "underflow")]
    fn underflow_is_fatal() {
        let c = ActiveWorkCounter::new();
        c.add(1);
        c.sub(2);
    }
}
