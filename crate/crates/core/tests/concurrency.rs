use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use agm_core::eagm::LevelQueue;
use agm_core::model::{DistanceMap, OrderingSpec, WorkItem};
use agm_core::INFINITY;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ITERATIONS: u64 = 1000;
const THREADS: usize = 4;

#[test]
fn atomic_min_update_final_value_and_successes() {
    for it in 0..ITERATIONS {
        let dist = DistanceMap::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(it);
        let offers: Vec<Vec<u64>> = (0..THREADS)
            .map(|_| (0..8).map(|_| rng.gen_range(0..50)).collect())
            .collect();
        let wins: Vec<Vec<u64>> = std::thread::scope(|s| {
            let hs: Vec<_> = offers
                .iter()
                .map(|mine| {
                    let dist = &dist;
                    s.spawn(move || mine.iter().copied().filter(|&d| dist.atomic_min_update(0, d)).collect())
                })
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let min = offers.iter().flatten().copied().min().unwrap();
        assert_eq!(dist.get(0), min);
        // Successful offers form a strictly decreasing chain ending at the minimum.
        let mut all: Vec<u64> = wins.iter().flatten().copied().collect();
        all.sort_unstable();
        assert!(all.windows(2).all(|w| w[0] < w[1]), "duplicate success in {all:?}");
        assert_eq!(all[0], min);
        for w in &wins {
            assert!(w.windows(2).all(|p| p[0] > p[1]));
        }
    }
}

#[test]
fn spec_offers_settle_on_two() {
    let dist = DistanceMap::new(1);
    assert_eq!(dist.get(0), INFINITY);
    let successes = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for d in [5, 2, 9] {
            let (dist, successes) = (&dist, &successes);
            s.spawn(move || {
                if dist.atomic_min_update(0, d) {
                    successes.fetch_add(1, Ordering::Relaxed);
                }
            });
        }
    });
    assert_eq!(dist.get(0), 2);
    assert!((1..=3).contains(&successes.load(Ordering::Relaxed)));
}

#[test]
fn level_queue_conserves_multiset() {
    for it in 0..ITERATIONS {
        let order = if it % 2 == 0 { OrderingSpec::Chaotic } else { OrderingSpec::Dijkstra };
        let q: LevelQueue = LevelQueue::new(order);
        let produced = AtomicUsize::new(0);
        let per_thread = 32usize;
        let drained: Vec<Vec<WorkItem>> = std::thread::scope(|s| {
            let producers: Vec<_> = (0..THREADS)
                .map(|t| {
                    let (q, produced) = (&q, &produced);
                    s.spawn(move || {
                        for i in 0..per_thread {
                            q.enqueue(WorkItem::new((t * per_thread + i) as u32, (i * 7 % 11) as u64)).unwrap();
                            produced.fetch_add(1, Ordering::Release);
                        }
                        Vec::new()
                    })
                })
                .collect();
            let consumers: Vec<_> = (0..THREADS)
                .map(|_| {
                    let (q, produced) = (&q, &produced);
                    s.spawn(move || {
                        let mut mine = Vec::new();
                        loop {
                            let done = produced.load(Ordering::Acquire) == THREADS * per_thread;
                            let batch = q.drain_ordered(Some(5));
                            if q.is_ordered() {
                                assert!(batch.windows(2).all(|w| w[0].distance <= w[1].distance));
                            }
                            if batch.is_empty() && done {
                                break mine;
                            }
                            mine.extend(batch);
                        }
                    })
                })
                .collect();
            producers
                .into_iter()
                .chain(consumers)
                .map(|h| h.join().unwrap())
                .collect()
        });
        let mut counts: HashMap<WorkItem, usize> = HashMap::new();
        for w in drained.into_iter().flatten() {
            *counts.entry(w).or_default() += 1;
        }
        assert_eq!(counts.len(), THREADS * per_thread);
        assert!(counts.values().all(|&c| c == 1));
        assert!(q.is_empty());
    }
}
