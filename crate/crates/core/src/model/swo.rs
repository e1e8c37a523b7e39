//! Exhaustive strict-weak-ordering checks over a finite universe.

use std::fmt::Debug;

use super::{compare, Comparison, ModelError, OrderingSpec, WorkItem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwoViolation<T> {
    /// `a < a`
    Irreflexivity(T),
    /// `a < b` and `b < a`
    Asymmetry(T, T),
    /// `a < b`, `b < c`, but not `a < c`
    Transitivity(T, T, T),
    /// `a ~ b`, `b ~ c`, but `a` and `c` comparable
    IncomparabilityTransitivity(T, T, T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwoReport<T> {
    pub universe_size: usize,
    /// First violation found, checking the four properties in order.
    pub violation: Option<SwoViolation<T>>,
}

impl<T> SwoReport<T> {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks an arbitrary `less` relation over `universe`.
pub fn validate_swo_with<T, F>(universe: &[T], less: F) -> SwoReport<T>
where
    T: Clone + Debug,
    F: Fn(&T, &T) -> bool,
{
    let n = universe.len();
    let lt: Vec<bool> = (0..n * n)
        .map(|ij| less(&universe[ij / n], &universe[ij % n]))
        .collect();
    let at = |i: usize, j: usize| lt[i * n + j];
    let inc = |i: usize, j: usize| !at(i, j) && !at(j, i);
    let report = |violation| SwoReport {
        universe_size: n,
        violation: Some(violation),
    };
    let u = |i: usize| universe[i].clone();

    if let Some(i) = (0..n).find(|&i| at(i, i)) {
        return report(SwoViolation::Irreflexivity(u(i)));
    }
    for i in 0..n {
        for j in 0..n {
            if at(i, j) && at(j, i) {
                return report(SwoViolation::Asymmetry(u(i), u(j)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !at(i, j) {
                continue;
            }
            for k in 0..n {
                if at(j, k) && !at(i, k) {
                    return report(SwoViolation::Transitivity(u(i), u(j), u(k)));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !inc(i, j) {
                continue;
            }
            for k in 0..n {
                if inc(j, k) && !inc(i, k) {
                    return report(SwoViolation::IncomparabilityTransitivity(u(i), u(j), u(k)));
                }
            }
        }
    }
    SwoReport {
        universe_size: n,
        violation: None,
    }
}

/// Checks `order` over `universe`. Fails only if an item cannot be compared
/// at all (a KLA ordering over items without levels).
pub fn validate_swo(
    order: &OrderingSpec,
    universe: &[WorkItem],
) -> Result<SwoReport<WorkItem>, ModelError> {
    for w in universe {
        order.key(w)?;
    }
    Ok(validate_swo_with(universe, |a, b| {
        compare(order, a, b).expect("keys checked above") == Comparison::Less
    }))
}
