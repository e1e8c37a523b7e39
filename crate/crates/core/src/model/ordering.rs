//! The strict weak orderings that turn one relaxation kernel into different
//! SSSP algorithms. Every ordering here is "compare a derived integer key",
//! so two items are incomparable exactly when their keys agree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ModelError, WorkItem};
use crate::Distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum OrderingSpec {
    /// Empty relation: a single class holding everything.
    Chaotic,
    /// One class per distance value.
    Dijkstra,
    /// Distance buckets of width `delta`.
    Delta { delta: Distance },
    /// Buckets of `k` consecutive levels.
    Kla { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Incomparable,
}

/// Equivalence-class label, tagged with the ordering that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassKey {
    pub ordering: OrderingSpec,
    pub value: u64,
}

impl OrderingSpec {
    pub fn delta(delta: Distance) -> Result<Self, ModelError> {
        OrderingSpec::Delta { delta }.validated()
    }

    pub fn kla(k: u32) -> Result<Self, ModelError> {
        OrderingSpec::Kla { k }.validated()
    }

    pub fn validated(self) -> Result<Self, ModelError> {
        match self {
            OrderingSpec::Delta { delta: 0 } => {
                Err(ModelError::InvalidOrdering("delta must be positive".into()))
            }
            OrderingSpec::Kla { k: 0 } => Err(ModelError::InvalidOrdering("k must be at least 1".into())),
            ok => Ok(ok),
        }
    }

    /// Whether items compared under this ordering must carry a level.
    pub fn needs_level(&self) -> bool {
        matches!(self, OrderingSpec::Kla { .. })
    }

    /// Raw class key of `w`.
    #[inline]
    pub fn key(&self, w: &WorkItem) -> Result<u64, ModelError> {
        Ok(match *self {
            OrderingSpec::Chaotic => 0,
            OrderingSpec::Dijkstra => w.distance,
            OrderingSpec::Delta { delta } => w.distance / delta,
            OrderingSpec::Kla { k } => match w.level {
                Some(level) => u64::from(level / k),
                None => return Err(ModelError::MissingLevel(*w)),
            },
        })
    }

    /// Short algorithm name used in reports.
    pub fn algorithm_name(&self) -> &'static str {
        match self {
            OrderingSpec::Chaotic => "chaotic",
            OrderingSpec::Dijkstra => "dijkstra",
            OrderingSpec::Delta { .. } => "delta",
            OrderingSpec::Kla { .. } => "kla",
        }
    }
}

impl fmt::Display for OrderingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSpec::Chaotic => write!(f, "chaotic"),
            OrderingSpec::Dijkstra => write!(f, "dijkstra"),
            OrderingSpec::Delta { delta } => write!(f, "delta:{delta}"),
            OrderingSpec::Kla { k } => write!(f, "kla:{k}"),
        }
    }
}

/// Parses `chaotic`, `dijkstra`, `delta:<Δ>` or `kla:<k>`.
impl FromStr for OrderingSpec {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidOrdering(format!("cannot parse ordering {s:?}"));
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        match (name.trim().to_ascii_lowercase().as_str(), param) {
            ("chaotic", None) => Ok(OrderingSpec::Chaotic),
            ("dijkstra", None) => Ok(OrderingSpec::Dijkstra),
            ("delta", Some(p)) => OrderingSpec::delta(p.trim().parse().map_err(|_| bad())?),
            ("kla", Some(p)) => OrderingSpec::kla(p.trim().parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

pub fn compare(order: &OrderingSpec, w1: &WorkItem, w2: &WorkItem) -> Result<Comparison, ModelError> {
    let (k1, k2) = (order.key(w1)?, order.key(w2)?);
    Ok(match k1.cmp(&k2) {
        Ordering::Less => Comparison::Less,
        Ordering::Greater => Comparison::Greater,
        Ordering::Equal => Comparison::Incomparable,
    })
}

pub fn class_key(order: &OrderingSpec, w: &WorkItem) -> Result<ClassKey, ModelError> {
    Ok(ClassKey {
        ordering: *order,
        value: order.key(w)?,
    })
}

/// Order between two whole classes. `Less` means every member of the first
/// class precedes every member of the second.
pub fn induced_class_compare(
    order: &OrderingSpec,
    k1: &ClassKey,
    k2: &ClassKey,
) -> Result<Ordering, ModelError> {
    for k in [k1, k2] {
        if k.ordering != *order {
            return Err(ModelError::MixedKeys {
                order: *order,
                key: k.ordering,
            });
        }
    }
    Ok(k1.value.cmp(&k2.value))
}
