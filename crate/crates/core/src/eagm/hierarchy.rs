use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::OrderingSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("root annotation {given} conflicts with the machine ordering {root}")]
    RootConflict { root: OrderingSpec, given: OrderingSpec },
    #[error("{level} cannot be annotated with {given} under root {root}")]
    Unsupported {
        level: Level,
        given: OrderingSpec,
        root: OrderingSpec,
    },
    #[error("unknown preset {0:?} (expected buffer, threadq, numaq or nodeq)")]
    UnknownPreset(String),
    #[error("unknown level {0:?}")]
    UnknownLevel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Global,
    Process,
    Numa,
    Thread,
}

impl Level {
    pub const BELOW_ROOT: [Level; 3] = [Level::Process, Level::Numa, Level::Thread];
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Global => "global",
            Level::Process => "process",
            Level::Numa => "numa",
            Level::Thread => "thread",
        })
    }
}

impl FromStr for Level {
    type Err = HierarchyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(Level::Global),
            "process" | "node" => Ok(Level::Process),
            "numa" => Ok(Level::Numa),
            "thread" => Ok(Level::Thread),
            _ => Err(HierarchyError::UnknownLevel(s.to_string())),
        }
    }
}

/// Named variants: no sub-root ordering, or distance ordering at exactly one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Buffer,
    Threadq,
    Numaq,
    Nodeq,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Buffer, Preset::Threadq, Preset::Numaq, Preset::Nodeq];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Buffer => "buffer",
            Preset::Threadq => "threadq",
            Preset::Numaq => "numaq",
            Preset::Nodeq => "nodeq",
        }
    }

    /// The level this preset orders by distance, if any.
    pub fn ordered_level(&self) -> Option<Level> {
        match self {
            Preset::Buffer => None,
            Preset::Threadq => Some(Level::Thread),
            Preset::Numaq => Some(Level::Numa),
            Preset::Nodeq => Some(Level::Process),
        }
    }

    pub fn hierarchy(&self, root: OrderingSpec) -> SpatialHierarchy {
        let mut h = SpatialHierarchy::flat(root);
        if let Some(level) = self.ordered_level() {
            h.set(level, OrderingSpec::Dijkstra);
        }
        h
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = HierarchyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HierarchyError::UnknownPreset(s.to_string()))
    }
}

/// Ordering annotation per level. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpatialHierarchy {
    root: OrderingSpec,
    process: OrderingSpec,
    numa: OrderingSpec,
    thread: OrderingSpec,
}

impl SpatialHierarchy {
    /// Root ordering with chaotic levels below (the plain AGM).
    pub fn flat(root: OrderingSpec) -> Self {
        SpatialHierarchy {
            root,
            process: OrderingSpec::Chaotic,
            numa: OrderingSpec::Chaotic,
            thread: OrderingSpec::Chaotic,
        }
    }

    fn set(&mut self, level: Level, order: OrderingSpec) {
        match level {
            Level::Global => self.root = order,
            Level::Process => self.process = order,
            Level::Numa => self.numa = order,
            Level::Thread => self.thread = order,
        }
    }

    pub fn root(&self) -> OrderingSpec {
        self.root
    }

    pub fn annotation(&self, level: Level) -> OrderingSpec {
        match level {
            Level::Global => self.root,
            Level::Process => self.process,
            Level::Numa => self.numa,
            Level::Thread => self.thread,
        }
    }

    pub fn is_ordered(&self, level: Level) -> bool {
        self.annotation(level) != OrderingSpec::Chaotic
    }

    /// Highest ordered level below the root; new items enter there.
    /// Falls back to the per-thread buffers when nothing below the root is ordered.
    pub fn entry_level(&self) -> Level {
        Level::BELOW_ROOT
            .into_iter()
            .find(|&l| self.is_ordered(l))
            .unwrap_or(Level::Thread)
    }

    /// Levels an item passes through from entry to processing: the entry
    /// level followed by every ordered level beneath it. Chaotic levels in
    /// between are pass-through.
    pub fn pipeline(&self) -> Vec<Level> {
        let entry = self.entry_level();
        let mut levels = vec![entry];
        levels.extend(
            Level::BELOW_ROOT
                .into_iter()
                .filter(|&l| l > entry && self.is_ordered(l)),
        );
        levels
    }

    /// Name of the preset this hierarchy equals, if any.
    pub fn preset(&self) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.hierarchy(self.root) == *self)
    }

    pub fn describe(&self) -> String {
        match self.preset() {
            Some(p) => p.name().to_string(),
            None => format!("process={},numa={},thread={}", self.process, self.numa, self.thread),
        }
    }
}

/// Builds a hierarchy from explicit annotations; unspecified levels are chaotic.
///
/// Below the root a level may be chaotic, distance-ordered, or restate the
/// root ordering itself. Anything else is rejected.
pub fn make_hierarchy(
    root: OrderingSpec,
    annotations: &[(Level, OrderingSpec)],
) -> Result<SpatialHierarchy, HierarchyError> {
    let mut h = SpatialHierarchy::flat(root);
    for &(level, given) in annotations {
        if level == Level::Global {
            if given != root {
                return Err(HierarchyError::RootConflict { root, given });
            }
            continue;
        }
        let allowed = matches!(given, OrderingSpec::Chaotic | OrderingSpec::Dijkstra) || given == root;
        if !allowed {
            return Err(HierarchyError::Unsupported { level, given, root });
        }
        h.set(level, given);
    }
    Ok(h)
}

pub fn preset(name: &str, root: OrderingSpec) -> Result<SpatialHierarchy, HierarchyError> {
    Ok(name.parse::<Preset>()?.hierarchy(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    const D3: OrderingSpec = OrderingSpec::Delta { delta: 3 };

    #[test]
    fn numa_ordered_delta_hierarchy() {
        let h = make_hierarchy(D3, &[(Level::Numa, OrderingSpec::Dijkstra)]).unwrap();
        assert_eq!(h.root(), D3);
        assert_eq!(h.annotation(Level::Numa), OrderingSpec::Dijkstra);
        assert_eq!(h.annotation(Level::Process), OrderingSpec::Chaotic);
        assert_eq!(h.annotation(Level::Thread), OrderingSpec::Chaotic);
        assert_eq!(h.preset(), Some(Preset::Numaq));
        assert_eq!(h.pipeline(), vec![Level::Numa]);
    }

    #[test]
    fn default_is_buffer() {
        let kla = OrderingSpec::Kla { k: 2 };
        let h = make_hierarchy(kla, &[]).unwrap();
        assert_eq!(h, preset("buffer", kla).unwrap());
        assert_eq!(h.entry_level(), Level::Thread);
        let restated = make_hierarchy(kla, &[(Level::Global, kla)]).unwrap();
        assert_eq!(restated, h);
    }

    #[test]
    fn root_conflict() {
        assert_eq!(
            make_hierarchy(D3, &[(Level::Global, OrderingSpec::Dijkstra)]),
            Err(HierarchyError::RootConflict { root: D3, given: OrderingSpec::Dijkstra })
        );
    }

    #[test]
    fn unsupported_sub_root_annotation() {
        let err = make_hierarchy(D3, &[(Level::Thread, OrderingSpec::Kla { k: 1 })]).unwrap_err();
        assert!(matches!(err, HierarchyError::Unsupported { level: Level::Thread, .. }));
        let err = make_hierarchy(D3, &[(Level::Thread, OrderingSpec::Delta { delta: 5 })]).unwrap_err();
        assert!(matches!(err, HierarchyError::Unsupported { .. }));
        assert!(make_hierarchy(D3, &[(Level::Thread, D3)]).is_ok());
    }

    #[test]
    fn presets() {
        let h = preset("threadq", D3).unwrap();
        assert_eq!(h.annotation(Level::Thread), OrderingSpec::Dijkstra);
        assert_eq!(h.pipeline(), vec![Level::Thread]);
        let h = preset("buffer", OrderingSpec::Chaotic).unwrap();
        assert!(Level::BELOW_ROOT.iter().all(|&l| !h.is_ordered(l)));
        assert_eq!(h.root(), OrderingSpec::Chaotic);
        let h = preset("nodeq", OrderingSpec::Kla { k: 1 }).unwrap();
        assert_eq!(h.annotation(Level::Process), OrderingSpec::Dijkstra);
        assert_eq!(h.entry_level(), Level::Process);
        assert!(matches!(preset("fifo", D3), Err(HierarchyError::UnknownPreset(_))));
    }

    #[test]
    fn multi_level_pipeline() {
        let h = make_hierarchy(
            D3,
            &[(Level::Process, OrderingSpec::Dijkstra), (Level::Thread, OrderingSpec::Dijkstra)],
        )
        .unwrap();
        assert_eq!(h.pipeline(), vec![Level::Process, Level::Thread]);
        assert_eq!(h.preset(), None);
        assert_eq!(h.describe(), "process=dijkstra,numa=chaotic,thread=dijkstra");
    }
}
