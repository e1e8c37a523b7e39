use std::fmt;

use agm_core::engine::{run, EngineConfig, RunStats, WorkerTopology};
use agm_core::graph::generate_rmat;
use agm_core::verify::dijkstra_reference;
use agm_core::{OrderingSpec, RmatParams};
use serde::Serialize;

use crate::run::random_sources;
use crate::BenchError;

/// Minimum ratio of chaotic to dijkstra work for the trend to count as reproduced.
pub const MIN_SEPARATION: f64 = 1.05;

#[derive(Debug, Clone, Copy)]
pub struct TrendSpec {
    /// Graph `i` uses `template` with seed `template.seed + i`.
    pub template: RmatParams,
    pub graphs: usize,
    pub sources_per_graph: usize,
    pub topology: WorkerTopology,
    pub verify: bool,
}

/// Mean work per run for one ordering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct WorkMeans {
    /// Items the processing function ran on (useful + stale).
    pub relaxations: f64,
    /// Relaxations plus items discarded as stale when their class opened.
    pub examined: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub graphs: usize,
    pub runs_per_ordering: usize,
    pub dijkstra: WorkMeans,
    pub delta3: WorkMeans,
    pub chaotic: WorkMeans,
}

impl TrendReport {
    fn ordered(m: impl Fn(&WorkMeans) -> f64, r: &TrendReport) -> bool {
        m(&r.dijkstra) <= m(&r.delta3) && m(&r.delta3) <= m(&r.chaotic) && m(&r.chaotic) >= MIN_SEPARATION * m(&r.dijkstra)
    }

    /// dijkstra <= delta:3 <= chaotic on relaxations, with chaotic at least
    /// [`MIN_SEPARATION`] times dijkstra.
    pub fn holds(&self) -> bool {
        Self::ordered(|m| m.relaxations, self)
    }

    /// The same comparison counting pruned items as work.
    pub fn holds_examined(&self) -> bool {
        Self::ordered(|m| m.examined, self)
    }

    pub fn separation(&self) -> f64 {
        self.chaotic.relaxations / self.dijkstra.relaxations
    }
}

impl fmt::Display for TrendReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "work trend over {} graphs, {} runs per ordering", self.graphs, self.runs_per_ordering)?;
        for (name, m) in [("dijkstra", self.dijkstra), ("delta:3", self.delta3), ("chaotic", self.chaotic)] {
            writeln!(f, "  {name:<9} relaxations {:>12.1}  examined {:>12.1}", m.relaxations, m.examined)?;
        }
        write!(
            f,
            "  dijkstra <= delta:3 <= chaotic: {} (chaotic/dijkstra = {:.3})",
            if self.holds() { "yes" } else { "no" },
            self.separation()
        )
    }
}

fn accumulate(sum: &mut WorkMeans, s: &RunStats) {
    sum.relaxations += s.total_relaxations() as f64;
    sum.examined += (s.total_relaxations() + s.items_pruned) as f64;
}

/// Runs dijkstra, delta:3 and chaotic on the same graphs and sources and
/// averages their work.
pub fn work_trend(spec: &TrendSpec) -> Result<TrendReport, BenchError> {
    let orders = [OrderingSpec::Dijkstra, OrderingSpec::Delta { delta: 3 }, OrderingSpec::Chaotic];
    let mut sums = [WorkMeans::default(); 3];
    let mut runs = 0usize;
    for i in 0..spec.graphs {
        let params = RmatParams {
            seed: spec.template.seed + i as u64,
            ..spec.template
        };
        let graph = generate_rmat(&params)?;
        for source in random_sources(&graph, spec.sources_per_graph, params.seed) {
            let oracle = if spec.verify {
                Some(dijkstra_reference(&graph, source).map_err(|e| BenchError::Usage(e.to_string()))?)
            } else {
                None
            };
            for (order, sum) in orders.iter().zip(sums.iter_mut()) {
                let out = run(&graph, &EngineConfig::new(*order).with_topology(spec.topology), source)?;
                if let Some(oracle) = &oracle {
                    if &out.distances != oracle {
                        return Err(BenchError::Verification {
                            config: format!("{order} on seed {}", params.seed),
                            source_vertex: source,
                            report: "distances differ from the oracle".into(),
                        });
                    }
                }
                accumulate(sum, &out.stats);
            }
            runs += 1;
        }
    }
    let n = runs.max(1) as f64;
    let mean = |m: WorkMeans| WorkMeans {
        relaxations: m.relaxations / n,
        examined: m.examined / n,
    };
    Ok(TrendReport {
        graphs: spec.graphs,
        runs_per_ordering: runs,
        dijkstra: mean(sums[0]),
        delta3: mean(sums[1]),
        chaotic: mean(sums[2]),
    })
}
