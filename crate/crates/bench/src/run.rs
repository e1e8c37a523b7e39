use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter};

use agm_core::engine::{run, EngineConfig, RunStats};
use agm_core::graph::{generate_rmat, load_dimacs_gr, load_edge_list, EdgeListOptions, PartitionMap, WeightPolicy};
use agm_core::verify::{dijkstra_reference, verify_distances, verify_trace};
use agm_core::{Distance, Graph, RmatParams, VertexId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spec::{BenchSpec, InputFormat, InputSpec, SourceSpec};
use crate::BenchError;

/// A loaded or generated input with a printable name.
#[derive(Debug, Clone)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

pub fn load_graph(input: &InputSpec) -> Result<NamedGraph, BenchError> {
    match input {
        InputSpec::Rmat(p) => {
            let same_shape = |q: RmatParams| (q.a, q.b, q.c, q.d) == (p.a, p.b, p.c, p.d);
            let family = if same_shape(RmatParams::rmat1(0, 0, 0)) {
                "rmat1"
            } else if same_shape(RmatParams::rmat2(0, 0, 0)) {
                "rmat2"
            } else {
                "rmat"
            };
            Ok(NamedGraph {
                name: format!("{family}-s{}-ef{}-seed{}", p.scale, p.edge_factor, p.seed),
                graph: generate_rmat(p)?,
            })
        }
        InputSpec::File {
            path,
            format,
            weights,
            symmetrize,
        } => {
            let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
            let reader = BufReader::new(file);
            let graph = match format {
                InputFormat::Dimacs => load_dimacs_gr(reader)?,
                InputFormat::Edgelist => {
                    let weights = match *weights {
                        Some((wmin, wmax)) => WeightPolicy::Uniform { wmin, wmax, seed: 0 },
                        None => WeightPolicy::Fixed(1),
                    };
                    let opts = EdgeListOptions {
                        weights,
                        symmetrize: *symmetrize,
                        relabel: false,
                    };
                    load_edge_list(reader, opts)?.graph
                }
            };
            let name = path
                .file_stem()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
            Ok(NamedGraph { name, graph })
        }
    }
}

/// Picks `count` distinct vertices with at least one out-edge, uniformly at
/// random from `seed` (fewer if the graph has fewer such vertices).
pub fn random_sources(graph: &Graph, count: usize, seed: u64) -> Vec<VertexId> {
    let candidates: Vec<VertexId> = (0..graph.vertex_count() as VertexId)
        .filter(|&v| graph.out_degree(v) > 0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.choose_multiple(&mut rng, count).copied().collect()
}

pub fn resolve_sources(spec: &SourceSpec, graph: &Graph, seed: u64) -> Result<Vec<VertexId>, BenchError> {
    let sources = match spec {
        SourceSpec::Random(n) => random_sources(graph, *n, seed),
        SourceSpec::Explicit(list) => list.clone(),
    };
    if sources.is_empty() {
        return Err(BenchError::Usage("graph has no vertex with an out-edge".into()));
    }
    if let Some(&bad) = sources.iter().find(|&&s| s as usize >= graph.vertex_count()) {
        return Err(BenchError::Usage(format!(
            "source {bad} out of range for {} vertices",
            graph.vertex_count()
        )));
    }
    Ok(sources)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRun {
    pub trial: usize,
    pub source: VertexId,
    pub stats: RunStats,
}

/// Sample mean and (n - 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanSigma {
    pub mean: f64,
    pub sigma: f64,
}

impl MeanSigma {
    pub fn of(values: &[f64]) -> MeanSigma {
        let n = values.len();
        if n == 0 {
            return MeanSigma::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sigma = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        MeanSigma { mean, sigma }
    }
}

/// Per-configuration aggregate over trials; each trial contributes the mean
/// over its sources.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Aggregate {
    pub time_s: MeanSigma,
    pub useful_relax: MeanSigma,
    pub stale_relax: MeanSigma,
    pub pruned: MeanSigma,
    pub epochs: MeanSigma,
    pub messages_routed: MeanSigma,
}

impl Aggregate {
    pub fn from_runs(runs: &[TrialRun], trials: usize) -> Aggregate {
        let per_trial = |f: &dyn Fn(&RunStats) -> f64| -> Vec<f64> {
            (0..trials)
                .filter_map(|t| {
                    let vals: Vec<f64> = runs.iter().filter(|r| r.trial == t).map(|r| f(&r.stats)).collect();
                    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
                })
                .collect()
        };
        Aggregate {
            time_s: MeanSigma::of(&per_trial(&|s| s.wall_time_s)),
            useful_relax: MeanSigma::of(&per_trial(&|s| s.relaxations_useful as f64)),
            stale_relax: MeanSigma::of(&per_trial(&|s| s.relaxations_stale as f64)),
            pruned: MeanSigma::of(&per_trial(&|s| s.items_pruned as f64)),
            epochs: MeanSigma::of(&per_trial(&|s| s.epochs as f64)),
            messages_routed: MeanSigma::of(&per_trial(&|s| s.messages_routed as f64)),
        }
    }
}

/// Result of one configuration: every (trial, source) run and the aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub workers: usize,
    pub algorithm: String,
    pub preset: String,
    pub verified: bool,
    pub runs: Vec<TrialRun>,
    pub aggregate: Aggregate,
}

/// Oracle distances by source, computed lazily and reused across trials and configurations.
#[derive(Debug, Default)]
pub struct OracleCache {
    distances: HashMap<VertexId, Vec<Distance>>,
}

impl OracleCache {
    pub fn get(&mut self, graph: &Graph, source: VertexId) -> Result<&[Distance], BenchError> {
        if !self.distances.contains_key(&source) {
            let d = dijkstra_reference(graph, source).map_err(|e| BenchError::Usage(e.to_string()))?;
            self.distances.insert(source, d);
        }
        Ok(&self.distances[&source])
    }
}

fn engine_config(spec: &BenchSpec) -> EngineConfig {
    EngineConfig::new(spec.ordering)
        .with_topology(spec.topology)
        .with_hierarchy(spec.hierarchy)
}

/// Runs every trial and source of `spec` on an already loaded graph.
pub fn run_on_graph(
    spec: &BenchSpec,
    input: &NamedGraph,
    sources: &[VertexId],
    oracle: &mut OracleCache,
) -> Result<BenchReport, BenchError> {
    let graph = &input.graph;
    let config = engine_config(spec);
    let label = format!("{} {}", spec.ordering, spec.hierarchy.describe());
    let mut runs = Vec::with_capacity(spec.trials * sources.len());
    for trial in 0..spec.trials {
        for (i, &source) in sources.iter().enumerate() {
            let first = trial == 0 && i == 0;
            let traced = first && spec.trace.is_some();
            let out = run(graph, &config.with_trace(traced), source)?;
            if spec.verify {
                let report = verify_distances(&out.distances, oracle.get(graph, source)?)
                    .map_err(|e| BenchError::Usage(e.to_string()))?;
                if !report.passed() {
                    return Err(BenchError::Verification {
                        config: label,
                        source_vertex: source,
                        report: report.to_string(),
                    });
                }
            }
            if let (Some(path), Some(trace)) = (&spec.trace, &out.trace) {
                if spec.verify {
                    let pmap = PartitionMap::new(graph.vertex_count(), spec.topology.partitions)?;
                    let report = verify_trace(trace, spec.ordering, &pmap);
                    if !report.passed() {
                        return Err(BenchError::Verification {
                            config: label,
                            source_vertex: source,
                            report: report.to_string(),
                        });
                    }
                }
                let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
                trace
                    .write_jsonl(BufWriter::new(file))
                    .map_err(|e| BenchError::io(path, e))?;
            }
            runs.push(TrialRun {
                trial,
                source,
                stats: out.stats,
            });
        }
    }
    Ok(BenchReport {
        graph: input.name.clone(),
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        workers: spec.topology.total_workers(),
        algorithm: spec.ordering.to_string(),
        preset: spec.hierarchy.describe(),
        verified: spec.verify,
        aggregate: Aggregate::from_runs(&runs, spec.trials),
        runs,
    })
}

/// Builds or loads the graph once, then runs trials x sources.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchReport, BenchError> {
    let input = load_graph(&spec.input)?;
    let sources = resolve_sources(&spec.sources, &input.graph, spec.seed)?;
    run_on_graph(spec, &input, &sources, &mut OracleCache::default())
}
