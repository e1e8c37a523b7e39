use std::ffi::OsString;
use std::path::{Path, PathBuf};

use agm_core::eagm::{make_hierarchy, Level};
use agm_core::engine::WorkerTopology;
use agm_core::{OrderingSpec, Preset, RmatParams, SpatialHierarchy, VertexId};
use clap::{ArgGroup, Parser, ValueEnum};
use serde::Deserialize;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// `src dst [weight]` per line.
    Edgelist,
    /// DIMACS shortest-path `.gr`.
    Dimacs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Chaotic,
    Dijkstra,
    Delta,
    Kla,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Buffer,
    Threadq,
    Numaq,
    Nodeq,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Buffer => Preset::Buffer,
            PresetArg::Threadq => Preset::Threadq,
            PresetArg::Numaq => Preset::Numaq,
            PresetArg::Nodeq => Preset::Nodeq,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    File {
        path: PathBuf,
        format: InputFormat,
        /// Weight range for edge-list lines without a weight column.
        weights: Option<(u32, u32)>,
        symmetrize: bool,
    },
    Rmat(RmatParams),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceSpec {
    /// This many uniformly random vertices with at least one out-edge.
    Random(usize),
    Explicit(Vec<VertexId>),
}

/// Everything one benchmark invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub input: InputSpec,
    pub ordering: OrderingSpec,
    pub hierarchy: SpatialHierarchy,
    pub topology: WorkerTopology,
    pub sources: SourceSpec,
    pub trials: usize,
    pub seed: u64,
    pub verify: bool,
    pub trace: Option<PathBuf>,
    pub output: OutputFormat,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    /// {delta, kla, chaotic} x every preset, using the given Δ and k.
    Matrix { delta: u64, k: u32 },
    /// Work comparison of dijkstra, delta:3 and chaotic over this many seeded graphs.
    Trend { graphs: usize },
}

impl BenchSpec {
    /// Same spec with a different ordering and preset.
    pub fn with_variant(&self, ordering: OrderingSpec, preset: Preset) -> BenchSpec {
        BenchSpec {
            ordering,
            hierarchy: preset.hierarchy(ordering),
            mode: Mode::Single,
            ..self.clone()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "agm-bench",
    version,
    about = "Runs AGM/EAGM single-source shortest paths and reports timing and work counts",
    group(ArgGroup::new("graph").required(true).args(["input", "rmat1", "rmat2"]))
)]
struct Cli {
    /// Graph file to load.
    #[arg(long, env = "AGM_INPUT", conflicts_with_all = ["scale", "edge_factor"])]
    input: Option<PathBuf>,
    /// Generate an RMAT1 graph (A=0.57, B=C=0.19, weights 1..=100).
    #[arg(long, env = "AGM_RMAT1")]
    rmat1: bool,
    /// Generate an RMAT2 graph (A=0.50, B=C=0.1, weights 1..=255).
    #[arg(long, env = "AGM_RMAT2")]
    rmat2: bool,
    #[arg(long, value_enum, env = "AGM_FORMAT", default_value = "edgelist")]
    format: InputFormat,
    /// Treat an edge list as undirected.
    #[arg(long, env = "AGM_SYMMETRIZE", requires = "input")]
    symmetrize: bool,
    #[arg(long, env = "AGM_SCALE", default_value_t = 10)]
    scale: u32,
    #[arg(long, env = "AGM_EDGE_FACTOR", default_value_t = 16)]
    edge_factor: u32,
    #[arg(long, env = "AGM_WMIN")]
    wmin: Option<u32>,
    #[arg(long, env = "AGM_WMAX")]
    wmax: Option<u32>,

    #[arg(long, value_enum, env = "AGM_ORDERING", required_unless_present_any = ["matrix", "trend"])]
    ordering: Option<Algorithm>,
    /// Bucket width for delta ordering.
    #[arg(long, env = "AGM_DELTA")]
    delta: Option<u64>,
    /// Level width for kla ordering.
    #[arg(long, env = "AGM_K")]
    k: Option<u32>,
    #[arg(long, value_enum, env = "AGM_PRESET")]
    preset: Option<PresetArg>,
    /// TOML file with `process`, `numa` and `thread` annotations.
    #[arg(long, env = "AGM_HIERARCHY", conflicts_with = "preset")]
    hierarchy: Option<PathBuf>,

    #[arg(long, env = "AGM_PARTITIONS", default_value_t = 1)]
    partitions: usize,
    #[arg(long, env = "AGM_GROUPS", default_value_t = 1)]
    groups: usize,
    /// Workers per group; defaults to the available parallelism.
    #[arg(long, env = "AGM_WORKERS")]
    workers: Option<usize>,

    /// Number of random sources.
    #[arg(long, env = "AGM_SOURCES", default_value_t = 1, conflicts_with = "source")]
    sources: usize,
    /// Explicit source vertices.
    #[arg(long, value_delimiter = ',')]
    source: Vec<VertexId>,
    #[arg(long, env = "AGM_TRIALS", default_value_t = 1)]
    trials: usize,
    #[arg(long, env = "AGM_SEED", default_value_t = 1)]
    seed: u64,
    /// Check every result against a sequential Dijkstra (default).
    #[arg(long, overrides_with = "no_verify")]
    verify: bool,
    #[arg(long, env = "AGM_NO_VERIFY", overrides_with = "verify")]
    no_verify: bool,
    /// Write the trace of the first run as JSON lines.
    #[arg(long, env = "AGM_TRACE")]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, env = "AGM_OUTPUT", default_value = "csv")]
    output: OutputFormat,

    /// Run {delta, kla, chaotic} x {buffer, threadq, numaq, nodeq}.
    #[arg(long, env = "AGM_MATRIX", conflicts_with_all = ["ordering", "preset", "hierarchy", "trend"])]
    matrix: bool,
    /// Compare dijkstra, delta:3 and chaotic work over this many seeded graphs.
    #[arg(long, env = "AGM_TREND", conflicts_with_all = ["ordering", "preset", "hierarchy", "input"])]
    trend: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HierarchyFile {
    process: Option<String>,
    numa: Option<String>,
    thread: Option<String>,
}

fn usage(message: impl Into<String>) -> BenchError {
    BenchError::Usage(message.into())
}

/// Parses a hierarchy description such as `process = "dijkstra"`.
pub fn parse_hierarchy(text: &str, root: OrderingSpec) -> Result<SpatialHierarchy, BenchError> {
    let file: HierarchyFile = toml::from_str(text).map_err(|e| usage(format!("hierarchy: {e}")))?;
    let mut annotations = Vec::new();
    for (level, value) in [
        (Level::Process, file.process),
        (Level::Numa, file.numa),
        (Level::Thread, file.thread),
    ] {
        if let Some(v) = value {
            let order: OrderingSpec = match v.trim() {
                "root" => root,
                other => other.parse().map_err(|e| usage(format!("hierarchy {level}: {e}")))?,
            };
            annotations.push((level, order));
        }
    }
    make_hierarchy(root, &annotations).map_err(|e| usage(e.to_string()))
}

fn read_hierarchy(path: &Path, root: OrderingSpec) -> Result<SpatialHierarchy, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_hierarchy(&text, root)
}

fn ordering(algo: Algorithm, delta: Option<u64>, k: Option<u32>) -> Result<OrderingSpec, BenchError> {
    match algo {
        Algorithm::Chaotic => Ok(OrderingSpec::Chaotic),
        Algorithm::Dijkstra => Ok(OrderingSpec::Dijkstra),
        Algorithm::Delta => {
            let d = delta.ok_or_else(|| usage("--ordering delta needs --delta"))?;
            OrderingSpec::delta(d).map_err(|e| usage(e.to_string()))
        }
        Algorithm::Kla => {
            let k = k.ok_or_else(|| usage("--ordering kla needs --k"))?;
            OrderingSpec::kla(k).map_err(|e| usage(e.to_string()))
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses a full argument vector (program name first).
///
/// `--help` and `--version` come back as [`BenchError::Clap`] with an exit
/// code of 0.
pub fn parse_args<I, T>(argv: I) -> Result<BenchSpec, BenchError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(BenchError::Clap)?;

    let weights = match (cli.wmin, cli.wmax) {
        (None, None) => None,
        (Some(lo), Some(hi)) if lo <= hi => Some((lo, hi)),
        (Some(lo), Some(hi)) => return Err(usage(format!("--wmin {lo} exceeds --wmax {hi}"))),
        _ => return Err(usage("--wmin and --wmax go together")),
    };
    let input = match &cli.input {
        Some(path) => InputSpec::File {
            path: path.clone(),
            format: cli.format,
            weights,
            symmetrize: cli.symmetrize,
        },
        None => {
            let mut params = if cli.rmat2 {
                RmatParams::rmat2(cli.scale, cli.edge_factor, cli.seed)
            } else {
                RmatParams::rmat1(cli.scale, cli.edge_factor, cli.seed)
            };
            if let Some((lo, hi)) = weights {
                params.wmin = lo;
                params.wmax = hi;
            }
            params.validate().map_err(|e| usage(e.to_string()))?;
            InputSpec::Rmat(params)
        }
    };
    if cli.rmat1 && cli.rmat2 {
        return Err(usage("--rmat1 and --rmat2 are exclusive"));
    }
    if cli.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }

    let topology = WorkerTopology::new(cli.partitions, cli.groups, cli.workers.unwrap_or_else(default_workers))
        .map_err(|e| usage(e.to_string()))?;
    let sources = if cli.source.is_empty() {
        if cli.sources == 0 {
            return Err(usage("--sources must be at least 1"));
        }
        SourceSpec::Random(cli.sources)
    } else {
        SourceSpec::Explicit(cli.source.clone())
    };

    let (mode, order) = if cli.matrix {
        let delta = cli.delta.unwrap_or(3);
        let k = cli.k.unwrap_or(1);
        if delta == 0 || k == 0 {
            return Err(usage("--delta and --k must be positive"));
        }
        (Mode::Matrix { delta, k }, OrderingSpec::Chaotic)
    } else if let Some(graphs) = cli.trend {
        if graphs == 0 {
            return Err(usage("--trend needs at least one graph"));
        }
        (Mode::Trend { graphs }, OrderingSpec::Chaotic)
    } else {
        let algo = cli.ordering.expect("clap enforces --ordering");
        (Mode::Single, ordering(algo, cli.delta, cli.k)?)
    };
    let hierarchy = match (&cli.hierarchy, cli.preset) {
        (Some(path), _) => read_hierarchy(path, order)?,
        (None, Some(p)) => Preset::from(p).hierarchy(order),
        (None, None) => Preset::Buffer.hierarchy(order),
    };

    Ok(BenchSpec {
        input,
        ordering: order,
        hierarchy,
        topology,
        sources,
        trials: cli.trials,
        seed: cli.seed,
        verify: !cli.no_verify,
        trace: cli.trace,
        output: cli.output,
        mode,
    })
}
