//! Benchmark harness for the AGM/EAGM shortest-path family: argument
//! parsing, multi-trial runs with oracle verification, CSV/JSON reports,
//! the ordering x preset matrix and the work-trend comparison.

pub mod matrix;
pub mod report;
pub mod run;
pub mod spec;
pub mod trend;

use std::path::Path;

use agm_core::engine::EngineError;
use agm_core::graph::GraphError;
use thiserror::Error;

pub use matrix::{matrix, matrix_with, paper_grid, MatrixReport};
pub use report::{emit_report, BenchRow, CSV_HEADER};
pub use run::{run_bench, BenchReport};
pub use spec::{parse_args, BenchSpec, Mode, OutputFormat};
pub use trend::{work_trend, TrendReport, TrendSpec};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("verification failed for {config} from source {source_vertex}:\n{report}")]
    Verification {
        config: String,
        source_vertex: u32,
        report: String,
    },
    #[error("output: {0}")]
    Output(String),
}

impl BenchError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        BenchError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    /// 0 for help/version, 2 for a verification failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Clap(e) if !e.use_stderr() => 0,
            BenchError::Verification { .. } => 2,
            _ => 1,
        }
    }
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        BenchError::Output(e.to_string())
    }
}
