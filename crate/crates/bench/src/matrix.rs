use std::fmt::Write as _;

use agm_core::{OrderingSpec, Preset};
use serde::Serialize;

use crate::run::{load_graph, resolve_sources, run_on_graph, BenchReport, OracleCache};
use crate::spec::BenchSpec;
use crate::BenchError;

/// The three root orderings crossed with every preset.
pub fn paper_grid(delta: u64, k: u32) -> Vec<(OrderingSpec, Preset)> {
    [OrderingSpec::Delta { delta }, OrderingSpec::Kla { k }, OrderingSpec::Chaotic]
        .into_iter()
        .flat_map(|o| Preset::ALL.into_iter().map(move |p| (o, p)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellOutcome {
    Passed { report: BenchReport },
    Failed { error: String, exit_code: i32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixCell {
    pub algorithm: String,
    pub preset: String,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MatrixReport {
    pub cells: Vec<MatrixCell>,
}

impl MatrixReport {
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(|c| matches!(c.outcome, CellOutcome::Passed { .. }))
    }

    pub fn reports(&self) -> Vec<BenchReport> {
        self.cells
            .iter()
            .filter_map(|c| match &c.outcome {
                CellOutcome::Passed { report } => Some(report.clone()),
                CellOutcome::Failed { .. } => None,
            })
            .collect()
    }

    /// Worst exit code over all cells (2 dominates 1).
    pub fn exit_code(&self) -> i32 {
        self.cells
            .iter()
            .map(|c| match c.outcome {
                CellOutcome::Passed { .. } => 0,
                CellOutcome::Failed { exit_code, .. } => exit_code,
            })
            .max()
            .unwrap_or(0)
    }

    /// Fixed-width table: one line per cell plus a totals line.
    pub fn summary_table(&self) -> String {
        let mut s = format!(
            "{:<10} {:<8} {:>6} {:>12} {:>12} {:>8}\n",
            "algorithm", "preset", "status", "useful", "stale", "epochs"
        );
        for c in &self.cells {
            match &c.outcome {
                CellOutcome::Passed { report } => {
                    let a = &report.aggregate;
                    let _ = writeln!(
                        s,
                        "{:<10} {:<8} {:>6} {:>12.1} {:>12.1} {:>8.1}",
                        c.algorithm, c.preset, "ok", a.useful_relax.mean, a.stale_relax.mean, a.epochs.mean
                    );
                }
                CellOutcome::Failed { error, .. } => {
                    let _ = writeln!(s, "{:<10} {:<8} {:>6} {}", c.algorithm, c.preset, "FAIL", error.lines().next().unwrap_or(""));
                }
            }
        }
        let passed = self.cells.iter().filter(|c| matches!(c.outcome, CellOutcome::Passed { .. })).count();
        let _ = write!(s, "{passed}/{} cells passed", self.cells.len());
        s
    }
}

/// Runs each cell through `runner`, recording failures and carrying on.
pub fn matrix_with<F>(base: &BenchSpec, cells: &[(OrderingSpec, Preset)], mut runner: F) -> MatrixReport
where
    F: FnMut(&BenchSpec) -> Result<BenchReport, BenchError>,
{
    let cells = cells
        .iter()
        .map(|&(ordering, preset)| {
            let spec = base.with_variant(ordering, preset);
            let outcome = match runner(&spec) {
                Ok(report) => CellOutcome::Passed { report },
                Err(e) => CellOutcome::Failed {
                    exit_code: e.exit_code(),
                    error: e.to_string(),
                },
            };
            MatrixCell {
                algorithm: ordering.to_string(),
                preset: preset.name().to_string(),
                outcome,
            }
        })
        .collect();
    MatrixReport { cells }
}

/// Loads the graph once and runs every cell on it.
pub fn matrix(base: &BenchSpec, cells: &[(OrderingSpec, Preset)]) -> Result<MatrixReport, BenchError> {
    let input = load_graph(&base.input)?;
    let sources = resolve_sources(&base.sources, &input.graph, base.seed)?;
    let mut oracle = OracleCache::default();
    Ok(matrix_with(base, cells, |spec| run_on_graph(spec, &input, &sources, &mut oracle)))
}
