use std::io::{self, Write};
use std::process::ExitCode;

use agm_bench::spec::{InputSpec, SourceSpec};
use agm_bench::{emit_report, matrix, paper_grid, parse_args, run_bench, work_trend, BenchError, BenchSpec, Mode, OutputFormat, TrendSpec};

fn main() -> ExitCode {
    let code = match parse_args(std::env::args_os()).and_then(|spec| execute(&spec)) {
        Ok(code) => code,
        Err(BenchError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(e) => {
            eprintln!("agm-bench: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn execute(spec: &BenchSpec) -> Result<i32, BenchError> {
    let stdout = io::stdout();
    match spec.mode {
        Mode::Single => {
            let report = run_bench(spec)?;
            emit_report(&[report], spec.output, stdout.lock())?;
            Ok(0)
        }
        Mode::Matrix { delta, k } => {
            let result = matrix(spec, &paper_grid(delta, k))?;
            emit_report(&result.reports(), spec.output, stdout.lock())?;
            eprintln!("{}", result.summary_table());
            Ok(result.exit_code())
        }
        Mode::Trend { graphs } => {
            let InputSpec::Rmat(template) = spec.input else {
                return Err(BenchError::Usage("--trend needs a generated graph".into()));
            };
            let SourceSpec::Random(sources_per_graph) = spec.sources else {
                return Err(BenchError::Usage("--trend picks its own sources; use --sources N".into()));
            };
            let report = work_trend(&TrendSpec {
                template,
                graphs,
                sources_per_graph,
                topology: spec.topology,
                verify: spec.verify,
            })?;
            let mut out = stdout.lock();
            match spec.output {
                OutputFormat::Json => serde_json::to_writer_pretty(&mut out, &report)
                    .map_err(|e| BenchError::Output(e.to_string()))?,
                OutputFormat::Csv => write!(out, "{report}").map_err(|e| BenchError::Output(e.to_string()))?,
            }
            writeln!(out).map_err(|e| BenchError::Output(e.to_string()))?;
            Ok(0)
        }
    }
}
