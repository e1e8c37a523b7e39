use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::run::BenchReport;
use crate::spec::OutputFormat;
use crate::BenchError;

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 12] = [
    "graph",
    "|V|",
    "|E|",
    "workers",
    "algorithm",
    "preset",
    "mean_time_s",
    "sigma_time",
    "mean_useful_relax",
    "mean_stale_relax",
    "epochs",
    "messages_routed",
];

/// One summary line per configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub graph: String,
    #[serde(rename = "|V|")]
    pub vertices: usize,
    #[serde(rename = "|E|")]
    pub edges: usize,
    pub workers: usize,
    pub algorithm: String,
    pub preset: String,
    pub mean_time_s: f64,
    pub sigma_time: f64,
    pub mean_useful_relax: f64,
    pub mean_stale_relax: f64,
    pub epochs: f64,
    pub messages_routed: f64,
}

impl From<&BenchReport> for BenchRow {
    fn from(r: &BenchReport) -> Self {
        let a = &r.aggregate;
        BenchRow {
            graph: r.graph.clone(),
            vertices: r.vertices,
            edges: r.edges,
            workers: r.workers,
            algorithm: r.algorithm.clone(),
            preset: r.preset.clone(),
            mean_time_s: a.time_s.mean,
            sigma_time: a.time_s.sigma,
            mean_useful_relax: a.useful_relax.mean,
            mean_stale_relax: a.stale_relax.mean,
            epochs: a.epochs.mean,
            messages_routed: a.messages_routed.mean,
        }
    }
}

/// Writes one row per report. CSV always starts with the header; JSON is an
/// array of row objects with the same field names.
pub fn emit_report<W: Write>(reports: &[BenchReport], format: OutputFormat, out: W) -> Result<(), BenchError> {
    let rows: Vec<BenchRow> = reports.iter().map(BenchRow::from).collect();
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush().map_err(|e| BenchError::Output(e.to_string()))?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &rows).map_err(|e| BenchError::Output(e.to_string()))?;
            writeln!(out).map_err(|e| BenchError::Output(e.to_string()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::{Aggregate, MeanSigma};

    fn report() -> BenchReport {
        BenchReport {
            graph: "g".into(),
            vertices: 4,
            edges: 5,
            workers: 2,
            algorithm: "delta:3".into(),
            preset: "threadq".into(),
            verified: true,
            runs: Vec::new(),
            aggregate: Aggregate {
                time_s: MeanSigma { mean: 0.5, sigma: 0.25 },
                useful_relax: MeanSigma { mean: 4.0, sigma: 0.0 },
                stale_relax: MeanSigma { mean: 1.5, sigma: 0.0 },
                epochs: MeanSigma { mean: 3.0, sigma: 0.0 },
                ..Aggregate::default()
            },
        }
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        emit_report(&[], OutputFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));

        let mut buf = Vec::new();
        emit_report(&[report()], OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "g,4,5,2,delta:3,threadq,0.5,0.25,4.0,1.5,3.0,0.0");
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        emit_report(&[report()], OutputFormat::Json, &mut buf).unwrap();
        let rows: Vec<BenchRow> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(rows, vec![BenchRow::from(&report())]);
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["|V|"], 4);
    }
}
