//! Per-item execution records, written as JSON lines.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::model::WorkItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub item: WorkItem,
    /// Root class key of `item`.
    pub class_key: u64,
    /// Key of the class being drained when `item` was generated (`None` for the seed).
    pub parent_key: Option<u64>,
    /// Index of the epoch the item was processed in.
    pub epoch: u64,
    pub worker: u32,
    pub partition: u32,
    /// Partition of the worker that generated the item.
    pub origin_partition: Option<u32>,
    /// Nanoseconds since the start of the run.
    pub t_start: u64,
    pub t_end: u64,
    pub useful: bool,
    /// Per-worker sequence number of the drain call that handed out the item.
    pub drain: u64,
    /// Key under the annotation of the ordered queue the item was drained from.
    pub local_key: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> std::io::Result<Trace> {
        let mut records = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line)?);
        }
        Ok(Trace { records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trip() {
        let rec = TraceRecord {
            item: WorkItem::with_level(3, 10, 2),
            class_key: 2,
            parent_key: Some(1),
            epoch: 1,
            worker: 0,
            partition: 0,
            origin_partition: None,
            t_start: 5,
            t_end: 9,
            useful: true,
            drain: 4,
            local_key: Some(10),
        };
        let trace = Trace {
            records: vec![rec, TraceRecord { item: WorkItem::new(1, 1), ..rec }],
        };
        let mut buf = Vec::new();
        trace.write_jsonl(&mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), 2);
        assert_eq!(Trace::read_jsonl(&buf[..]).unwrap(), trace);
    }
}
