//! Text loaders: whitespace edge lists and DIMACS shortest-path `.gr` files.

use std::collections::HashMap;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_csr, Graph, GraphError, RawEdge};
use crate::Weight;

/// How to fill in weights for edge-list lines that carry none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPolicy {
    Fixed(Weight),
    /// Uniform integers in `[wmin, wmax]`, drawn in line order from `seed`.
    Uniform { wmin: Weight, wmax: Weight, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    pub weights: WeightPolicy,
    /// Add the reverse of every edge (undirected input).
    pub symmetrize: bool,
    /// Map arbitrary ids to dense ids in order of first appearance.
    pub relabel: bool,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        EdgeListOptions {
            weights: WeightPolicy::Fixed(1),
            symmetrize: false,
            relabel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[dense_id]` is the id found in the input, when relabeling was on.
    pub labels: Option<Vec<u64>>,
}

fn parse_field<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {what} {tok:?}"),
    })
}

/// Reads `src dst [weight]` lines. Lines starting with `#` and blank lines
/// are skipped. Without relabeling the vertex count is `max id + 1`.
pub fn load_edge_list<R: BufRead>(
    reader: R,
    options: EdgeListOptions,
) -> Result<LoadedGraph, GraphError> {
    let mut rng = match options.weights {
        WeightPolicy::Uniform { wmin, wmax, seed } => {
            if wmin > wmax {
                return Err(GraphError::Parse {
                    line: 0,
                    message: format!("weight range {wmin}..={wmax} is empty"),
                });
            }
            Some(ChaCha8Rng::seed_from_u64(seed))
        }
        WeightPolicy::Fixed(_) => None,
    };
    let mut edges: Vec<RawEdge> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("expected 2 or 3 fields, found {}", fields.len()),
            });
        }
        let src: u64 = parse_field(fields[0], lineno, "source")?;
        let dst: u64 = parse_field(fields[1], lineno, "target")?;
        let weight: i64 = match (fields.get(2), options.weights, rng.as_mut()) {
            (Some(tok), _, _) => parse_field(tok, lineno, "weight")?,
            (None, WeightPolicy::Fixed(w), _) => w as i64,
            (None, WeightPolicy::Uniform { wmin, wmax, .. }, Some(rng)) => {
                rng.gen_range(wmin..=wmax) as i64
            }
            (None, WeightPolicy::Uniform { .. }, None) => unreachable!(),
        };
        edges.push((src, dst, weight));
    }

    let labels = if options.relabel {
        let mut dense: HashMap<u64, u64> = HashMap::new();
        let mut labels = Vec::new();
        for e in edges.iter_mut() {
            for id in [&mut e.0, &mut e.1] {
                *id = *dense.entry(*id).or_insert_with(|| {
                    labels.push(*id);
                    labels.len() as u64 - 1
                });
            }
        }
        Some(labels)
    } else {
        None
    };
    let vertex_count = match &labels {
        Some(l) => l.len(),
        None => edges
            .iter()
            .map(|&(s, d, _)| s.max(d) + 1)
            .max()
            .unwrap_or(0) as usize,
    };
    if options.symmetrize {
        let n = edges.len();
        for i in 0..n {
            let (s, d, w) = edges[i];
            if s != d {
                edges.push((d, s, w));
            }
        }
    }
    Ok(LoadedGraph {
        graph: build_csr(&edges, vertex_count)?,
        labels,
    })
}

/// Reads a DIMACS `.gr` file (`p sp n m`, `a u v w` with 1-based ids).
pub fn load_dimacs_gr<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<RawEdge> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: "duplicate problem line".into(),
                    });
                }
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 || rest[0] != "sp" {
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: "expected `p sp <n> <m>`".into(),
                    });
                }
                let n = parse_field(rest[1], lineno, "vertex count")?;
                let m: usize = parse_field(rest[2], lineno, "arc count")?;
                edges.reserve(m);
                header = Some((n, m));
            }
            Some("a") => {
                let (n, _) = header.ok_or(GraphError::MissingProblemLine)?;
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 {
                    return Err(GraphError::Parse {
                        line: lineno,
                        message: "expected `a <u> <v> <w>`".into(),
                    });
                }
                let u: u64 = parse_field(rest[0], lineno, "arc tail")?;
                let v: u64 = parse_field(rest[1], lineno, "arc head")?;
                let w: i64 = parse_field(rest[2], lineno, "arc weight")?;
                for id in [u, v] {
                    if id == 0 || id > n as u64 {
                        return Err(GraphError::Parse {
                            line: lineno,
                            message: format!("vertex {id} outside 1..={n}"),
                        });
                    }
                }
                edges.push((u - 1, v - 1, w));
            }
            Some(other) => {
                return Err(GraphError::Parse {
                    line: lineno,
                    message: format!("unknown line type {other:?}"),
                })
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingProblemLine)?;
    if edges.len() != m {
        return Err(GraphError::ArcCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    build_csr(&edges, n)
}
