use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_csr, Graph, GraphError, RawEdge};
use crate::Weight;

/// Recursive-matrix generator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmatParams {
    /// `2^scale` vertices.
    pub scale: u32,
    /// `edge_factor * 2^scale` directed edges.
    pub edge_factor: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub wmin: Weight,
    pub wmax: Weight,
    pub seed: u64,
}

impl RmatParams {
    /// Graph500 BFS-style generator: A=0.57, B=C=0.19, D=0.05, weights 1..=100.
    pub fn rmat1(scale: u32, edge_factor: u32, seed: u64) -> Self {
        RmatParams {
            scale,
            edge_factor,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            d: 0.05,
            wmin: 1,
            wmax: 100,
            seed,
        }
    }

    /// Proposed Graph500 SSSP-style generator: A=0.50, B=C=0.1, D=0.3, weights 1..=255.
    pub fn rmat2(scale: u32, edge_factor: u32, seed: u64) -> Self {
        RmatParams {
            scale,
            edge_factor,
            a: 0.50,
            b: 0.10,
            c: 0.10,
            d: 0.30,
            wmin: 1,
            wmax: 255,
            seed,
        }
    }

    pub fn vertex_count(&self) -> usize {
        1usize << self.scale
    }

    pub fn edge_count(&self) -> usize {
        self.edge_factor as usize * self.vertex_count()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidRmat(msg));
        if self.scale == 0 || self.edge_factor == 0 {
            return bad("scale and edge factor must be positive".into());
        }
        if self.scale > 31 {
            return bad(format!("scale {} exceeds 31", self.scale));
        }
        for (name, p) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("probability {name}={p} outside [0, 1]"));
            }
        }
        let sum = self.a + self.b + self.c + self.d;
        if (sum - 1.0).abs() > 1e-9 {
            return bad(format!("probabilities sum to {sum}, expected 1"));
        }
        if self.wmin < 1 {
            return bad("wmin must be at least 1".into());
        }
        if self.wmin > self.wmax {
            return bad(format!("wmin {} > wmax {}", self.wmin, self.wmax));
        }
        Ok(())
    }
}

/// Draws the edge list: every edge descends the adjacency matrix
/// independently, one quadrant per bit. Duplicates and self-loops are kept.
pub fn rmat_edges(params: &RmatParams) -> Result<Vec<RawEdge>, GraphError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let ab = params.a + params.b;
    let abc = ab + params.c;
    let mut edges = Vec::with_capacity(params.edge_count());
    for _ in 0..params.edge_count() {
        let (mut src, mut dst) = (0u64, 0u64);
        for _ in 0..params.scale {
            let r: f64 = rng.gen();
            let (row, col) = if r < params.a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            src = (src << 1) | row;
            dst = (dst << 1) | col;
        }
        let w = rng.gen_range(params.wmin..=params.wmax);
        edges.push((src, dst, w as i64));
    }
    Ok(edges)
}

pub fn generate_rmat(params: &RmatParams) -> Result<Graph, GraphError> {
    let edges = rmat_edges(params)?;
    build_csr(&edges, params.vertex_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rmat1_counts_and_weights() {
        let g = generate_rmat(&RmatParams::rmat1(4, 16, 7)).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.edge_count(), 256);
        assert!(g.weights().iter().all(|&w| (1..=100).contains(&w)));
    }

    #[test]
    fn degenerate_size() {
        assert!(generate_rmat(&RmatParams::rmat1(0, 16, 1)).is_err());
        assert!(generate_rmat(&RmatParams::rmat1(1, 0, 1)).is_err());
        let g = generate_rmat(&RmatParams::rmat1(1, 1, 1)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 2));
    }

    #[test]
    fn replay_is_identical() {
        let p = RmatParams::rmat2(8, 8, 42);
        assert_eq!(rmat_edges(&p).unwrap(), rmat_edges(&p).unwrap());
        let other = RmatParams { seed: 43, ..p };
        assert_ne!(rmat_edges(&p).unwrap(), rmat_edges(&other).unwrap());
    }

    #[test]
    fn rejects_invalid_params() {
        let p = RmatParams::rmat1(4, 4, 0);
        assert!(RmatParams { a: 0.6, ..p }.validate().is_err());
        assert!(RmatParams { wmin: 0, ..p }.validate().is_err());
        assert!(RmatParams { wmin: 9, wmax: 3, ..p }.validate().is_err());
        assert!(RmatParams { scale: 40, ..p }.validate().is_err());
        assert!(RmatParams::rmat2(4, 4, 0).validate().is_ok());
    }

    #[test]
    fn top_level_quadrant_frequency_tracks_a() {
        // 128 * 2^10 = 131072 first-level quadrant draws.
        let p = RmatParams::rmat1(10, 128, 99);
        let g = generate_rmat(&p).unwrap();
        let half = (g.vertex_count() / 2) as u32;
        let top_left = g.edges().filter(|&(u, v, _)| u < half && v < half).count();
        let frac = top_left as f64 / g.edge_count() as f64;
        assert!((frac - p.a).abs() < 0.02, "top-left fraction {frac}");
    }
}
