use rand::Rng;

use super::seeded_rng;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// `G(n, p)`: every unordered pair is an edge independently with probability
/// `p`.
///
/// Pairs are visited in the order `(1,0), (2,0), (2,1), (3,0), ...` and the
/// gap to the next edge is drawn from a geometric distribution, so the
/// expected cost is `O(n + m)`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::argument(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v, w));
            }
        }
        return Graph::from_edges(n, edges);
    }
    if p > 0.0 && n > 1 {
        let mut rng = seeded_rng(seed);
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.gen();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + if skip.is_finite() { skip as i64 } else { i64::MAX / 4 };
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    Graph::from_edges(n, edges)
}
