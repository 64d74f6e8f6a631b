#![allow(dead_code)]

use corescope::generators::gen_erdos_renyi;
use corescope::Graph;
use proptest::prelude::*;

/// Small graphs from explicit edge lists, including loops and repeats.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |edges| {
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Seeded Erdős–Rényi graphs with mean degree between 1 and 6.
pub fn er_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 1.0f64..6.0, any::<u64>()).prop_map(|(n, d, seed)| {
        gen_erdos_renyi(n, (d / (n - 1) as f64).min(1.0), seed).unwrap()
    })
}

pub fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    prop_oneof![small_graph(max_n), er_graph(max_n)]
}
