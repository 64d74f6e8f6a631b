use serde::Serialize;

use super::{check_probability, pattern_probability, Clustering};
use crate::cores::core_decomposition;
use crate::error::{Error, Result};
use crate::graph::{components, induced_subgraph, Graph, VertexId};

/// Largest number of relevant clusters the oracle enumerates.
pub const ORACLE_CLUSTER_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Degree,
    NeighborDegree,
    Core,
}

fn degree_exposed(g: &Graph, treated: &[bool], u: VertexId, kappa: usize) -> bool {
    treated[u] && g.neighbors(u).iter().filter(|&&x| treated[x]).count() >= kappa
}

/// Exact exposure probability by summing over every treatment assignment of
/// the clusters that can influence the event.
///
/// The relevant clusters are those meeting `{v} ∪ N_1(v)` for degree
/// exposure, `N_2(v)` for neighbour-degree exposure and the connected
/// component of `v` for core exposure. Each assignment is evaluated on the
/// graph directly; for core exposure the treated subgraph is decomposed
/// from scratch.
pub fn brute_force_exposure_oracle(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
    kind: OracleKind,
) -> Result<f64> {
    check_probability(p)?;
    g.check_vertex(v)?;
    clustering.check_graph(g)?;

    let region: Vec<VertexId> = match kind {
        OracleKind::Degree => std::iter::once(v).chain(g.neighbors(v).iter().copied()).collect(),
        OracleKind::NeighborDegree => {
            let mut r = vec![v];
            for &u in g.neighbors(v) {
                r.push(u);
                r.extend_from_slice(g.neighbors(u));
            }
            r
        }
        OracleKind::Core => {
            let (comp, _) = components(g);
            (0..g.n()).filter(|&u| comp[u] == comp[v]).collect()
        }
    };
    let mut relevant: Vec<usize> = region.iter().map(|&u| clustering.cluster_of[u]).collect();
    relevant.sort_unstable();
    relevant.dedup();
    if relevant.len() > ORACLE_CLUSTER_LIMIT {
        return Err(Error::Refused(format!(
            "oracle limited to {ORACLE_CLUSTER_LIMIT} clusters, vertex {v} needs {}",
            relevant.len()
        )));
    }
    let mut members: Vec<VertexId> = Vec::new();
    for &c in &relevant {
        members.extend_from_slice(&clustering.clusters[c]);
    }

    let k = relevant.len();
    let mut treated = vec![false; g.n()];
    let mut total = 0.0;
    for mask in 0u32..(1u32 << k) {
        for (i, &c) in relevant.iter().enumerate() {
            let on = mask >> i & 1 == 1;
            for &u in &clustering.clusters[c] {
                treated[u] = on;
            }
        }
        let hit = match kind {
            OracleKind::Degree => degree_exposed(g, &treated, v, kappa),
            OracleKind::NeighborDegree => {
                treated[v]
                    && g.neighbors(v)
                        .iter()
                        .filter(|&&u| degree_exposed(g, &treated, u, kappa))
                        .count()
                        >= kappa
            }
            OracleKind::Core => {
                treated[v] && {
                    let on: Vec<VertexId> =
                        members.iter().copied().filter(|&u| treated[u]).collect();
                    let sub = induced_subgraph(g, &on)?;
                    let d = core_decomposition(&sub.graph);
                    d.core[sub.local_id(v).unwrap()] >= kappa
                }
            }
        };
        if hit {
            total += pattern_probability(p, mask.count_ones() as usize, k);
        }
    }
    Ok(total)
}
