use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::seeded_rng;
use crate::graph::{BfsScratch, Graph, VertexId, UNSEEN};

/// A partition of the vertices into clusters, each with a designated centre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clustering {
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Vec<VertexId>>,
    pub centers: Vec<VertexId>,
}

impl Clustering {
    /// Builds a clustering from a per-vertex assignment with ids `0..k`.
    /// The centre of each cluster is its smallest member.
    pub fn from_assignment(cluster_of: Vec<usize>) -> Result<Self> {
        let k = cluster_of.iter().copied().max().map_or(0, |c| c + 1);
        let mut clusters = vec![Vec::new(); k];
        for (v, &c) in cluster_of.iter().enumerate() {
            clusters[c].push(v);
        }
        if let Some(c) = clusters.iter().position(Vec::is_empty) {
            return Err(Error::argument(format!("cluster {c} has no members")));
        }
        let centers = clusters.iter().map(|m| m[0]).collect();
        Ok(Clustering {
            cluster_of,
            clusters,
            centers,
        })
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.cluster_of.len() != g.n() {
            return Err(Error::argument(format!(
                "clustering covers {} vertices, graph has {}",
                self.cluster_of.len(),
                g.n()
            )));
        }
        Ok(())
    }

    /// Verifies the partition and that every vertex is within two hops of
    /// its cluster's centre.
    pub fn check_three_net(&self, g: &Graph) -> Result<()> {
        self.check_graph(g)?;
        let mut seen = vec![false; g.n()];
        for (c, members) in self.clusters.iter().enumerate() {
            for &v in members {
                if seen[v] || self.cluster_of[v] != c {
                    return Err(Error::argument(format!("vertex {v} not in exactly one cluster")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::argument(format!("vertex {v} uncovered")));
        }
        let mut bfs = BfsScratch::new(g.n());
        for (c, members) in self.clusters.iter().enumerate() {
            bfs.run(g, self.centers[c], 2);
            if let Some(&v) = members.iter().find(|&&v| bfs.dist(v) == UNSEEN) {
                return Err(Error::argument(format!(
                    "vertex {v} farther than 2 hops from centre {}",
                    self.centers[c]
                )));
            }
        }
        Ok(())
    }
}

/// Grows radius-2 balls around centres picked from the uncovered vertices
/// until every vertex is covered. Vertices already covered keep their
/// cluster.
///
/// Centres are chosen uniformly, or with probability proportional to degree
/// when `degree_biased` is set (isolated vertices then come last, in random
/// order). Both are realized as a single random priority order over all
/// vertices; skipping covered vertices leaves the right conditional law over
/// the uncovered ones.
pub fn three_net_clustering(g: &Graph, seed: u64, degree_biased: bool) -> Clustering {
    let n = g.n();
    let mut rng = seeded_rng(seed);
    let order: Vec<VertexId> = if degree_biased {
        // Efraimidis-Spirakis keys ln(u) / w: larger keys are drawn earlier
        let mut keyed: Vec<(f64, VertexId)> = (0..n)
            .map(|v| {
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let w = g.degree(v) as f64;
                let key = if w > 0.0 { u.ln() / w } else { f64::NEG_INFINITY };
                (key, v)
            })
            .collect();
        let mut isolated: Vec<VertexId> = keyed
            .iter()
            .filter(|(k, _)| *k == f64::NEG_INFINITY)
            .map(|&(_, v)| v)
            .collect();
        keyed.retain(|(k, _)| *k != f64::NEG_INFINITY);
        keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        isolated.shuffle(&mut rng);
        keyed.into_iter().map(|(_, v)| v).chain(isolated).collect()
    } else {
        let mut order: Vec<VertexId> = (0..n).collect();
        order.shuffle(&mut rng);
        order
    };

    let mut cluster_of = vec![UNSEEN; n];
    let mut clusters = Vec::new();
    let mut centers = Vec::new();
    let mut bfs = BfsScratch::new(n);
    for center in order {
        if cluster_of[center] != UNSEEN {
            continue;
        }
        let id = clusters.len();
        bfs.run(g, center, 2);
        let members: Vec<VertexId> = bfs
            .order
            .iter()
            .copied()
            .filter(|&u| cluster_of[u] == UNSEEN)
            .collect();
        for &u in &members {
            cluster_of[u] = id;
        }
        clusters.push(members);
        centers.push(center);
    }
    Clustering {
        cluster_of,
        clusters,
        centers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_erdos_renyi;

    #[test]
    fn single_vertex() {
        let g = Graph::from_edges(1, []).unwrap();
        let c = three_net_clustering(&g, 0, false);
        assert_eq!(c.clusters, vec![vec![0]]);
        assert!(c.check_three_net(&g).is_ok());
    }

    #[test]
    fn path_centred_in_middle_is_one_cluster() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let seed = (0..1000u64)
            .find(|&s| three_net_clustering(&g, s, false).centers[0] == 2)
            .expect("some seed picks the middle vertex first");
        let c = three_net_clustering(&g, seed, false);
        assert_eq!(c.len(), 1);
        assert_eq!(c.clusters[0].len(), 5);
    }

    #[test]
    fn invariants_hold_on_random_graphs() {
        for seed in 0..20 {
            let g = gen_erdos_renyi(200, 0.02, seed).unwrap();
            for biased in [false, true] {
                let c = three_net_clustering(&g, seed, biased);
                c.check_three_net(&g).unwrap();
                assert_eq!(c, three_net_clustering(&g, seed, biased));
            }
        }
    }

    #[test]
    fn degree_bias_prefers_hubs() {
        // star with 20 leaves: the hub should be picked first almost always
        let g = Graph::from_edges(21, (1..=20).map(|i| (0, i))).unwrap();
        let hub_first = (0..200u64)
            .filter(|&s| three_net_clustering(&g, s, true).centers[0] == 0)
            .count();
        let uniform_first = (0..200u64)
            .filter(|&s| three_net_clustering(&g, s, false).centers[0] == 0)
            .count();
        // biased: P = 20/40; uniform: P = 1/21
        assert!(hub_first > 70, "{hub_first}");
        assert!(uniform_first < 30, "{uniform_first}");
    }

    #[test]
    fn from_assignment_validates() {
        let c = Clustering::from_assignment(vec![1, 0, 1]).unwrap();
        assert_eq!(c.clusters, vec![vec![1], vec![0, 2]]);
        assert_eq!(c.centers, vec![1, 0]);
        assert!(Clustering::from_assignment(vec![0, 2]).is_err());
    }
}
