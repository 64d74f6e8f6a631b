use serde::Serialize;

use super::{check_probability, pattern_probability, Clustering, Diagnostics, ExposureKind, ExposureResult};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, VertexId};

/// Default cap on the number of foreign clusters enumerated.
pub const DEFAULT_CLUSTER_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NeighborDegreeOptions {
    /// Instances with more foreign clusters in the 2-hop ball are refused.
    pub cluster_limit: usize,
}

impl Default for NeighborDegreeOptions {
    fn default() -> Self {
        NeighborDegreeOptions {
            cluster_limit: DEFAULT_CLUSTER_LIMIT,
        }
    }
}

/// A neighbour `u` of `v` in bit-mask form: the bit of its cluster and the
/// number of its edges into each cluster. The own cluster of `v` occupies
/// the highest bit and is always set.
struct Neighbor {
    bit: u32,
    edges: Vec<(u32, usize)>,
}

struct Instance {
    clusters: usize,
    neighbors: Vec<Neighbor>,
}

impl Instance {
    fn build(g: &Graph, clustering: &Clustering, v: VertexId) -> Self {
        let own = clustering.cluster_of[v];
        let mut bfs = BfsScratch::new(g.n());
        bfs.run(g, v, 2);
        let mut foreign: Vec<usize> = bfs
            .order
            .iter()
            .map(|&u| clustering.cluster_of[u])
            .filter(|&c| c != own)
            .collect();
        foreign.sort_unstable();
        foreign.dedup();
        let k = foreign.len() as u32;
        let bit_of = |c: usize| -> u32 {
            if c == own {
                k
            } else {
                foreign.binary_search(&c).unwrap() as u32
            }
        };
        let neighbors = g
            .neighbors(v)
            .iter()
            .map(|&u| {
                let mut edges: Vec<(u32, usize)> = Vec::new();
                for &x in g.neighbors(u) {
                    let b = bit_of(clustering.cluster_of[x]);
                    match edges.iter_mut().find(|e| e.0 == b) {
                        Some(e) => e.1 += 1,
                        None => edges.push((b, 1)),
                    }
                }
                Neighbor {
                    bit: bit_of(clustering.cluster_of[u]),
                    edges,
                }
            })
            .collect();
        Instance {
            clusters: foreign.len(),
            neighbors,
        }
    }

    /// Neighbours of `v` that are degree-exposed at level `kappa` when
    /// exactly the clusters in `treated` (plus the own cluster) are treated.
    fn exposed(&self, treated: u64, kappa: usize) -> usize {
        let treated = treated | (1u64 << self.clusters);
        self.neighbors
            .iter()
            .filter(|u| {
                treated >> u.bit & 1 == 1
                    && u
                        .edges
                        .iter()
                        .filter(|e| treated >> e.0 & 1 == 1)
                        .map(|e| e.1)
                        .sum::<usize>()
                        >= kappa
            })
            .count()
    }

    /// How much treating cluster `bit` can help, used to order the search.
    fn contribution(&self, bit: u32) -> usize {
        self.neighbors
            .iter()
            .map(|u| {
                usize::from(u.bit == bit)
                    + u.edges.iter().filter(|e| e.0 == bit).map(|e| e.1).sum::<usize>()
            })
            .sum()
    }
}

/// Satisfying subsets of the foreign clusters, counted by size.
struct Counts {
    by_size: Vec<u64>,
    explored: u64,
    pruned: u64,
}

impl Counts {
    fn probability(&self, p: f64) -> f64 {
        let total = self.by_size.len() - 1;
        self.by_size
            .iter()
            .enumerate()
            .map(|(t, &c)| c as f64 * p * pattern_probability(p, t, total))
            .sum()
    }
}

fn enumerate_all(inst: &Instance, kappa: usize) -> Counts {
    let k = inst.clusters;
    let mut by_size = vec![0u64; k + 1];
    for mask in 0..(1u64 << k) {
        if inst.exposed(mask, kappa) >= kappa {
            by_size[mask.count_ones() as usize] += 1;
        }
    }
    Counts {
        by_size,
        explored: 1u64 << k,
        pruned: 0,
    }
}

fn branch_and_bound(inst: &Instance, kappa: usize) -> Counts {
    let k = inst.clusters;
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.sort_by_key(|&b| (std::cmp::Reverse(inst.contribution(b)), b));
    let mut binom = vec![vec![0u64; k + 1]; k + 1];
    for r in 0..=k {
        binom[r][0] = 1;
        for j in 1..=r {
            binom[r][j] = binom[r - 1][j - 1] + binom[r - 1][j];
        }
    }
    let mut counts = Counts {
        by_size: vec![0; k + 1],
        explored: 0,
        pruned: 0,
    };
    // undecided[d] = mask of clusters order[d..]
    let mut undecided = vec![0u64; k + 1];
    for d in (0..k).rev() {
        undecided[d] = undecided[d + 1] | 1u64 << order[d];
    }
    let mut stack: Vec<(usize, u64, usize)> = vec![(0, 0, 0)];
    while let Some((depth, included, size)) = stack.pop() {
        counts.explored += 1;
        let rest = k - depth;
        if inst.exposed(included | undecided[depth], kappa) < kappa {
            counts.pruned += 1u64 << rest;
            continue;
        }
        if inst.exposed(included, kappa) >= kappa {
            for j in 0..=rest {
                counts.by_size[size + j] += binom[rest][j];
            }
            continue;
        }
        // depth < k here: with nothing undecided the two checks coincide
        let bit = order[depth];
        stack.push((depth + 1, included, size));
        stack.push((depth + 1, included | 1u64 << bit, size + 1));
    }
    counts
}

fn prepare(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    p: f64,
    opts: &NeighborDegreeOptions,
) -> Result<Instance> {
    check_probability(p)?;
    g.check_vertex(v)?;
    clustering.check_graph(g)?;
    let inst = Instance::build(g, clustering, v);
    let limit = opts.cluster_limit.min(62);
    if inst.clusters > limit {
        return Err(Error::Refused(format!(
            "vertex {v}: {} foreign clusters within two hops exceeds the limit of {limit}; use Monte Carlo core exposure instead",
            inst.clusters
        )));
    }
    Ok(inst)
}

fn result(inst: &Instance, counts: Counts, kappa: usize, p: f64) -> ExposureResult {
    ExposureResult {
        kind: ExposureKind::NeighborDegree,
        kappa,
        probability: counts.probability(p),
        diagnostics: Diagnostics::Enumeration {
            clusters: inst.clusters,
            explored: counts.explored,
            pruned: counts.pruned,
        },
    }
}

/// Probability that `v` is treated and at least `kappa` of its neighbours
/// are degree-exposed at level `kappa`.
///
/// Whether a neighbour `u` is exposed depends only on clusters meeting the
/// 2-hop ball of `v`, so the sum runs over subsets of those clusters other
/// than `v`'s own, which is always treated. The search is depth first,
/// trying inclusion before exclusion. Exposure only grows with the treated
/// set, so a branch is dropped when treating all undecided clusters still
/// falls short, and accepted wholesale when treating none already suffices.
pub fn neighbor_degree_exposure_prob(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
) -> Result<ExposureResult> {
    neighbor_degree_exposure_with_options(g, clustering, v, kappa, p, &NeighborDegreeOptions::default())
}

pub fn neighbor_degree_exposure_with_options(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
    opts: &NeighborDegreeOptions,
) -> Result<ExposureResult> {
    let inst = prepare(g, clustering, v, p, opts)?;
    let counts = branch_and_bound(&inst, kappa);
    Ok(result(&inst, counts, kappa, p))
}

/// Same quantity by visiting every subset; the reference for the pruned
/// search.
pub fn neighbor_degree_exposure_unpruned(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
    opts: &NeighborDegreeOptions,
) -> Result<ExposureResult> {
    let inst = prepare(g, clustering, v, p, opts)?;
    let counts = enumerate_all(&inst, kappa);
    Ok(result(&inst, counts, kappa, p))
}
