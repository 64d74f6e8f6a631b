use serde::Serialize;

use super::{check_probability, Clustering, Diagnostics, ExposureKind, ExposureResult};
use crate::error::Result;
use crate::graph::{Graph, VertexId};

/// Inputs to the degree-exposure recursion for one vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExposureProfile {
    pub vertex: VertexId,
    /// Number of clusters meeting `{v} ∪ N_1(v)`.
    pub s: usize,
    /// `w[i]` edges from `v` into `clusters[i]`; the last entry is `v`'s own
    /// cluster.
    pub w: Vec<usize>,
    pub clusters: Vec<usize>,
    pub p: f64,
}

impl ExposureProfile {
    /// A profile from raw counts, own cluster last. Cluster ids are
    /// positional.
    pub fn from_counts(vertex: VertexId, w: Vec<usize>, p: f64) -> Result<Self> {
        check_probability(p)?;
        if w.is_empty() {
            return Err(crate::error::Error::argument(
                "profile needs at least the vertex's own cluster",
            ));
        }
        Ok(ExposureProfile {
            vertex,
            s: w.len(),
            clusters: (0..w.len()).collect(),
            w,
            p,
        })
    }

    pub fn degree(&self) -> usize {
        self.w.iter().sum()
    }
}

/// Clusters meeting `{v} ∪ N_1(v)` with edge counts from `v`; foreign
/// clusters ascend by id and `v`'s own cluster comes last.
pub fn exposure_profile(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    p: f64,
) -> Result<ExposureProfile> {
    check_probability(p)?;
    g.check_vertex(v)?;
    clustering.check_graph(g)?;
    Ok(profile_unchecked(g, clustering, v, p, |_| true))
}

/// Builds the profile counting only neighbours accepted by `keep`. Foreign
/// clusters stay listed even when all their edges are filtered out.
fn profile_unchecked(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    p: f64,
    keep: impl Fn(VertexId) -> bool,
) -> ExposureProfile {
    let own = clustering.cluster_of[v];
    let mut foreign: Vec<usize> = g
        .neighbors(v)
        .iter()
        .map(|&u| clustering.cluster_of[u])
        .filter(|&c| c != own)
        .collect();
    foreign.sort_unstable();
    foreign.dedup();
    let mut w = vec![0usize; foreign.len() + 1];
    for &u in g.neighbors(v) {
        if !keep(u) {
            continue;
        }
        let c = clustering.cluster_of[u];
        let idx = if c == own {
            foreign.len()
        } else {
            foreign.binary_search(&c).unwrap()
        };
        w[idx] += 1;
    }
    let mut clusters = foreign;
    clusters.push(own);
    ExposureProfile {
        vertex: v,
        s: clusters.len(),
        w,
        clusters,
        p,
    }
}

/// Degree-exposure probabilities for every level `0..=kappa_max`.
///
/// `f(j, T)` is the probability that the first `j` foreign clusters supply
/// at least `T` treated neighbours; `f(0, T) = 1[T <= 0]` and
/// `f(j, T) = p f(j-1, T - w_j) + (1-p) f(j-1, T)`. Since the own cluster
/// must be treated, level `i` has probability `p f(s-1, i - w_s)`.
pub fn degree_exposure_levels(profile: &ExposureProfile, kappa_max: usize) -> Vec<f64> {
    let p = profile.p;
    let (foreign, own) = profile.w.split_at(profile.s - 1);
    let own = own[0];
    // f[t] for t = 0..=kappa_max; negative targets clamp to t = 0
    let mut f: Vec<f64> = (0..=kappa_max).map(|t| if t == 0 { 1.0 } else { 0.0 }).collect();
    let mut next = f.clone();
    for &wj in foreign {
        for t in 0..=kappa_max {
            next[t] = p * f[t.saturating_sub(wj)] + (1.0 - p) * f[t];
        }
        std::mem::swap(&mut f, &mut next);
    }
    (0..=kappa_max)
        .map(|i| p * f[i.saturating_sub(own)])
        .collect()
}

pub fn degree_exposure_prob(profile: &ExposureProfile, kappa: usize) -> ExposureResult {
    let probability = degree_exposure_levels(profile, kappa)[kappa];
    ExposureResult {
        kind: ExposureKind::Degree,
        kappa,
        probability,
        diagnostics: Diagnostics::Recursion {
            clusters: profile.s,
        },
    }
}

/// Degree exposure with neighbours that can never be degree-exposed at this
/// level removed from `w`. Such neighbours cannot count toward
/// neighbour-degree exposure, so the result is still an upper bound on core
/// exposure and never exceeds the plain degree-exposure probability.
pub fn pruned_degree_exposure_prob(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
) -> Result<ExposureResult> {
    check_probability(p)?;
    g.check_vertex(v)?;
    clustering.check_graph(g)?;
    let hopeless: Vec<VertexId> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| {
            let pu = profile_unchecked(g, clustering, u, p, |_| true);
            degree_exposure_levels(&pu, kappa)[kappa] == 0.0
        })
        .collect();
    let profile = profile_unchecked(g, clustering, v, p, |u| !hopeless.contains(&u));
    Ok(ExposureResult {
        kind: ExposureKind::PrunedDegree,
        kappa,
        probability: degree_exposure_levels(&profile, kappa)[kappa],
        diagnostics: Diagnostics::Pruning {
            removed_neighbors: hopeless.len(),
        },
    })
}
