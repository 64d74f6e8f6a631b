//! Exposure probabilities for cluster-randomized network experiments.
//!
//! Clusters are treated independently with probability `p`; every vertex of
//! a treated cluster is treated. For a vertex `v` and level `kappa`:
//!
//! * degree exposure: `v` and at least `kappa` of its neighbours are treated;
//! * neighbour-degree exposure: `v` is treated and at least `kappa` of its
//!   neighbours are themselves degree-exposed at level `kappa`;
//! * core exposure: `v` lies in the `kappa`-core of the treated subgraph.
//!
//! Core exposure implies neighbour-degree exposure, which implies degree
//! exposure, so the exact values computed here bound the core-exposure
//! probability from above.

mod clustering;
mod degree;
mod monte_carlo;
mod neighbor;
mod oracle;

pub use clustering::{three_net_clustering, Clustering};
pub use degree::{
    degree_exposure_levels, degree_exposure_prob, exposure_profile, pruned_degree_exposure_prob,
    ExposureProfile,
};
pub use monte_carlo::{
    monte_carlo_core_exposure, monte_carlo_core_exposure_all, trial_rng, MonteCarloTable,
};
pub use neighbor::{
    neighbor_degree_exposure_prob, neighbor_degree_exposure_unpruned,
    neighbor_degree_exposure_with_options, NeighborDegreeOptions,
    DEFAULT_CLUSTER_LIMIT,
};
pub use oracle::{brute_force_exposure_oracle, OracleKind, ORACLE_CLUSTER_LIMIT};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExposureKind {
    Degree,
    NeighborDegree,
    PrunedDegree,
    CoreMonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Diagnostics {
    /// Closed-form dynamic program; nothing to report beyond its size.
    Recursion { clusters: usize },
    /// Subset enumeration over the foreign clusters of the 2-hop ball.
    Enumeration {
        clusters: usize,
        /// Search nodes whose treated-neighbour counts were evaluated.
        explored: u64,
        /// Subsets skipped because even treating every undecided cluster
        /// could not reach the level.
        pruned: u64,
    },
    /// Neighbours dropped from the edge-count vector.
    Pruning { removed_neighbors: usize },
    MonteCarlo {
        trials: usize,
        hits: usize,
        std_error: f64,
        /// 95% normal-approximation half-width.
        half_width: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExposureResult {
    pub kind: ExposureKind,
    pub kappa: usize,
    pub probability: f64,
    pub diagnostics: Diagnostics,
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "treatment probability {p} outside (0, 1)"
        )))
    }
}

/// Probability of one particular assignment of `total` clusters in which
/// `treated` are treated: `p^treated (1-p)^(total-treated)`.
pub(crate) fn pattern_probability(p: f64, treated: usize, total: usize) -> f64 {
    p.powi(treated as i32) * (1.0 - p).powi((total - treated) as i32)
}
