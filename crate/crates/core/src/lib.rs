//! Core decomposition of undirected graphs, local core-number estimators,
//! random graph generators and exposure probabilities for cluster-randomized
//! experiments.

pub mod cores;
pub mod error;
pub mod estimators;
pub mod exposure;
pub mod generators;
pub mod graph;

pub use cores::{core_decomposition, naive_core_oracle, shell_distribution, CoreDecomposition, ShellDistribution};
pub use error::{Error, Result};
pub use graph::{Graph, VertexId};
