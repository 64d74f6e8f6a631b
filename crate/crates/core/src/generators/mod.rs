//! Synthetic graphs and the analytic distribution of the one-round
//! propagating estimate on sparse random graphs.

mod erdos_renyi;
mod pmf;
mod shells;
mod trees;

pub use erdos_renyi::gen_erdos_renyi;
pub use pmf::{
    analytic_khat1_pmf, analytic_khat1_pmf_with_tolerance, default_d_max, Khat1Pmf,
    DEFAULT_TAIL_TOLERANCE,
};
pub use shells::gen_shell_distribution;
pub use trees::{gen_complete_ary_tree, gen_tree_prime};

pub use crate::cores::ShellDistribution;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded generator used by every randomized routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
