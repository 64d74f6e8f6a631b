mod common;

use common::er_graph;
use corescope::exposure::{
    brute_force_exposure_oracle, degree_exposure_levels, degree_exposure_prob, exposure_profile,
    monte_carlo_core_exposure_all, neighbor_degree_exposure_prob,
    neighbor_degree_exposure_unpruned, pruned_degree_exposure_prob, three_net_clustering,
    ExposureProfile, NeighborDegreeOptions, OracleKind,
};
use corescope::Graph;
use proptest::prelude::*;

fn clustered() -> impl Strategy<Value = (Graph, u64, bool)> {
    (er_graph(40), any::<u64>(), any::<bool>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn three_net_invariants((g, seed, biased) in clustered()) {
        let c = three_net_clustering(&g, seed, biased);
        prop_assert!(c.check_three_net(&g).is_ok());
    }

    #[test]
    fn profile_weights_sum_to_degree((g, seed, biased) in clustered(), p in 0.05f64..0.95) {
        let c = three_net_clustering(&g, seed, biased);
        for v in 0..g.n() {
            let pr = exposure_profile(&g, &c, v, p).unwrap();
            prop_assert_eq!(pr.w.iter().sum::<usize>(), g.degree(v));
            prop_assert_eq!(*pr.clusters.last().unwrap(), c.cluster_of[v]);
        }
    }

    #[test]
    fn recursion_matches_oracle((g, seed, biased) in clustered(), p in 0.05f64..0.95, kappa in 0usize..6) {
        let c = three_net_clustering(&g, seed, biased);
        for v in 0..g.n() {
            let dp = degree_exposure_prob(&exposure_profile(&g, &c, v, p).unwrap(), kappa).probability;
            let bf = brute_force_exposure_oracle(&g, &c, v, kappa, p, OracleKind::Degree).unwrap();
            prop_assert!((dp - bf).abs() <= 1e-12, "v {} dp {} oracle {}", v, dp, bf);
        }
    }

    #[test]
    fn levels_monotone(w in prop::collection::vec(0usize..6, 1..10), p in 0.01f64..0.99) {
        let pr = ExposureProfile::from_counts(0, w, p).unwrap();
        let levels = degree_exposure_levels(&pr, pr.degree() + 2);
        prop_assert_eq!(levels[0], p);
        prop_assert!(levels.windows(2).all(|x| x[1] <= x[0]));
        prop_assert_eq!(levels[pr.degree() + 1], 0.0);
        prop_assert!(levels.iter().all(|&q| (0.0..=p).contains(&q)));
    }

    #[test]
    fn neighbor_degree_matches_oracle_and_bounds((g, seed, biased) in clustered(), p in 0.05f64..0.95, kappa in 0usize..5) {
        let c = three_net_clustering(&g, seed, biased);
        let opts = NeighborDegreeOptions::default();
        for v in 0..g.n() {
            let Ok(nd) = neighbor_degree_exposure_prob(&g, &c, v, kappa, p) else { continue };
            let full = neighbor_degree_exposure_unpruned(&g, &c, v, kappa, p, &opts).unwrap();
            prop_assert_eq!(nd.probability.to_bits(), full.probability.to_bits());
            if let Ok(bf) = brute_force_exposure_oracle(&g, &c, v, kappa, p, OracleKind::NeighborDegree) {
                prop_assert!((nd.probability - bf).abs() <= 1e-12);
            }
            let deg = degree_exposure_prob(&exposure_profile(&g, &c, v, p).unwrap(), kappa).probability;
            let pruned = pruned_degree_exposure_prob(&g, &c, v, kappa, p).unwrap().probability;
            prop_assert!(nd.probability <= deg + 1e-12);
            prop_assert!(pruned <= deg);
            prop_assert!(nd.probability <= pruned + 1e-12);
        }
    }

    #[test]
    fn core_exposure_below_neighbor_degree((g, seed, biased) in clustered(), kappa in 1usize..4) {
        let p = 0.4;
        let trials = 400;
        let c = three_net_clustering(&g, seed, biased);
        let mc = monte_carlo_core_exposure_all(&g, &c, kappa, p, trials, seed).unwrap();
        for v in 0..g.n() {
            if let Ok(core) = brute_force_exposure_oracle(&g, &c, v, kappa, p, OracleKind::Core) {
                let nd = brute_force_exposure_oracle(&g, &c, v, kappa, p, OracleKind::NeighborDegree).unwrap();
                prop_assert!(core <= nd + 1e-12);
                let se = (core * (1.0 - core) / trials as f64).sqrt();
                prop_assert!((mc.estimate(v, kappa) - core).abs() <= 5.0 * se + 1e-9);
            }
        }
    }
}
