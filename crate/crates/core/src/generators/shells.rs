use rand::seq::index::sample;
use rand::Rng;

use super::seeded_rng;
use crate::cores::ShellDistribution;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Random graph whose shell sizes are exactly `dist`.
///
/// Shells are added deepest first. Each new vertex of shell `i` whose degree
/// is still below `i` is joined to `i - d(v)` distinct vertices chosen
/// uniformly among all vertices present so far (including not-yet-processed
/// members of the same shell) that are not `v` and not already adjacent to
/// it. Vertex ids are assigned in insertion order, so shell `D` occupies the
/// lowest ids.
pub fn gen_shell_distribution(dist: &ShellDistribution, seed: u64) -> Result<Graph> {
    generate(dist, seed, None)
}

/// One record per vertex step: `(vertex, shell, degree before, edges added)`.
type Trace = Vec<(usize, usize, usize, usize)>;

fn generate(dist: &ShellDistribution, seed: u64, mut trace: Option<&mut Trace>) -> Result<Graph> {
    if dist.counts.last().copied().unwrap_or(0) == 0 {
        return Err(Error::argument(
            "shell distribution needs a non-empty deepest shell",
        ));
    }
    dist.check_feasible()?;
    let mut rng = seeded_rng(seed);
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(dist.total());
    let mut edges = Vec::new();
    let mut chosen = Vec::new();

    for shell in (1..=dist.degeneracy()).rev() {
        let first = adj.len();
        adj.resize(first + dist.count(shell), Vec::new());
        let present = adj.len();
        for v in first..present {
            let have = adj[v].len();
            if have >= shell {
                if let Some(t) = trace.as_deref_mut() {
                    t.push((v, shell, have, 0));
                }
                continue;
            }
            let need = shell - have;
            let available = present - 1 - have;
            if available < need {
                return Err(Error::Generation {
                    shell,
                    message: format!(
                        "vertex {v} needs {need} new neighbours but only {available} are available"
                    ),
                });
            }
            chosen.clear();
            if present >= 4 * (have + need + 1) {
                // sparse case: rejection sampling over all present vertices
                while chosen.len() < need {
                    let u = rng.gen_range(0..present);
                    if u != v && !adj[v].contains(&u) && !chosen.contains(&u) {
                        chosen.push(u);
                    }
                }
            } else {
                let candidates: Vec<usize> = (0..present)
                    .filter(|&u| u != v && !adj[v].contains(&u))
                    .collect();
                chosen.extend(
                    sample(&mut rng, candidates.len(), need)
                        .into_iter()
                        .map(|i| candidates[i]),
                );
            }
            for &u in &chosen {
                adj[v].push(u);
                adj[u].push(v);
                edges.push((v, u));
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push((v, shell, have, need));
            }
        }
    }
    let g = Graph::from_edges(adj.len(), edges)?;
    debug_assert_eq!(g.m() * 2, adj.iter().map(Vec::len).sum::<usize>());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cores::{core_decomposition, shell_distribution};

    fn dist(c: &[usize]) -> ShellDistribution {
        ShellDistribution::new(c.to_vec()).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = gen_shell_distribution(&dist(&[2]), 7).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(core_decomposition(&g).core, vec![1, 1]);
    }

    #[test]
    fn four_vertex_two_shell() {
        for seed in 0..20 {
            let g = gen_shell_distribution(&dist(&[0, 4]), seed).unwrap();
            let s = shell_distribution(&core_decomposition(&g));
            assert_eq!(s.counts, vec![0, 4]);
        }
    }

    #[test]
    fn infeasible_names_shell() {
        let err = gen_shell_distribution(&dist(&[0, 0, 2]), 1).unwrap_err();
        assert!(matches!(err, Error::Generation { shell: 3, .. }));
    }

    #[test]
    fn each_vertex_gets_exact_top_up() {
        let d = dist(&[30, 10, 5, 6]);
        let mut trace = Trace::new();
        let g = generate(&d, 3, Some(&mut trace)).unwrap();
        assert_eq!(shell_distribution(&core_decomposition(&g)).counts, d.counts);
        assert_eq!(trace.len(), g.n());
        let mut added = 0;
        for &(_, shell, before, new) in &trace {
            assert_eq!(new, shell.saturating_sub(before));
            added += new;
        }
        // no edge was ever placed twice
        assert_eq!(added, g.m());
    }

    #[test]
    fn reproducible() {
        let d = dist(&[5, 5, 5]);
        assert_eq!(
            gen_shell_distribution(&d, 11).unwrap(),
            gen_shell_distribution(&d, 11).unwrap()
        );
    }
}
